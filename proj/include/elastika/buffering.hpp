#pragma once

#include "elastika/depgraph.hpp"
#include "elastika/ir.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace elastika
{

/// A dependency edge whose access site is missing from the net.
class UnresolvedSite : public Error
{
public:
  using Error::Error;
};

enum class Policy
{
  Simple,
  Loop,
  PAC
};

std::string to_string( Policy p );
std::optional<Policy> policy_from_string( std::string const& s );

struct PlanEntry
{
  std::string link;
  std::string provenance;

  bool operator==( PlanEntry const& ) const = default;
};

/// Links chosen for buffering, sorted by link id, each with the rule that chose it.
struct BufferPlan
{
  Policy policy{ Policy::Simple };
  Mode mode{ Mode::Async };
  std::vector<PlanEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::set<std::string> links() const;
  bool contains( std::string const& link ) const;

  bool operator==( BufferPlan const& ) const = default;
};

/// Phase-1 marks: link id to the reason it was marked.
using Marks = std::map<std::string, std::string>;

BufferPlan policy_simple( Network const& net, Mode mode = Mode::Async );
BufferPlan policy_loop( Network const& net, Mode mode = Mode::Async );

Marks pac_mark( Network const& net, DependencyGraph const& dg );
BufferPlan pac_retime( Network const& net, Marks const& marks, Mode mode = Mode::Async );

/// pac_retime( net, pac_mark( net, build( net ) ), mode ).
BufferPlan policy_pac( Network const& net, Mode mode = Mode::Async );
BufferPlan make_plan( Network const& net, Policy policy, Mode mode );

Network apply( Network const& net, BufferPlan const& plan );

/// Plan file: a header comment, then `<link> <provenance>` per line.
std::string write_plan( BufferPlan const& plan );

} // namespace elastika
