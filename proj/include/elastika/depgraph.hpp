#pragma once

#include "elastika/ir.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <string>
#include <vector>

namespace elastika
{

enum class DepKind
{
  WAR,
  RAW,
  PAC
};

std::string to_string( DepKind k );

/*! \brief One constraint of the dependency graph.
 *
 * `from` is the read or consumed resource and `to` its reader or
 * consumer. Variables are named by their component id (`var.x`),
 * channels as `chan:<port>`. `site` locates the access on the net: the
 * read-done link of a variable read, the port link of an input channel,
 * or the producer's output link of an output channel.
 */
struct DepEdge
{
  DepKind kind{ DepKind::PAC };
  std::string from;
  std::string to;
  std::string site;
  bool backward{ false };

  bool operator==( DepEdge const& ) const = default;
  auto operator<=>( DepEdge const& ) const = default;
};

struct DependencyGraph
{
  std::set<std::string> nodes;
  std::vector<DepEdge> edges;

  std::size_t count( DepKind k ) const;
  bool operator==( DependencyGraph const& ) const = default;
};

std::vector<DepEdge> extract_variable_constraints( Network const& net );
std::vector<DepEdge> extract_pac_constraints( Network const& net );

/// Union of both extractors, sorted and deduplicated.
DependencyGraph build( Network const& net );

/// Link after production for a destination component (the Phase-1 destination rule).
std::string production_site( Network const& net, std::string const& comp );

nlohmann::ordered_json to_json( DependencyGraph const& g );
std::string to_dot( DependencyGraph const& g );

} // namespace elastika
