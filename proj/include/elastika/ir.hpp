#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace elastika
{

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class UnknownLink : public Error
{
public:
  using Error::Error;
};

class DoubleBuffer : public Error
{
public:
  using Error::Error;
};

class NetlistError : public Error
{
public:
  using Error::Error;
};

enum class Kind
{
  Steer,
  Fork,
  Merge,
  Join,
  Variable,
  Operator,
  Initial,
  Buffer,
  Arbiter
};

std::string to_string( Kind k );
std::optional<Kind> kind_from_string( std::string const& s );

/// Handshake protocol a network is buffered for and simulated in.
enum class Mode
{
  Async,
  SyncElastic
};

std::string to_string( Mode m );
std::optional<Mode> mode_from_string( std::string const& s );

/// True for components that store tokens or values (counted as memory in area).
inline bool is_memory( Kind k ) { return k == Kind::Variable || k == Kind::Buffer; }

/*! \brief Kind-specific parameters.
 *
 * Only the fields relevant to a component's kind are meaningful; the
 * netlist writer emits only those.
 */
struct Params
{
  /* Steer: the low `ctrl_width` bits of the input select an output via `cases`;
   * the remaining high bits travel on. `default_case` catches unmatched values. */
  int ctrl_width{ 0 };
  std::vector<std::vector<uint64_t>> cases;
  int default_case{ -1 };

  /* Operator */
  std::string op;
  std::string delay_class;
  int64_t imm{ 0 };
  std::vector<int> fields;

  /* Initial */
  uint64_t init{ 0 };

  /* Buffer */
  int capacity{ 1 };
  std::string origin;

  /* Variable */
  int width{ 0 };

  bool operator==( Params const& ) const = default;
};

struct Component
{
  std::string id;
  Kind kind{ Kind::Operator };
  Params params;
  std::vector<int> in_widths;
  std::vector<int> out_widths;

  bool operator==( Component const& ) const = default;
};

/// Link endpoint; an empty `comp` means the endpoint is bound to an external port.
struct Endpoint
{
  std::string comp;
  int port{ 0 };

  bool external() const { return comp.empty(); }
  bool operator==( Endpoint const& ) const = default;
  auto operator<=>( Endpoint const& ) const = default;
};

struct Link
{
  std::string id;
  int width{ 0 };
  Endpoint from;
  Endpoint to;

  bool operator==( Link const& ) const = default;
};

enum class Dir
{
  In,
  Out
};

struct ExternalPort
{
  std::string name;
  Dir dir{ Dir::In };
  int width{ 0 };
  std::string link;

  bool operator==( ExternalPort const& ) const = default;
};

/*! \brief Elastic dataflow network.
 *
 * Immutable once constructed. Port-to-link indexes are built eagerly so
 * a network can be shared read-only between threads.
 */
class Network
{
public:
  Network() = default;
  Network( std::string name,
           std::vector<Component> components,
           std::vector<Link> links,
           std::vector<ExternalPort> ports );

  std::string const& name() const { return _name; }
  std::map<std::string, Component> const& components() const { return _components; }
  std::map<std::string, Link> const& links() const { return _links; }
  std::vector<ExternalPort> const& ports() const { return _ports; }

  Component const* component( std::string const& id ) const;
  Link const* link( std::string const& id ) const;
  ExternalPort const* port( std::string const& name ) const;

  /// Link driving input `port` of `comp`, or nullptr if unbound.
  Link const* input_link( std::string const& comp, int port ) const;
  /// Link driven by output `port` of `comp`, or nullptr if unbound.
  Link const* output_link( std::string const& comp, int port ) const;

  std::size_t count( Kind k ) const;

  bool operator==( Network const& o ) const
  {
    return _name == o._name && _components == o._components && _links == o._links && _ports == o._ports;
  }

private:
  std::string _name;
  std::map<std::string, Component> _components;
  std::map<std::string, Link> _links;
  std::vector<ExternalPort> _ports;
  std::map<Endpoint, std::string> _by_input;
  std::map<Endpoint, std::string> _by_output;
};

struct Diagnostic
{
  std::string subject;
  std::string rule;
  std::string message;
};

std::vector<Diagnostic> validate( Network const& net );

/// Original link a (possibly split) link descends from.
std::string origin_of( std::string const& link_id );

Network splice_buffer( Network const& net, std::string const& link_id, int capacity = 1 );

/// Port-level successors: output ports of `c` that depend on input `in_port`.
std::vector<int> dependent_outputs( Component const& c, int in_port );
/// Port-level predecessors: input ports of `c` that output `out_port` depends on.
std::vector<int> supporting_inputs( Component const& c, int out_port );

} // namespace elastika
