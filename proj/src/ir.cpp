#include "elastika/ir.hpp"
#include "elastika/ops.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

namespace elastika
{

namespace
{

constexpr std::array<std::pair<Kind, char const*>, 9> kind_names{ { { Kind::Steer, "steer" },
                                                                     { Kind::Fork, "fork" },
                                                                     { Kind::Merge, "merge" },
                                                                     { Kind::Join, "join" },
                                                                     { Kind::Variable, "variable" },
                                                                     { Kind::Operator, "operator" },
                                                                     { Kind::Initial, "initial" },
                                                                     { Kind::Buffer, "buffer" },
                                                                     { Kind::Arbiter, "arbiter" } } };

constexpr char const* split_suffix = "~b";

} // namespace

std::string to_string( Kind k )
{
  for ( auto const& [kind, name] : kind_names )
    if ( kind == k )
      return name;
  return "?";
}

std::optional<Kind> kind_from_string( std::string const& s )
{
  for ( auto const& [kind, name] : kind_names )
    if ( s == name )
      return kind;
  return std::nullopt;
}

std::string to_string( Mode m )
{
  return m == Mode::Async ? "async" : "sync";
}

std::optional<Mode> mode_from_string( std::string const& s )
{
  if ( s == "async" )
    return Mode::Async;
  if ( s == "sync" )
    return Mode::SyncElastic;
  return std::nullopt;
}

Network::Network( std::string name,
                  std::vector<Component> components,
                  std::vector<Link> links,
                  std::vector<ExternalPort> ports )
    : _name( std::move( name ) ), _ports( std::move( ports ) )
{
  for ( auto& c : components )
  {
    auto id = c.id;
    if ( !_components.emplace( id, std::move( c ) ).second )
      throw NetlistError( "duplicate component id '" + id + "'" );
  }
  for ( auto& l : links )
  {
    auto id = l.id;
    if ( !l.to.external() )
      _by_input.emplace( l.to, id );
    if ( !l.from.external() )
      _by_output.emplace( l.from, id );
    if ( !_links.emplace( id, std::move( l ) ).second )
      throw NetlistError( "duplicate link id '" + id + "'" );
  }
}

Component const* Network::component( std::string const& id ) const
{
  auto it = _components.find( id );
  return it == _components.end() ? nullptr : &it->second;
}

Link const* Network::link( std::string const& id ) const
{
  auto it = _links.find( id );
  return it == _links.end() ? nullptr : &it->second;
}

ExternalPort const* Network::port( std::string const& name ) const
{
  for ( auto const& p : _ports )
    if ( p.name == name )
      return &p;
  return nullptr;
}

Link const* Network::input_link( std::string const& comp, int port ) const
{
  auto it = _by_input.find( Endpoint{ comp, port } );
  return it == _by_input.end() ? nullptr : link( it->second );
}

Link const* Network::output_link( std::string const& comp, int port ) const
{
  auto it = _by_output.find( Endpoint{ comp, port } );
  return it == _by_output.end() ? nullptr : link( it->second );
}

std::size_t Network::count( Kind k ) const
{
  return std::count_if( _components.begin(), _components.end(), [k]( auto const& kv ) { return kv.second.kind == k; } );
}

std::vector<int> dependent_outputs( Component const& c, int in_port )
{
  if ( c.kind == Kind::Buffer )
    return {};
  if ( c.kind == Kind::Variable )
    return { in_port };
  std::vector<int> outs( c.out_widths.size() );
  for ( std::size_t i = 0; i < outs.size(); ++i )
    outs[i] = static_cast<int>( i );
  return outs;
}

std::vector<int> supporting_inputs( Component const& c, int out_port )
{
  if ( c.kind == Kind::Buffer )
    return {};
  if ( c.kind == Kind::Variable )
    return { out_port };
  std::vector<int> ins( c.in_widths.size() );
  for ( std::size_t i = 0; i < ins.size(); ++i )
    ins[i] = static_cast<int>( i );
  return ins;
}

namespace
{

void check_arity( Component const& c, std::vector<Diagnostic>& out )
{
  auto const ni = c.in_widths.size();
  auto const no = c.out_widths.size();
  auto fail = [&]( std::string msg ) { out.push_back( { c.id, "arity", to_string( c.kind ) + ": " + msg } ); };

  switch ( c.kind )
  {
  case Kind::Join:
    if ( ni < 2 || no != 1 )
      fail( "needs >=2 inputs and exactly 1 output" );
    break;
  case Kind::Fork:
    if ( ni != 1 || no < 2 )
      fail( "needs 1 input and >=2 outputs" );
    break;
  case Kind::Steer:
    if ( ni != 1 || no < 2 )
      fail( "needs 1 input and >=2 outputs" );
    break;
  case Kind::Merge:
  case Kind::Arbiter:
    if ( ni < 2 || no != 1 )
      fail( "needs >=2 inputs and exactly 1 output" );
    break;
  case Kind::Operator:
    if ( ni < 1 || no != 1 )
      fail( "needs >=1 input and exactly 1 output" );
    break;
  case Kind::Buffer:
  case Kind::Initial:
    if ( ni != 1 || no != 1 )
      fail( "needs exactly 1 input and 1 output" );
    break;
  case Kind::Variable:
    if ( ni < 2 || ni != no )
      fail( "needs one write pair and >=1 read pairs" );
    break;
  }
}

void check_widths( Component const& c, std::vector<Diagnostic>& out )
{
  auto fail = [&]( std::string msg ) { out.push_back( { c.id, "width", msg } ); };
  for ( int w : c.in_widths )
    if ( w < 0 || w > 64 )
      fail( "port width outside [0, 64]" );
  for ( int w : c.out_widths )
    if ( w < 0 || w > 64 )
      fail( "port width outside [0, 64]" );
  if ( c.in_widths.empty() || c.out_widths.empty() )
    return;

  int const in0 = c.in_widths[0];
  switch ( c.kind )
  {
  case Kind::Join:
  {
    int sum = 0;
    for ( int w : c.in_widths )
      sum += w;
    if ( sum != c.out_widths[0] )
      fail( "join output must be the concatenation of its inputs" );
    break;
  }
  case Kind::Fork:
    for ( int w : c.out_widths )
      if ( w > in0 )
        fail( "fork output wider than its input" );
    break;
  case Kind::Steer:
    if ( c.params.ctrl_width > in0 )
      fail( "steer control wider than its input" );
    for ( int w : c.out_widths )
      if ( w != in0 - c.params.ctrl_width )
        fail( "steer outputs carry the input minus its control bits" );
    if ( c.params.cases.size() != c.out_widths.size() )
      out.push_back( { c.id, "steer-table", "one case list per output required" } );
    break;
  case Kind::Merge:
  case Kind::Arbiter:
    for ( int w : c.in_widths )
      if ( w != c.out_widths[0] )
        fail( "all inputs must match the output width" );
    break;
  case Kind::Buffer:
  case Kind::Initial:
    if ( in0 != c.out_widths[0] )
      fail( "input and output widths differ" );
    if ( c.kind == Kind::Buffer && c.params.capacity < 1 )
      out.push_back( { c.id, "capacity", "buffer capacity must be >= 1" } );
    break;
  case Kind::Variable:
    if ( in0 != c.params.width || c.out_widths[0] != 0 )
      fail( "write pair must be (width, 0)" );
    for ( std::size_t i = 1; i < c.in_widths.size() && i < c.out_widths.size(); ++i )
      if ( c.in_widths[i] != 0 || c.out_widths[i] != c.params.width )
        fail( "read pair " + std::to_string( i - 1 ) + " must be (0, width)" );
    break;
  case Kind::Operator:
  {
    if ( !known_operator( c.params.op ) )
      out.push_back( { c.id, "operator", "unknown function descriptor '" + c.params.op + "'" } );
    int sum = 0;
    for ( int w : c.in_widths )
      sum += w;
    if ( sum > 64 )
      fail( "operator input word wider than 64 bits" );
    break;
  }
  }
}

} // namespace

std::vector<Diagnostic> validate( Network const& net )
{
  std::vector<Diagnostic> out;

  for ( auto const& [id, c] : net.components() )
  {
    check_arity( c, out );
    check_widths( c, out );
  }

  std::map<Endpoint, int> in_uses, out_uses;
  for ( auto const& [id, l] : net.links() )
  {
    if ( l.width < 0 || l.width > 64 )
      out.push_back( { id, "width", "link width outside [0, 64]" } );
    auto check_end = [&]( Endpoint const& e, bool is_input ) {
      if ( e.external() )
        return;
      auto const* c = net.component( e.comp );
      if ( !c )
      {
        out.push_back( { id, "dangling", "endpoint names unknown component '" + e.comp + "'" } );
        return;
      }
      auto const& widths = is_input ? c->in_widths : c->out_widths;
      if ( e.port < 0 || e.port >= static_cast<int>( widths.size() ) )
      {
        out.push_back( { id, "port", "port " + std::to_string( e.port ) + " out of range on '" + e.comp + "'" } );
        return;
      }
      if ( widths[e.port] != l.width )
        out.push_back( { id, "width", "link width " + std::to_string( l.width ) + " differs from port width " +
                                          std::to_string( widths[e.port] ) + " on '" + e.comp + "'" } );
      ( is_input ? in_uses : out_uses )[e]++;
    };
    check_end( l.from, false );
    check_end( l.to, true );
    if ( l.from.external() && l.to.external() )
      out.push_back( { id, "dangling", "link has no component endpoint" } );
  }

  for ( auto const& [id, c] : net.components() )
  {
    for ( std::size_t i = 0; i < c.in_widths.size(); ++i )
    {
      auto n = in_uses[Endpoint{ id, static_cast<int>( i ) }];
      if ( n != 1 )
        out.push_back( { id, "binding", "input " + std::to_string( i ) + " driven by " + std::to_string( n ) + " links" } );
    }
    for ( std::size_t i = 0; i < c.out_widths.size(); ++i )
    {
      auto n = out_uses[Endpoint{ id, static_cast<int>( i ) }];
      if ( n != 1 )
        out.push_back( { id, "binding", "output " + std::to_string( i ) + " drives " + std::to_string( n ) + " links" } );
    }
  }

  std::set<std::string> bound;
  for ( auto const& p : net.ports() )
  {
    auto const* l = net.link( p.link );
    if ( !l )
    {
      out.push_back( { p.name, "port", "bound to unknown link '" + p.link + "'" } );
      continue;
    }
    if ( !bound.insert( p.link ).second )
      out.push_back( { p.name, "port", "link '" + p.link + "' bound to several ports" } );
    if ( l->width != p.width )
      out.push_back( { p.name, "width", "port width differs from its link" } );
    bool const dangling_ok = p.dir == Dir::In ? l->from.external() : l->to.external();
    if ( !dangling_ok )
      out.push_back( { p.name, "port", "link '" + p.link + "' has no free endpoint on the port side" } );
  }
  for ( auto const& [id, l] : net.links() )
    if ( ( l.from.external() || l.to.external() ) && !bound.count( id ) )
      out.push_back( { id, "dangling", "free endpoint not bound to an external port" } );

  /* weak connectivity */
  if ( !net.components().empty() )
  {
    std::map<std::string, std::string> parent;
    std::function<std::string( std::string const& )> find = [&]( std::string const& x ) -> std::string {
      auto& p = parent[x];
      if ( p.empty() || p == x )
        return p = x;
      return p = find( p );
    };
    for ( auto const& [id, c] : net.components() )
      find( id );
    for ( auto const& [id, l] : net.links() )
      if ( !l.from.external() && !l.to.external() && net.component( l.from.comp ) && net.component( l.to.comp ) )
        parent[find( l.from.comp )] = find( l.to.comp );
    std::set<std::string> roots;
    for ( auto const& [id, c] : net.components() )
      roots.insert( find( id ) );
    if ( roots.size() > 1 )
      out.push_back( { net.name(), "connectivity", std::to_string( roots.size() ) + " disconnected parts" } );
  }

  return out;
}

std::string origin_of( std::string const& link_id )
{
  auto pos = link_id.find( split_suffix );
  return pos == std::string::npos ? link_id : link_id.substr( 0, pos );
}

Network splice_buffer( Network const& net, std::string const& link_id, int capacity )
{
  auto const* l = net.link( link_id );
  if ( !l )
    throw UnknownLink( "no link '" + link_id + "'" );
  auto const origin = origin_of( link_id );
  for ( auto const& [id, c] : net.components() )
    if ( c.kind == Kind::Buffer && c.params.origin == origin )
      throw DoubleBuffer( "link '" + origin + "' already carries buffer '" + id + "'" );

  std::vector<Component> comps;
  comps.reserve( net.components().size() + 1 );
  for ( auto const& [id, c] : net.components() )
    comps.push_back( c );

  Component buf;
  buf.id = "buf." + origin;
  buf.kind = Kind::Buffer;
  buf.params.capacity = capacity;
  buf.params.origin = origin;
  buf.in_widths = { l->width };
  buf.out_widths = { l->width };
  comps.push_back( buf );

  std::string out_id = link_id + split_suffix;
  while ( net.link( out_id ) )
    out_id += split_suffix;

  std::vector<Link> links;
  links.reserve( net.links().size() + 1 );
  for ( auto const& [id, x] : net.links() )
  {
    if ( id != link_id )
    {
      links.push_back( x );
      continue;
    }
    links.push_back( Link{ id, x.width, x.from, Endpoint{ buf.id, 0 } } );
    links.push_back( Link{ out_id, x.width, Endpoint{ buf.id, 0 }, x.to } );
  }

  auto ports = net.ports();
  for ( auto& p : ports )
    if ( p.link == link_id && p.dir == Dir::Out )
      p.link = out_id;

  return Network( net.name(), std::move( comps ), std::move( links ), std::move( ports ) );
}

} // namespace elastika
