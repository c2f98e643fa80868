#include "elastika/netlist_io.hpp"

#include <fstream>
#include <sstream>

namespace elastika
{

using ojson = nlohmann::ordered_json;

namespace
{

ojson endpoint_json( Endpoint const& e )
{
  if ( e.external() )
    return nullptr;
  ojson j;
  j["comp"] = e.comp;
  j["port"] = e.port;
  return j;
}

Endpoint endpoint_from( nlohmann::json const& j )
{
  if ( j.is_null() )
    return {};
  return Endpoint{ j.at( "comp" ).get<std::string>(), j.at( "port" ).get<int>() };
}

ojson params_json( Component const& c )
{
  ojson p;
  p["in"] = c.in_widths;
  p["out"] = c.out_widths;
  auto const& k = c.params;
  switch ( c.kind )
  {
  case Kind::Steer:
    p["ctrl_width"] = k.ctrl_width;
    p["cases"] = k.cases;
    p["default"] = k.default_case;
    break;
  case Kind::Operator:
    p["op"] = k.op;
    p["delay_class"] = k.delay_class;
    p["imm"] = k.imm;
    p["fields"] = k.fields;
    break;
  case Kind::Initial:
    p["init"] = k.init;
    break;
  case Kind::Buffer:
    p["capacity"] = k.capacity;
    p["origin"] = k.origin;
    break;
  case Kind::Variable:
    p["width"] = k.width;
    break;
  default:
    break;
  }
  return p;
}

Params params_from( Kind kind, nlohmann::json const& p )
{
  Params k;
  switch ( kind )
  {
  case Kind::Steer:
    k.ctrl_width = p.at( "ctrl_width" ).get<int>();
    k.cases = p.at( "cases" ).get<std::vector<std::vector<uint64_t>>>();
    k.default_case = p.value( "default", -1 );
    break;
  case Kind::Operator:
    k.op = p.at( "op" ).get<std::string>();
    k.delay_class = p.value( "delay_class", std::string{} );
    k.imm = p.value( "imm", int64_t{ 0 } );
    k.fields = p.value( "fields", std::vector<int>{} );
    break;
  case Kind::Initial:
    k.init = p.value( "init", uint64_t{ 0 } );
    break;
  case Kind::Buffer:
    k.capacity = p.value( "capacity", 1 );
    k.origin = p.value( "origin", std::string{} );
    break;
  case Kind::Variable:
    k.width = p.at( "width" ).get<int>();
    break;
  default:
    break;
  }
  return k;
}

} // namespace

ojson to_json( Network const& net )
{
  ojson j;
  j["name"] = net.name();
  j["components"] = ojson::array();
  for ( auto const& [id, c] : net.components() )
  {
    ojson cj;
    cj["id"] = id;
    cj["kind"] = to_string( c.kind );
    cj["params"] = params_json( c );
    j["components"].push_back( std::move( cj ) );
  }
  j["links"] = ojson::array();
  for ( auto const& [id, l] : net.links() )
  {
    ojson lj;
    lj["id"] = id;
    lj["width"] = l.width;
    lj["from"] = endpoint_json( l.from );
    lj["to"] = endpoint_json( l.to );
    j["links"].push_back( std::move( lj ) );
  }
  j["ports"] = ojson::array();
  for ( auto const& p : net.ports() )
  {
    ojson pj;
    pj["name"] = p.name;
    pj["dir"] = p.dir == Dir::In ? "in" : "out";
    pj["width"] = p.width;
    pj["link"] = p.link;
    j["ports"].push_back( std::move( pj ) );
  }
  return j;
}

Network network_from_json( nlohmann::json const& j )
{
  try
  {
    std::vector<Component> comps;
    for ( auto const& cj : j.at( "components" ) )
    {
      Component c;
      c.id = cj.at( "id" ).get<std::string>();
      auto kind = kind_from_string( cj.at( "kind" ).get<std::string>() );
      if ( !kind )
        throw NetlistError( "component '" + c.id + "': unknown kind" );
      c.kind = *kind;
      auto const& p = cj.at( "params" );
      c.in_widths = p.at( "in" ).get<std::vector<int>>();
      c.out_widths = p.at( "out" ).get<std::vector<int>>();
      c.params = params_from( c.kind, p );
      comps.push_back( std::move( c ) );
    }
    std::vector<Link> links;
    for ( auto const& lj : j.at( "links" ) )
      links.push_back( Link{ lj.at( "id" ).get<std::string>(), lj.at( "width" ).get<int>(), endpoint_from( lj.at( "from" ) ),
                             endpoint_from( lj.at( "to" ) ) } );
    std::vector<ExternalPort> ports;
    for ( auto const& pj : j.at( "ports" ) )
    {
      auto dir = pj.at( "dir" ).get<std::string>();
      if ( dir != "in" && dir != "out" )
        throw NetlistError( "port direction must be 'in' or 'out'" );
      ports.push_back( ExternalPort{ pj.at( "name" ).get<std::string>(), dir == "in" ? Dir::In : Dir::Out,
                                     pj.at( "width" ).get<int>(), pj.at( "link" ).get<std::string>() } );
    }
    return Network( j.at( "name" ).get<std::string>(), std::move( comps ), std::move( links ), std::move( ports ) );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw NetlistError( std::string( "malformed netlist: " ) + e.what() );
  }
}

std::string write_netlist( Network const& net )
{
  return to_json( net ).dump( 2 ) + "\n";
}

Network read_netlist( std::string const& text )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw NetlistError( std::string( "netlist is not valid JSON: " ) + e.what() );
  }
  return network_from_json( j );
}

std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw Error( "cannot open '" + path + "'" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw Error( "cannot write '" + path + "'" );
  out << text;
}

Network load_netlist( std::string const& path )
{
  return read_netlist( read_file( path ) );
}

void save_netlist( Network const& net, std::string const& path )
{
  write_file( path, write_netlist( net ) );
}

std::string to_dot( Network const& net, std::set<std::string> const& highlight )
{
  auto q = []( std::string const& s ) { return "\"" + s + "\""; };
  std::ostringstream os;
  os << "digraph " << q( net.name() ) << " {\n  rankdir=TB;\n  node [fontsize=10];\n";
  for ( auto const& [id, c] : net.components() )
  {
    std::string shape = "box";
    switch ( c.kind )
    {
    case Kind::Fork:
    case Kind::Join:
      shape = "triangle";
      break;
    case Kind::Steer:
    case Kind::Merge:
    case Kind::Arbiter:
      shape = "trapezium";
      break;
    case Kind::Variable:
      shape = "box3d";
      break;
    case Kind::Buffer:
      shape = "rect";
      break;
    case Kind::Initial:
      shape = "doublecircle";
      break;
    default:
      break;
    }
    std::string label = to_string( c.kind );
    if ( c.kind == Kind::Operator )
      label += " " + c.params.op;
    os << "  " << q( id ) << " [shape=" << shape << ", label=" << q( label + "\\n" + id ) << "];\n";
  }
  for ( auto const& p : net.ports() )
    os << "  " << q( "port:" + p.name ) << " [shape=plaintext, label=" << q( p.name ) << "];\n";
  auto port_of = [&]( std::string const& link ) -> std::string {
    for ( auto const& p : net.ports() )
      if ( p.link == link )
        return "port:" + p.name;
    return "?";
  };
  for ( auto const& [id, l] : net.links() )
  {
    auto from = l.from.external() ? port_of( id ) : l.from.comp;
    auto to = l.to.external() ? port_of( id ) : l.to.comp;
    os << "  " << q( from ) << " -> " << q( to ) << " [label=" << q( id + ":" + std::to_string( l.width ) );
    if ( highlight.count( id ) )
      os << ", penwidth=3, color=red";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace elastika
