#include "elastika/depgraph.hpp"

#include "elastika/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace elastika
{

namespace
{

/* links reachable from `start` (inclusive) at port level, buffers being transparent */
std::set<std::string> reachable( Network const& net, std::string const& start, bool stop_at_initial )
{
  std::set<std::string> seen{ start };
  std::deque<std::string> queue{ start };
  while ( !queue.empty() )
  {
    auto const* l = net.link( queue.front() );
    queue.pop_front();
    if ( stop_at_initial && !l->to.external() && net.component( l->to.comp )->kind == Kind::Initial )
      continue;
    for ( auto& n : next_links( net, *l, false ) )
      if ( seen.insert( n ).second )
        queue.push_back( n );
  }
  return seen;
}

std::string chan_node( std::string const& port ) { return "chan:" + port; }

std::string link_or_empty( Link const* l ) { return l ? l->id : std::string{}; }

} // namespace

std::string to_string( DepKind k )
{
  switch ( k )
  {
  case DepKind::WAR:
    return "WAR";
  case DepKind::RAW:
    return "RAW";
  case DepKind::PAC:
    return "PAC";
  }
  return "?";
}

std::size_t DependencyGraph::count( DepKind k ) const
{
  return std::count_if( edges.begin(), edges.end(), [k]( auto const& e ) { return e.kind == k; } );
}

std::vector<DepEdge> extract_variable_constraints( Network const& net )
{
  std::vector<DepEdge> out;
  for ( auto const& [id, c] : net.components() )
  {
    if ( c.kind != Kind::Variable )
      continue;
    auto const wg = link_or_empty( net.input_link( id, 0 ) );
    auto const wd = link_or_empty( net.output_link( id, 0 ) );
    if ( wg.empty() || wd.empty() )
      continue;
    auto const after_write = reachable( net, wd, false );
    for ( int r = 1; r < static_cast<int>( c.in_widths.size() ); ++r )
    {
      auto const* rg = net.input_link( id, r );
      auto const* rd = net.output_link( id, r );
      if ( !rg || !rd )
        continue;
      if ( reachable( net, rd->id, false ).count( wg ) )
        out.push_back( { DepKind::WAR, id, id, rd->id, false } );
      if ( after_write.count( rg->id ) )
      {
        auto reader = consumer_through_buffers( net, *rd );
        if ( !reader.external() )
          out.push_back( { DepKind::RAW, id, reader.comp, rd->id, false } );
      }
    }
  }
  return out;
}

std::vector<DepEdge> extract_pac_constraints( Network const& net )
{
  std::vector<DepEdge> out;
  for ( auto const& p : net.ports() )
  {
    auto const* l = net.link( p.link );
    if ( !l )
      continue;
    if ( p.dir == Dir::In )
    {
      auto consumer = consumer_through_buffers( net, *l );
      if ( !consumer.external() )
        out.push_back( { DepKind::PAC, chan_node( p.name ), consumer.comp, l->id, false } );
    }
    else
    {
      auto producer = producer_through_buffers( net, *l );
      if ( producer.empty() )
        continue;
      /* the producer's own output link keeps its id under buffering */
      std::string site;
      for ( auto const* o : out_links( net, producer ) )
        if ( site.empty() && consumer_through_buffers( net, *o ).external() )
          site = o->id;
      for ( int i = 0; site.empty() && i < static_cast<int>( net.component( producer )->out_widths.size() ); ++i )
        if ( auto const* o = net.output_link( producer, i ); o && o->to.external() )
          site = o->id;
      out.push_back( { DepKind::PAC, producer, chan_node( p.name ), site, false } );
    }
  }

  /* every variable doubles as a channel from its write to each read */
  for ( auto const& [id, c] : net.components() )
  {
    if ( c.kind != Kind::Variable )
      continue;
    auto const* wg = net.input_link( id, 0 );
    auto const* wd = net.output_link( id, 0 );
    if ( !wg || !wd )
      continue;
    auto const after_write = reachable( net, wd->id, false );
    for ( int r = 1; r < static_cast<int>( c.in_widths.size() ); ++r )
    {
      auto const* rg = net.input_link( id, r );
      auto const* rd = net.output_link( id, r );
      if ( !rg || !rd || !after_write.count( rg->id ) )
        continue;
      auto reader = consumer_through_buffers( net, *rd );
      if ( !reader.external() )
        out.push_back( { DepKind::PAC, id, reader.comp, rd->id, false } );
      /* a loop inside the round leads the consumer back to the producer */
      if ( reachable( net, rd->id, true ).count( wg->id ) )
        out.push_back( { DepKind::PAC, id, id, rd->id, true } );
    }
  }
  return out;
}

DependencyGraph build( Network const& net )
{
  DependencyGraph g;
  g.edges = extract_variable_constraints( net );
  auto pac = extract_pac_constraints( net );
  g.edges.insert( g.edges.end(), pac.begin(), pac.end() );
  std::sort( g.edges.begin(), g.edges.end() );
  g.edges.erase( std::unique( g.edges.begin(), g.edges.end() ), g.edges.end() );
  for ( auto const& e : g.edges )
  {
    g.nodes.insert( e.from );
    g.nodes.insert( e.to );
  }
  return g;
}

std::string production_site( Network const& net, std::string const& comp )
{
  auto const* c = net.component( comp );
  if ( !c )
    return {};
  switch ( c->kind )
  {
  case Kind::Fork:
  case Kind::Steer:
    /* several outputs: the activation arriving at the component */
    return link_or_empty( net.input_link( comp, 0 ) );
  default:
    return link_or_empty( net.output_link( comp, 0 ) );
  }
}

nlohmann::ordered_json to_json( DependencyGraph const& g )
{
  nlohmann::ordered_json j;
  j["nodes"] = g.nodes;
  j["edges"] = nlohmann::ordered_json::array();
  for ( auto const& e : g.edges )
  {
    nlohmann::ordered_json ej;
    ej["kind"] = to_string( e.kind );
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["site"] = e.site;
    ej["backward"] = e.backward;
    j["edges"].push_back( std::move( ej ) );
  }
  return j;
}

std::string to_dot( DependencyGraph const& g )
{
  auto q = []( std::string const& s ) { return "\"" + s + "\""; };
  std::ostringstream os;
  os << "digraph deps {\n  node [fontsize=10];\n";
  for ( auto const& n : g.nodes )
    os << "  " << q( n ) << " [shape=" << ( n.rfind( "chan:", 0 ) == 0 ? "ellipse" : "box" ) << "];\n";
  for ( auto const& e : g.edges )
  {
    os << "  " << q( e.from ) << " -> " << q( e.to ) << " [label=" << q( to_string( e.kind ) + " " + e.site );
    if ( e.backward )
      os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace elastika
