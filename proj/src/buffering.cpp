#include "elastika/buffering.hpp"

#include "elastika/graph.hpp"

#include <algorithm>
#include <sstream>

namespace elastika
{

namespace
{

BufferPlan make( Policy policy, Mode mode, Marks const& chosen )
{
  BufferPlan plan{ policy, mode, {} };
  for ( auto const& [link, why] : chosen )
    plan.entries.push_back( { link, why } );
  return plan;
}

/* first reason wins so provenance stays stable across rule order changes */
void choose( Marks& m, std::string const& link, std::string const& why )
{
  m.emplace( link, why );
}

Link const* require( Network const& net, std::string const& id, DepEdge const& e )
{
  auto const* l = net.link( id );
  if ( !l )
    throw UnresolvedSite( "cannot locate site '" + id + "' of " + to_string( e.kind ) + " " + e.from + " -> " + e.to );
  return l;
}

std::string edge_label( DepEdge const& e )
{
  return to_string( e.kind ) + ( e.backward ? "(backward) " : " " ) + e.from + " -> " + e.to;
}

/* the single input a value passes through on its way out of `c`, if any */
Link const* pass_through_input( Network const& net, Component const& c, int out_port )
{
  switch ( c.kind )
  {
  case Kind::Operator:
  case Kind::Buffer:
  case Kind::Initial:
    return c.in_widths.size() == 1 ? net.input_link( c.id, 0 ) : nullptr;
  case Kind::Variable:
    return net.input_link( c.id, out_port );
  default:
    return nullptr;
  }
}

/* walks back from `l` to a dominating Fork; returns the fork id and the links on the way */
std::pair<std::string, std::vector<std::string>> path_to_fork( Network const& net, Link const* l )
{
  std::vector<std::string> path;
  while ( l && !l->from.external() )
  {
    path.push_back( l->id );
    auto const* p = net.component( l->from.comp );
    if ( p->kind == Kind::Fork )
      return { p->id, path };
    l = pass_through_input( net, *p, l->from.port );
  }
  return { {}, {} };
}

/* SELF balancing: equal planned-buffer counts on the control and data paths of each Steer */
void balance( Network const& net, Marks& chosen )
{
  for ( auto const& [id, c] : net.components() )
  {
    if ( c.kind != Kind::Steer )
      continue;
    /* find the Join assembling the steer's control and data */
    auto const* l = net.input_link( id, 0 );
    Component const* join = nullptr;
    while ( l && !l->from.external() )
    {
      auto const* p = net.component( l->from.comp );
      if ( p->kind == Kind::Join )
      {
        join = p;
        break;
      }
      l = pass_through_input( net, *p, l->from.port );
    }
    if ( !join )
      continue;

    std::map<std::string, std::vector<std::vector<std::string>>> by_fork;
    for ( std::size_t i = 0; i < join->in_widths.size(); ++i )
    {
      auto [fork, path] = path_to_fork( net, net.input_link( join->id, static_cast<int>( i ) ) );
      if ( !fork.empty() )
        by_fork[fork].push_back( std::move( path ) );
    }
    for ( auto& [fork, paths] : by_fork )
    {
      if ( paths.size() < 2 )
        continue;
      auto planned = [&]( std::vector<std::string> const& p ) {
        return std::count_if( p.begin(), p.end(), [&]( auto const& x ) { return chosen.count( x ) > 0; } );
      };
      long target = 0;
      for ( auto const& p : paths )
        target = std::max<long>( target, planned( p ) );
      for ( auto const& p : paths )
        for ( auto it = p.begin(); it != p.end() && planned( p ) < target; ++it )
          choose( chosen, *it, "balance " + id + " from " + fork );
    }
  }
}

} // namespace

std::string to_string( Policy p )
{
  switch ( p )
  {
  case Policy::Simple:
    return "simple";
  case Policy::Loop:
    return "loop";
  case Policy::PAC:
    return "pac";
  }
  return "?";
}

std::optional<Policy> policy_from_string( std::string const& s )
{
  for ( auto p : { Policy::Simple, Policy::Loop, Policy::PAC } )
    if ( to_string( p ) == s )
      return p;
  return std::nullopt;
}

std::set<std::string> BufferPlan::links() const
{
  std::set<std::string> s;
  for ( auto const& e : entries )
    s.insert( e.link );
  return s;
}

bool BufferPlan::contains( std::string const& link ) const
{
  return std::any_of( entries.begin(), entries.end(), [&]( auto const& e ) { return e.link == link; } );
}

BufferPlan policy_simple( Network const& net, Mode mode )
{
  Marks chosen;
  for ( auto const& [id, l] : net.links() )
    choose( chosen, id, "all-links" );
  return make( Policy::Simple, mode, chosen );
}

BufferPlan policy_loop( Network const& net, Mode mode )
{
  Marks chosen;
  for ( auto const& b : find_back_edges( net ) )
  {
    choose( chosen, b, "back-edge" );
    auto const& head = net.link( b )->to.comp;
    for ( auto const* o : out_links( net, head ) )
      choose( chosen, o->id, "after head " + head + " of " + b );
  }

  /* topology fix-up: plan the back-edge of any cycle still free of buffers */
  auto const back = find_back_edges( net );
  while ( true )
  {
    auto trial = apply( net, make( Policy::Loop, mode, chosen ) );
    auto cycle = combinational_cycle( trial );
    if ( cycle.empty() )
      break;
    std::string pick;
    for ( auto const& l : cycle )
      if ( pick.empty() && back.count( origin_of( l ) ) && !chosen.count( origin_of( l ) ) )
        pick = origin_of( l );
    for ( auto const& l : cycle )
      if ( pick.empty() && !chosen.count( origin_of( l ) ) )
        pick = origin_of( l );
    if ( pick.empty() )
      throw Error( "loop policy: buffer-free cycle through planned links" );
    choose( chosen, pick, "cycle cover" );
  }
  return make( Policy::Loop, mode, chosen );
}

Marks pac_mark( Network const& net, DependencyGraph const& dg )
{
  Marks marks;
  for ( auto const& e : dg.edges )
  {
    auto const* site = require( net, e.site, e );
    auto const label = edge_label( e );

    /* source side */
    auto const* src = net.component( e.from );
    if ( src && src->kind == Kind::Variable )
      choose( marks, site->id, label + " [after read]" );
    else if ( e.from.rfind( "chan:", 0 ) == 0 )
    {
      auto consumer = consumer_through_buffers( net, *site );
      auto const* c = consumer.external() ? nullptr : net.component( consumer.comp );
      if ( !c )
        throw UnresolvedSite( "channel " + e.from + " has no consumer" );
      auto outs = dependent_outputs( *c, consumer.port );
      auto const* after = outs.empty() ? nullptr : net.output_link( c->id, outs.front() );
      if ( !after )
        throw UnresolvedSite( "nothing follows the consumer of " + e.from );
      choose( marks, after->id, label + " [after consumer]" );
    }
    else
      choose( marks, site->id, label + " [after producer]" );

    /* destination side: the link after the production */
    std::string dest;
    auto const* dst = net.component( e.to );
    if ( e.to.rfind( "chan:", 0 ) == 0 )
      dest = site->id;
    else if ( !dst )
      throw UnresolvedSite( "unknown destination '" + e.to + "'" );
    else if ( dst->kind == Kind::Variable || dst->kind == Kind::Operator )
      dest = net.output_link( dst->id, 0 ) ? net.output_link( dst->id, 0 )->id : "";
    else
      dest = production_site( net, dst->id );
    if ( dest.empty() )
      throw UnresolvedSite( "no production link at '" + e.to + "'" );
    choose( marks, dest, label + " [after production]" );
  }
  return marks;
}

BufferPlan pac_retime( Network const& net, Marks const& marks, Mode mode )
{
  Marks chosen;
  for ( auto const& [link, why] : marks )
  {
    auto const* l = net.link( link );
    if ( !l )
      throw UnknownLink( "marked link '" + link + "' not in network" );
    std::string reason = why;
    /* a mark entering a Join moves to the Join's output; every other component keeps it */
    while ( !l->to.external() && net.component( l->to.comp )->kind == Kind::Join )
    {
      auto const* o = net.output_link( l->to.comp, 0 );
      if ( !o )
        break;
      reason += "; retimed past " + l->to.comp;
      l = o;
    }
    choose( chosen, l->id, reason );
  }

  /* no go signal at the top: the Initial needs buffers on both sides */
  for ( auto const& [id, c] : net.components() )
  {
    if ( c.kind != Kind::Initial )
      continue;
    if ( auto const* i = net.input_link( id, 0 ) )
      choose( chosen, i->id, "before " + id );
    if ( auto const* o = net.output_link( id, 0 ) )
      choose( chosen, o->id, "after " + id );
  }

  if ( mode == Mode::SyncElastic )
    balance( net, chosen );
  return make( Policy::PAC, mode, chosen );
}

BufferPlan policy_pac( Network const& net, Mode mode )
{
  return pac_retime( net, pac_mark( net, build( net ) ), mode );
}

BufferPlan make_plan( Network const& net, Policy policy, Mode mode )
{
  switch ( policy )
  {
  case Policy::Simple:
    return policy_simple( net, mode );
  case Policy::Loop:
    return policy_loop( net, mode );
  case Policy::PAC:
    return policy_pac( net, mode );
  }
  return {};
}

Network apply( Network const& net, BufferPlan const& plan )
{
  Network out = net;
  for ( auto const& e : plan.entries )
    out = splice_buffer( out, e.link );
  return out;
}

std::string write_plan( BufferPlan const& plan )
{
  std::ostringstream os;
  os << "# policy=" << to_string( plan.policy ) << " mode=" << to_string( plan.mode ) << " buffers=" << plan.size()
     << "\n";
  for ( auto const& e : plan.entries )
    os << e.link << " " << e.provenance << "\n";
  return os.str();
}

} // namespace elastika
