#include "elastika/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace elastika
{

std::vector<Link const*> out_links( Network const& net, std::string const& comp )
{
  std::vector<Link const*> res;
  auto const* c = net.component( comp );
  if ( !c )
    return res;
  for ( std::size_t i = 0; i < c->out_widths.size(); ++i )
    if ( auto const* l = net.output_link( comp, static_cast<int>( i ) ) )
      res.push_back( l );
  return res;
}

std::vector<Link const*> in_links( Network const& net, std::string const& comp )
{
  std::vector<Link const*> res;
  auto const* c = net.component( comp );
  if ( !c )
    return res;
  for ( std::size_t i = 0; i < c->in_widths.size(); ++i )
    if ( auto const* l = net.input_link( comp, static_cast<int>( i ) ) )
      res.push_back( l );
  return res;
}

std::set<std::string> find_back_edges( Network const& net )
{
  enum class Color
  {
    White,
    Gray,
    Black
  };
  std::map<std::string, Color> color;
  for ( auto const& [id, c] : net.components() )
    color[id] = Color::White;

  std::set<std::string> back;

  auto dfs = [&]( std::string const& root ) {
    if ( color[root] != Color::White )
      return;
    struct Frame
    {
      std::string comp;
      std::vector<Link const*> succ;
      std::size_t next{ 0 };
    };
    std::vector<Frame> stack;
    color[root] = Color::Gray;
    stack.push_back( { root, out_links( net, root ), 0 } );
    while ( !stack.empty() )
    {
      auto& top = stack.back();
      if ( top.next == top.succ.size() )
      {
        color[top.comp] = Color::Black;
        stack.pop_back();
        continue;
      }
      auto const* l = top.succ[top.next++];
      if ( l->to.external() )
        continue;
      auto& col = color[l->to.comp];
      if ( col == Color::Gray )
        back.insert( l->id );
      else if ( col == Color::White )
      {
        col = Color::Gray;
        auto succ = out_links( net, l->to.comp );
        stack.push_back( { l->to.comp, std::move( succ ), 0 } );
      }
    }
  };

  for ( auto const& p : net.ports() )
  {
    if ( p.dir != Dir::In )
      continue;
    if ( auto const* l = net.link( p.link ); l && !l->to.external() )
      dfs( l->to.comp );
  }
  for ( auto const& [id, c] : net.components() )
    if ( c.kind == Kind::Initial )
      dfs( id );
  for ( auto const& [id, c] : net.components() )
    dfs( id );
  return back;
}

std::vector<std::string> next_links( Network const& net, Link const& l, bool cut_buffers )
{
  std::vector<std::string> res;
  if ( l.to.external() )
    return res;
  auto const* c = net.component( l.to.comp );
  if ( !c )
    return res;
  if ( c->kind == Kind::Buffer && !cut_buffers )
  {
    if ( auto const* o = net.output_link( c->id, 0 ) )
      res.push_back( o->id );
    return res;
  }
  for ( int p : dependent_outputs( *c, l.to.port ) )
    if ( auto const* o = net.output_link( c->id, p ) )
      res.push_back( o->id );
  return res;
}

namespace
{

struct LinkGraph
{
  std::vector<std::string> ids;
  std::vector<std::vector<int>> succ;
};

LinkGraph link_graph( Network const& net, bool cut_buffers )
{
  LinkGraph g;
  std::unordered_map<std::string, int> index;
  for ( auto const& [id, l] : net.links() )
  {
    index[id] = static_cast<int>( g.ids.size() );
    g.ids.push_back( id );
  }
  g.succ.resize( g.ids.size() );
  for ( auto const& [id, l] : net.links() )
    for ( auto const& n : next_links( net, l, cut_buffers ) )
      g.succ[index[id]].push_back( index[n] );
  return g;
}

} // namespace

std::vector<std::vector<std::string>> enumerate_cycles( Network const& net, std::size_t limit )
{
  auto const g = link_graph( net, false );
  int const n = static_cast<int>( g.ids.size() );
  std::vector<std::vector<std::string>> cycles;

  /* Johnson's algorithm restricted to vertices >= start */
  std::vector<char> blocked( n );
  std::vector<std::vector<int>> bmap( n );
  std::vector<int> path;

  std::function<void( int )> unblock = [&]( int u ) {
    blocked[u] = 0;
    auto waiting = std::move( bmap[u] );
    bmap[u].clear();
    for ( int w : waiting )
      if ( blocked[w] )
        unblock( w );
  };

  for ( int s = 0; s < n; ++s )
  {
    std::fill( blocked.begin(), blocked.end(), 0 );
    for ( auto& b : bmap )
      b.clear();

    std::function<bool( int )> circuit = [&]( int v ) -> bool {
      bool found = false;
      path.push_back( v );
      blocked[v] = 1;
      for ( int w : g.succ[v] )
      {
        if ( w < s )
          continue;
        if ( w == s )
        {
          std::vector<std::string> cyc;
          for ( int x : path )
            cyc.push_back( g.ids[x] );
          cycles.push_back( std::move( cyc ) );
          if ( cycles.size() > limit )
            throw TooManyCycles( "more than " + std::to_string( limit ) + " cycles" );
          found = true;
        }
        else if ( !blocked[w] && circuit( w ) )
          found = true;
      }
      if ( found )
        unblock( v );
      else
        for ( int w : g.succ[v] )
          if ( w >= s && std::find( bmap[w].begin(), bmap[w].end(), v ) == bmap[w].end() )
            bmap[w].push_back( v );
      path.pop_back();
      return found;
    };
    circuit( s );
  }
  return cycles;
}

std::vector<std::string> combinational_cycle( Network const& net )
{
  auto const g = link_graph( net, true );
  int const n = static_cast<int>( g.ids.size() );
  std::vector<int> color( n, 0 ), parent( n, -1 );
  for ( int root = 0; root < n; ++root )
  {
    if ( color[root] )
      continue;
    std::vector<std::pair<int, std::size_t>> stack{ { root, 0 } };
    color[root] = 1;
    while ( !stack.empty() )
    {
      auto& [v, i] = stack.back();
      if ( i == g.succ[v].size() )
      {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      int w = g.succ[v][i++];
      if ( color[w] == 1 )
      {
        std::vector<std::string> cyc;
        for ( int x = v; x != w; x = parent[x] )
          cyc.push_back( g.ids[x] );
        cyc.push_back( g.ids[w] );
        std::reverse( cyc.begin(), cyc.end() );
        return cyc;
      }
      if ( color[w] == 0 )
      {
        color[w] = 1;
        parent[w] = v;
        stack.push_back( { w, 0 } );
      }
    }
  }
  return {};
}

std::string producer_through_buffers( Network const& net, Link const& l )
{
  Link const* cur = &l;
  while ( !cur->from.external() )
  {
    auto const* c = net.component( cur->from.comp );
    if ( !c || c->kind != Kind::Buffer )
      return cur->from.comp;
    cur = net.input_link( c->id, 0 );
    if ( !cur )
      return {};
  }
  return {};
}

Endpoint consumer_through_buffers( Network const& net, Link const& l )
{
  Link const* cur = &l;
  while ( !cur->to.external() )
  {
    auto const* c = net.component( cur->to.comp );
    if ( !c || c->kind != Kind::Buffer )
      return cur->to;
    cur = net.output_link( c->id, 0 );
    if ( !cur )
      return {};
  }
  return {};
}

} // namespace elastika
