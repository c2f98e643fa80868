#pragma once
// Independent oracles used across the unit tests.

#include "elastika/frontend.hpp"
#include "elastika/ir.hpp"
#include "elastika/netlist_io.hpp"

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#ifndef ELASTIKA_SOURCE_DIR
#define ELASTIKA_SOURCE_DIR "."
#endif

namespace elastika::testing
{

inline std::string bench_dir() { return std::string( ELASTIKA_SOURCE_DIR ) + "/benchmarks"; }

inline Network compile_bench( std::string const& name )
{
  return compile( parse( read_file( bench_dir() + "/" + name + ".csp" ) ) );
}

/* Kahn's algorithm on the component graph with the given links removed;
 * true when every component gets scheduled, i.e. no cycle survives. */
inline bool acyclic_without( Network const& net, std::set<std::string> const& removed )
{
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> succ;
  for ( auto const& [id, c] : net.components() )
    indeg[id] = 0;
  for ( auto const& [id, l] : net.links() )
  {
    if ( removed.count( id ) || l.from.external() || l.to.external() )
      continue;
    succ[l.from.comp].push_back( l.to.comp );
    ++indeg[l.to.comp];
  }
  std::deque<std::string> ready;
  for ( auto const& [id, d] : indeg )
    if ( d == 0 )
      ready.push_back( id );
  std::size_t done = 0;
  while ( !ready.empty() )
  {
    auto n = ready.front();
    ready.pop_front();
    ++done;
    for ( auto const& s : succ[n] )
      if ( --indeg[s] == 0 )
        ready.push_back( s );
  }
  return done == net.components().size();
}

/* port-level variant: a link graph where a Buffer cuts the path; true when
 * no buffer-free cycle exists. Successor rule written out independently of
 * the library: every output of a component depends on every input, except
 * Variables, whose pair i (in i -> out i) is independent. */
inline bool buffer_free_cycle_exists( Network const& net )
{
  std::map<std::string, std::vector<std::string>> succ;
  std::map<std::string, int> indeg;
  for ( auto const& [id, l] : net.links() )
    indeg[id];
  for ( auto const& [id, l] : net.links() )
  {
    if ( l.to.external() )
      continue;
    auto const* c = net.component( l.to.comp );
    if ( c->kind == Kind::Buffer )
      continue;
    for ( int o = 0; o < static_cast<int>( c->out_widths.size() ); ++o )
    {
      if ( c->kind == Kind::Variable && o != l.to.port )
        continue;
      if ( auto const* n = net.output_link( c->id, o ) )
      {
        succ[id].push_back( n->id );
        ++indeg[n->id];
      }
    }
  }
  std::deque<std::string> ready;
  for ( auto const& [id, d] : indeg )
    if ( d == 0 )
      ready.push_back( id );
  std::size_t done = 0;
  while ( !ready.empty() )
  {
    auto n = ready.front();
    ready.pop_front();
    ++done;
    for ( auto const& s : succ[n] )
      if ( --indeg[s] == 0 )
        ready.push_back( s );
  }
  return done != net.links().size();
}

} // namespace elastika::testing
