#include "models.hpp"
#include "support.hpp"

#include "elastika/buffering.hpp"
#include "elastika/depgraph.hpp"

#include <doctest.h>

#include <algorithm>
#include <tuple>

using namespace elastika;
using namespace elastika::testing;

namespace
{

using Key = std::tuple<std::string, std::string, std::string, bool>;

std::multiset<Key> keys( DependencyGraph const& g )
{
  std::multiset<Key> s;
  for ( auto const& e : g.edges )
    s.insert( { to_string( e.kind ), e.from, e.to, e.backward } );
  return s;
}

} // namespace

TEST_CASE( "single variable in a loop: one WAR and one RAW" )
{
  auto const net = compile( parse( "module t(in a:8; out b:8) { var x:8; loop { a?x; b!x } }" ) );
  auto const g = build( net );
  CHECK( g.count( DepKind::WAR ) == 1 );
  CHECK( g.count( DepKind::RAW ) == 1 );
  /* straight-line receive/send: one PAC per channel, nothing backward */
  CHECK( std::none_of( g.edges.begin(), g.edges.end(), []( auto const& e ) { return e.backward; } ) );
}

TEST_CASE( "single pass: RAW without WAR" )
{
  /* a?x then b!x with no loop around it: write done triggers the read,
   * and nothing leads from the read back to the write */
  Params v;
  v.width = 8;
  Network net( "once",
               { comp( "V", Kind::Variable, { 8, 0 }, { 0, 8 }, v ),
                 comp( "N", Kind::Operator, { 8 }, { 8 }, op( "neg", "add", 0, { 8 } ) ) },
               { link( "wg", 8, "", 0, "V", 0 ), link( "wd", 0, "V", 0, "V", 1 ), link( "rd", 8, "V", 1, "N", 0 ),
                 link( "o", 8, "N", 0, "", 0 ) },
               { { "a", Dir::In, 8, "wg" }, { "b", Dir::Out, 8, "o" } } );
  REQUIRE( validate( net ).empty() );
  auto const vc = extract_variable_constraints( net );
  REQUIRE( vc.size() == 1 );
  CHECK( vc[0].kind == DepKind::RAW );
  CHECK( vc[0].site == "rd" );
  CHECK( vc[0].to == "N" );
}

TEST_CASE( "GCD edges match the hand enumeration" )
{
  /* x is read at five sites (while test, if test, both subtractions, send),
   * y at four. Every read follows a write in the round and precedes the next
   * write, giving one WAR and one RAW per site. Inside the while loop each
   * read reaches the write again without passing the Initial, so those four
   * reads per variable also carry a backward PAC. */
  auto const g = build( compile_bench( "elgcd" ) );
  std::multiset<Key> want;
  std::vector<std::string> const x_readers{ "loop/s1/while.2", "loop/s1/while/b/if.1", "loop/s1/while/b/if/t/asg.1",
                                            "loop/s1/while/b/if/e/asg.1" };
  for ( auto const& v : { std::string( "var.x" ), std::string( "var.y" ) } )
    for ( auto const& r : x_readers )
    {
      want.insert( { "WAR", v, v, false } );
      want.insert( { "RAW", v, r, false } );
      want.insert( { "PAC", v, r, false } );
      want.insert( { "PAC", v, v, true } );
    }
  want.insert( { "WAR", "var.x", "var.x", false } );
  want.insert( { "RAW", "var.x", "loop/s2/send.0", false } );
  want.insert( { "PAC", "var.x", "loop/s2/send.0", false } );
  want.insert( { "PAC", "chan:a", "loop/s0/p0/recv.0", false } );
  want.insert( { "PAC", "chan:b", "loop/s0/p1/recv.0", false } );
  want.insert( { "PAC", "loop/s2/send.0", "chan:g", false } );
  CHECK( keys( g ) == want );
}

TEST_CASE( "POLY accumulator carries forward and backward PAC edges" )
{
  auto const g = build( compile_bench( "poly" ) );
  bool fwd = false, back = false;
  for ( auto const& e : g.edges )
    if ( e.kind == DepKind::PAC && e.from == "var.addRes" )
      ( e.backward ? back : fwd ) = true;
  CHECK( fwd );
  CHECK( back );
  /* recorded counts of the current compilation */
  CHECK( g.count( DepKind::WAR ) == 9 );
  CHECK( g.count( DepKind::RAW ) == 9 );
  CHECK( g.count( DepKind::PAC ) == 21 );
}

TEST_CASE( "empty net gives an empty graph" )
{
  auto const g = build( Network{} );
  CHECK( g.edges.empty() );
  CHECK( g.nodes.empty() );
}

TEST_CASE( "edges are sorted, unique, and resolve to net elements" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const net = compile_bench( b );
    auto const g = build( net );
    CHECK( std::is_sorted( g.edges.begin(), g.edges.end() ) );
    CHECK( std::adjacent_find( g.edges.begin(), g.edges.end() ) == g.edges.end() );
    for ( auto const& e : g.edges )
    {
      CHECK( net.link( e.site ) );
      for ( auto const& n : { e.from, e.to } )
        CHECK( ( n.rfind( "chan:", 0 ) == 0 ? net.port( n.substr( 5 ) ) != nullptr : net.component( n ) != nullptr ) );
    }
    /* WAR implies RAW on the same read site */
    for ( auto const& e : g.edges )
      if ( e.kind == DepKind::WAR )
        CHECK( std::any_of( g.edges.begin(), g.edges.end(),
                            [&]( auto const& r ) { return r.kind == DepKind::RAW && r.site == e.site; } ) );
  }
}

TEST_CASE( "property: buffering does not change the edge set" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
    for ( auto p : { Policy::Simple, Policy::Loop, Policy::PAC } )
    {
      auto const net = compile_bench( b );
      auto const g0 = build( net );
      auto const g1 = build( apply( net, make_plan( net, p, Mode::Async ) ) );
      CHECK( keys( g0 ) == keys( g1 ) );
    }
}
