#include "models.hpp"
#include "support.hpp"

#include "elastika/buffering.hpp"
#include "elastika/depgraph.hpp"
#include "elastika/graph.hpp"

#include <doctest.h>

using namespace elastika;
using namespace elastika::testing;

namespace
{

/* I -> A -> B -> I */
Network ring3()
{
  return Network( "ring3",
                  { comp( "I", Kind::Initial, { 8 }, { 8 } ),
                    comp( "A", Kind::Operator, { 8 }, { 8 }, op( "neg", "add", 0, { 8 } ) ),
                    comp( "B", Kind::Operator, { 8 }, { 8 }, op( "neg", "add", 0, { 8 } ) ) },
                  { link( "ia", 8, "I", 0, "A", 0 ), link( "ab", 8, "A", 0, "B", 0 ), link( "bi", 8, "B", 0, "I", 0 ) },
                  {} );
}

constexpr Policy kPolicies[] = { Policy::Simple, Policy::Loop, Policy::PAC };
constexpr Mode kModes[] = { Mode::Async, Mode::SyncElastic };

} // namespace

TEST_CASE( "simple plans every link" )
{
  CHECK( policy_simple( Network{} ).size() == 0 );
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const net = compile_bench( b );
    auto const plan = policy_simple( net );
    CHECK( plan.size() == net.links().size() );
    CHECK( apply( net, plan ).count( Kind::Buffer ) == net.links().size() );
  }
}

TEST_CASE( "loop policy on small nets" )
{
  Network const acyclic( "a", { comp( "A", Kind::Operator, { 8 }, { 8 }, op( "neg", "add", 0, { 8 } ) ) },
                         { link( "i", 8, "", 0, "A", 0 ), link( "o", 8, "A", 0, "", 0 ) },
                         { { "x", Dir::In, 8, "i" }, { "y", Dir::Out, 8, "o" } } );
  CHECK( policy_loop( acyclic ).size() == 0 );

  auto const plan = policy_loop( ring3() );
  CHECK( plan.links() == std::set<std::string>{ "bi", "ia" } );
  CHECK( plan.entries[0].link == "bi" );
  CHECK( plan.entries[0].provenance == "back-edge" );
}

TEST_CASE( "retime rules" )
{
  auto const f = figure2();
  /* two marks into one Join collapse onto its output */
  auto const joined = pac_retime( f.net, { { "c2_j", "m" }, { "c3_j", "m" } } );
  CHECK( joined.contains( "j_s" ) );
  CHECK( !joined.contains( "c2_j" ) );
  CHECK( !joined.contains( "c3_j" ) );
  /* the other two are the links around the Initial */
  CHECK( joined.links() == std::set<std::string>{ "b2_i", "i_f", "j_s" } );

  /* a mark into a Merge stays put */
  CHECK( pac_retime( f.net, { { "s_m", "m" } } ).contains( "s_m" ) );
  CHECK_THROWS_AS( pac_retime( f.net, { { "nope", "m" } } ), UnknownLink );
}

TEST_CASE( "pac marks the read side and the write-done side of a variable" )
{
  auto const net = compile( parse( "module t(in a:8; out b:8) { var x:8; loop { a?x; b!x } }" ) );
  auto const g = build( net );
  auto const marks = pac_mark( net, g );
  auto const* v = net.component( "var.x" );
  REQUIRE( v );
  CHECK( marks.count( net.output_link( "var.x", 1 )->id ) );
  CHECK( marks.count( net.output_link( "var.x", 0 )->id ) );
  /* provenance names the edge */
  CHECK( marks.at( net.output_link( "var.x", 1 )->id ).find( "var.x" ) != std::string::npos );
}

TEST_CASE( "pac_mark rejects sites missing from the net" )
{
  auto const net = compile_bench( "elgcd" );
  DependencyGraph g;
  g.edges.push_back( { DepKind::WAR, "var.x", "var.x", "L9999", false } );
  CHECK_THROWS_AS( pac_mark( net, g ), UnresolvedSite );
}

TEST_CASE( "plan ordering and reduction on the benchmarks" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
    for ( auto m : kModes )
    {
      auto const net = compile_bench( b );
      auto const s = make_plan( net, Policy::Simple, m ).size();
      auto const l = make_plan( net, Policy::Loop, m ).size();
      auto const p = make_plan( net, Policy::PAC, m ).size();
      CAPTURE( b );
      CHECK( p <= l );
      CHECK( l <= s );
      CHECK( p < s );
    }
}

TEST_CASE( "property: Loop and PAC cover every cycle (topological-sort oracle)" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
    for ( auto p : kPolicies )
      for ( auto m : kModes )
      {
        auto const net = compile_bench( b );
        auto const buffered = apply( net, make_plan( net, p, m ) );
        CAPTURE( b );
        CAPTURE( to_string( p ) );
        CHECK( validate( buffered ).empty() );
        CHECK( !buffer_free_cycle_exists( buffered ) );
        CHECK( combinational_cycle( buffered ).empty() );
      }
}

TEST_CASE( "property: plans are deterministic, sorted and duplicate-free" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
    for ( auto p : kPolicies )
      for ( auto m : kModes )
      {
        auto const net = compile_bench( b );
        auto const a = make_plan( net, p, m );
        CHECK( write_plan( a ) == write_plan( make_plan( compile_bench( b ), p, m ) ) );
        for ( std::size_t i = 1; i < a.entries.size(); ++i )
          CHECK( a.entries[i - 1].link < a.entries[i].link );
        for ( auto const& e : a.entries )
          CHECK( net.link( e.link ) );
        CHECK( apply( net, a ).count( Kind::Buffer ) == a.size() );
      }
}

TEST_CASE( "empty plan leaves the net untouched" )
{
  auto const net = compile_bench( "elgcd" );
  CHECK( apply( net, BufferPlan{} ) == net );
}

TEST_CASE( "plan file format" )
{
  auto const text = write_plan( policy_loop( ring3() ) );
  CHECK( text == "# policy=loop mode=async buffers=2\nbi back-edge\nia after head I of bi\n" );
}
