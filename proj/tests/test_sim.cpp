#include "models.hpp"
#include "support.hpp"

#include "elastika/bench.hpp"
#include "elastika/buffering.hpp"
#include "elastika/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace elastika;
using namespace elastika::testing;

namespace
{

ExternalPort in( std::string n, int w, std::string l ) { return { std::move( n ), Dir::In, w, std::move( l ) }; }
ExternalPort out( std::string n, int w, std::string l ) { return { std::move( n ), Dir::Out, w, std::move( l ) }; }

Network pipeline( int stages )
{
  std::vector<Component> cs;
  std::vector<Link> ls{ link( "l0", 8, "", 0, "b0", 0 ) };
  for ( int i = 0; i < stages; ++i )
  {
    auto const s = std::to_string( i );
    cs.push_back( comp( "b" + s, Kind::Buffer, { 8 }, { 8 }, buffer_params() ) );
    auto const next = i + 1 < stages ? "b" + std::to_string( i + 1 ) : std::string{};
    ls.push_back( link( "l" + std::to_string( i + 1 ), 8, "b" + s, 0, next, 0 ) );
  }
  return Network( "pipe", cs, ls, { in( "a", 8, "l0" ), out( "y", 8, "l" + std::to_string( stages ) ) } );
}

/* a, b -> Join -> add -> y */
Network adder()
{
  return Network( "adder",
                  { comp( "J", Kind::Join, { 8, 8 }, { 16 } ),
                    comp( "A", Kind::Operator, { 16 }, { 8 }, op( "add", "add", 0, { 8, 8 } ) ) },
                  { link( "la", 8, "", 0, "J", 0 ), link( "lb", 8, "", 0, "J", 1 ), link( "lj", 16, "J", 0, "A", 0 ),
                    link( "ly", 8, "A", 0, "", 0 ) },
                  { in( "a", 8, "la" ), in( "b", 8, "lb" ), out( "y", 8, "ly" ) } );
}

Network chooser( Kind k )
{
  return Network( "choose", { comp( "M", k, { 8, 8 }, { 8 } ) },
                  { link( "la", 8, "", 0, "M", 0 ), link( "lb", 8, "", 0, "M", 1 ), link( "ly", 8, "M", 0, "", 0 ) },
                  { in( "a", 8, "la" ), in( "b", 8, "lb" ), out( "y", 8, "ly" ) } );
}

SimReport run( Network const& n, Stimulus s, Mode m = Mode::Async )
{
  SimConfig c;
  c.mode = m;
  c.stimulus = std::move( s );
  return simulate( n, c );
}

/* per-component conservation of the token counts in a report */
void check_conservation( Network const& net, SimReport const& r )
{
  auto puts = [&]( Link const* l ) { return l && r.link_puts.count( l->id ) ? r.link_puts.at( l->id ) : 0; };
  auto takes = [&]( Link const* l ) { return l && r.link_takes.count( l->id ) ? r.link_takes.at( l->id ) : 0; };
  for ( auto const& [id, l] : net.links() )
  {
    CHECK( puts( &l ) >= takes( &l ) );
    CHECK( puts( &l ) - takes( &l ) <= 1 );
  }
  for ( auto const& [id, c] : net.components() )
  {
    auto ni = static_cast<int>( c.in_widths.size() ), no = static_cast<int>( c.out_widths.size() );
    auto I = [&]( int p ) { return takes( net.input_link( id, p ) ); };
    auto O = [&]( int p ) { return puts( net.output_link( id, p ) ); };
    uint64_t si = 0, so = 0;
    for ( int p = 0; p < ni; ++p )
      si += I( p );
    for ( int p = 0; p < no; ++p )
      so += O( p );
    CAPTURE( id );
    switch ( c.kind )
    {
    case Kind::Operator:
    case Kind::Join:
      for ( int p = 0; p < ni; ++p )
        CHECK( I( p ) == O( 0 ) );
      break;
    case Kind::Fork:
      for ( int p = 0; p < no; ++p )
        CHECK( O( p ) == I( 0 ) );
      break;
    case Kind::Merge:
    case Kind::Arbiter:
    case Kind::Steer:
      CHECK( si == so );
      break;
    case Kind::Variable:
      for ( int p = 0; p < ni; ++p )
        CHECK( I( p ) == O( p ) );
      break;
    case Kind::Initial:
      CHECK( O( 0 ) == I( 0 ) + 1 );
      break;
    case Kind::Buffer:
      CHECK( I( 0 ) >= O( 0 ) );
      CHECK( I( 0 ) - O( 0 ) <= static_cast<uint64_t>( c.params.capacity ) );
      break;
    }
  }
}

} // namespace

TEST_CASE( "Figure 2 loop traverses in 4.4 ns" )
{
  auto const f = figure2();
  SimConfig c;
  c.delays = f.delays;
  c.probes = { f.probe };
  c.horizon_ps = 50'000;
  auto const r = simulate( f.net, c );
  CHECK( !r.deadlock );
  auto const& t = r.probe_times.at( f.probe );
  REQUIRE( t.size() >= 5 );
  for ( std::size_t i = 1; i < t.size(); ++i )
    CHECK( t[i] - t[i - 1] == 4400 );
  CHECK( r.horizon_reached );
}

TEST_CASE( "join and operator compute on concatenated fields" )
{
  auto const r = run( adder(), { { "a", { 1, 100, -3 } }, { "b", { 2, 27, 5 } } } );
  CHECK( r.values( "y" ) == std::vector<int64_t>{ 3, 127, 2 } );
  CHECK( r.stimulus_exhausted );
  CHECK( !r.deadlock );
}

TEST_CASE( "steer routes on the low control bits and forwards the rest" )
{
  Params p;
  p.ctrl_width = 1;
  p.cases = { { 0 }, { 1 } };
  Network n( "steer", { comp( "S", Kind::Steer, { 9 }, { 8, 8 }, p ) },
             { link( "la", 9, "", 0, "S", 0 ), link( "lx", 8, "S", 0, "", 0 ), link( "ly", 8, "S", 1, "", 0 ) },
             { in( "a", 9, "la" ), out( "x", 8, "lx" ), out( "y", 8, "ly" ) } );
  auto const r = run( n, { { "a", { 2 * 5 + 0, 2 * 7 + 1, 2 * 9 + 0 } } } );
  CHECK( r.values( "x" ) == std::vector<int64_t>{ 5, 9 } );
  CHECK( r.values( "y" ) == std::vector<int64_t>{ 7 } );

  p.cases = { { 0 } };
  Network partial( "steer", { comp( "S", Kind::Steer, { 9 }, { 8 }, p ) },
                   { link( "la", 9, "", 0, "S", 0 ), link( "lx", 8, "S", 0, "", 0 ) },
                   { in( "a", 9, "la" ), out( "x", 8, "lx" ) } );
  CHECK_THROWS_AS( run( partial, { { "a", { 1 } } } ), SimError );
}

TEST_CASE( "fork copies to every output" )
{
  Network n( "fork", { comp( "F", Kind::Fork, { 8 }, { 8, 8 } ) },
             { link( "la", 8, "", 0, "F", 0 ), link( "lx", 8, "F", 0, "", 0 ), link( "ly", 8, "F", 1, "", 0 ) },
             { in( "a", 8, "la" ), out( "x", 8, "lx" ), out( "y", 8, "ly" ) } );
  auto const r = run( n, { { "a", { 4, -4 } } } );
  CHECK( r.values( "x" ) == std::vector<int64_t>{ 4, -4 } );
  CHECK( r.values( "y" ) == std::vector<int64_t>{ 4, -4 } );
}

TEST_CASE( "merge serves first arrivals and breaks ties by port; arbiter alternates" )
{
  /* t=0: both offered, port a wins the tie; afterwards b's waiting token is older */
  auto const m = run( chooser( Kind::Merge ), { { "a", { 1, 2 } }, { "b", { 10, 20 } } } );
  CHECK( m.values( "y" ) == std::vector<int64_t>{ 1, 10, 2, 20 } );
  auto const a = run( chooser( Kind::Arbiter ), { { "a", { 1, 2, 3 } }, { "b", { 10, 20, 30 } } } );
  CHECK( a.values( "y" ) == std::vector<int64_t>{ 1, 10, 2, 20, 3, 30 } );
}

TEST_CASE( "stimulus checks" )
{
  CHECK_THROWS_AS( run( adder(), { { "a", { 300 } }, { "b", { 1 } } } ), SimError );
  CHECK_THROWS_AS( run( adder(), { { "y", { 1 } } } ), SimError );
  auto const s = parse_stimulus( "# c\na: 1 0x10 -2\n\ncoefs[1]: 7\n" );
  CHECK( s.at( "a" ) == std::vector<int64_t>{ 1, 16, -2 } );
  CHECK( s.at( "coefs[1]" ) == std::vector<int64_t>{ 7 } );
  CHECK( parse_stimulus( write_stimulus( s ) ) == s );
}

TEST_CASE( "synchronous pipeline reaches one result per cycle" )
{
  std::vector<int64_t> vals( 10 );
  std::iota( vals.begin(), vals.end(), 1 );
  SimConfig c;
  c.mode = Mode::SyncElastic;
  c.clock_ps = 1000;
  c.stimulus = { { "a", vals } };
  auto const r = simulate( pipeline( 3 ), c );
  CHECK( r.values( "y" ) == vals );
  auto const& y = r.outputs.at( "y" );
  for ( std::size_t i = 1; i < y.size(); ++i )
    CHECK( y[i].time_ps - y[i - 1].time_ps == 1000 );
  CHECK( r.cycle_time_ps == doctest::Approx( 1000 ) );
  CHECK( !r.overclocked );
}

TEST_CASE( "unbuffered benchmarks deadlock (async) or are rejected (sync)" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const spec = builtin_spec( b, bench_dir() );
    auto const net = compile_bench( b );
    auto const r = run( net, spec.datasets[0].stimulus );
    CAPTURE( b );
    CHECK( r.deadlock );
    CHECK( !r.diagnosis.text.empty() );
    CHECK( !r.diagnosis.cycle.empty() );
    CHECK_THROWS_AS( run( net, spec.datasets[0].stimulus, Mode::SyncElastic ), CombinationalCycle );
  }
}

TEST_CASE( "detect_deadlock on hand-made states" )
{
  CHECK( !detect_deadlock( Network{}, FrozenState{} ).deadlock );
  auto const f = figure2();
  FrozenState s;
  for ( auto const& [id, l] : f.net.links() )
    s.links[id] = FrozenState::Status::Empty;
  CHECK( !detect_deadlock( f.net, s ).deadlock );
  /* a token held on the ring with the Fork unable to fire */
  s.links["i_f"] = FrozenState::Status::Full;
  s.links["f_c2"] = FrozenState::Status::Full;
  s.blocked = { "F" };
  auto const d = detect_deadlock( f.net, s );
  CHECK( d.deadlock );
  CHECK( d.blocked == std::vector<std::string>{ "F" } );
}

TEST_CASE( "GCD of 12 and 18 is 6 under every policy and mode" )
{
  auto const net = compile_bench( "elgcd" );
  for ( auto p : { Policy::Simple, Policy::Loop, Policy::PAC } )
    for ( auto m : { Mode::Async, Mode::SyncElastic } )
    {
      auto const r = run( apply( net, make_plan( net, p, m ) ), { { "a", { 12 } }, { "b", { 18 } } }, m );
      CHECK( r.values( "g" ) == std::vector<int64_t>{ 6 } );
      CHECK( !r.deadlock );
    }
}

TEST_CASE( "clock below the critical path is flagged approximate" )
{
  auto const net = compile_bench( "elgcd" );
  auto const b = apply( net, make_plan( net, Policy::PAC, Mode::SyncElastic ) );
  auto const cp = critical_path( b, DelayTable::defaults() );
  CHECK( cp > 0 );
  SimConfig c;
  c.mode = Mode::SyncElastic;
  c.stimulus = { { "a", { 12 } }, { "b", { 18 } } };
  c.clock_ps = cp;
  auto r = simulate( b, c );
  CHECK( !r.overclocked );
  CHECK( !r.approximate );
  c.clock_ps = cp - 1;
  r = simulate( b, c );
  CHECK( r.overclocked );
  CHECK( r.approximate );
  CHECK( r.critical_path_ps == cp );
}

TEST_CASE( "property: runs are deterministic and conserve tokens" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const spec = builtin_spec( b, bench_dir() );
    auto const net = compile_bench( b );
    for ( auto p : { Policy::Simple, Policy::Loop, Policy::PAC } )
      for ( auto m : { Mode::Async, Mode::SyncElastic } )
      {
        auto const buffered = apply( net, make_plan( net, p, m ) );
        auto const r1 = run( buffered, spec.datasets[1].stimulus, m );
        auto const r2 = run( buffered, spec.datasets[1].stimulus, m );
        CAPTURE( b );
        CHECK( to_json( r1 ).dump() == to_json( r2 ).dump() );
        check_conservation( buffered, r1 );
        double const total = std::accumulate( r1.occupancy.begin(), r1.occupancy.end(), 0.0 );
        CHECK( total == doctest::Approx( 1.0 ) );
      }
  }
}

TEST_CASE( "occupancy trace and probes" )
{
  SimConfig c;
  c.stimulus = { { "a", { 1, 2, 3 } } };
  c.trace_occupancy = true;
  c.probes = { "l1" };
  auto const r = simulate( pipeline( 2 ), c );
  CHECK( !r.occupancy_trace.empty() );
  CHECK( occupancy_csv( r ).rfind( "time_ps,buffer,tokens\n", 0 ) == 0 );
  CHECK( r.probe_times.at( "l1" ).size() == 3 );
  c.probes = { "nope" };
  CHECK_THROWS_AS( simulate( pipeline( 2 ), c ), UnknownLink );
}
