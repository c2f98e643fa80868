// Acceptance suite: one line per criterion with the measured values, the
// pinned tolerance and the runtime against its budget.
//
//   acceptance [--expect-fail N]...
//
// A criterion listed with --expect-fail is still run and reported; its
// failure does not fail the run, but an unexpected pass does.

#include "models.hpp"
#include "support.hpp"

#include "elastika/bench.hpp"
#include "elastika/buffering.hpp"
#include "elastika/metrics.hpp"
#include "elastika/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace elastika;
using namespace elastika::testing;

namespace
{

struct Outcome
{
  bool pass{ true };
  std::string detail;
};

struct Criterion
{
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string num( double v, int digits = 4 )
{
  char b[64];
  std::snprintf( b, sizeof b, "%.*g", digits, v );
  return b;
}

Outcome figure2_oracle()
{
  constexpr double kTol = 0.01;
  auto const f = figure2();
  SimConfig c;
  c.delays = f.delays;
  c.probes = { f.probe };
  c.horizon_ps = 100'000;
  auto const r = simulate( f.net, c );
  auto const& t = r.probe_times.at( f.probe );
  bool exact = t.size() >= 10 && !r.deadlock;
  for ( std::size_t i = 1; i < t.size(); ++i )
    exact = exact && t[i] - t[i - 1] == 4400;
  double const sim = t.size() > 1 ? ( t.size() - 1 ) * 1000.0 / static_cast<double>( t.back() - t.front() ) : 0;
  ThroughputOptions o;
  o.excluded = f.untaken;
  double const an = analytic_throughput( f.net, f.delays, o ).theta;
  double const err = std::abs( an - sim ) / sim;
  return { exact && err <= kTol && std::abs( an - 1 / 4.4 ) < 1e-12,
           "traversal " + std::string( exact ? "4400 ps on every lap" : "NOT 4400 ps" ) + ", theta " + num( an, 6 ) +
               "/ns vs sim " + num( sim, 6 ) + "/ns (err " + num( 100 * err, 3 ) + "%, tol 1%)" };
}

Outcome simple_identity()
{
  Outcome o;
  for ( auto const& b : builtin_benchmarks() )
  {
    auto const net = compile_bench( b );
    auto const n = policy_simple( net ).size();
    o.pass = o.pass && n == net.links().size();
    o.detail += b + " " + std::to_string( n ) + "/" + std::to_string( net.links().size() ) + "  ";
  }
  return o;
}

Outcome policy_ordering()
{
  constexpr double kMinReduction = 0.30;
  Outcome o;
  for ( auto const& b : builtin_benchmarks() )
    for ( auto m : { Mode::Async, Mode::SyncElastic } )
    {
      auto const net = compile_bench( b );
      auto const s = make_plan( net, Policy::Simple, m ).size();
      auto const l = make_plan( net, Policy::Loop, m ).size();
      auto const p = make_plan( net, Policy::PAC, m ).size();
      double const red = 1.0 - static_cast<double>( p ) / s;
      o.pass = o.pass && p <= l && l <= s && red >= kMinReduction;
      o.detail += b + "/" + to_string( m ) + " " + std::to_string( s ) + ">=" + std::to_string( l ) +
                  ">=" + std::to_string( p ) + " (-" + num( 100 * red, 3 ) + "%)  ";
    }
  o.detail += "min reduction 30%";
  return o;
}

Outcome equivalence()
{
  Outcome o;
  int runs = 0, good = 0, stuck = 0, rejected = 0;
  for ( auto const& b : builtin_benchmarks() )
  {
    auto const spec = builtin_spec( b, bench_dir() );
    auto const net = compile_bench( b );
    for ( auto const& d : spec.datasets )
    {
      auto const want = spec.reference( d.stimulus );
      for ( auto p : { Policy::Simple, Policy::Loop, Policy::PAC } )
        for ( auto m : { Mode::Async, Mode::SyncElastic } )
        {
          SimConfig c;
          c.mode = m;
          c.stimulus = d.stimulus;
          auto const r = simulate( apply( net, make_plan( net, p, m ) ), c );
          ++runs;
          bool ok = !r.deadlock;
          for ( auto const& [ch, v] : want )
            ok = ok && r.values( ch ) == v;
          good += ok;
          if ( !ok )
            o.detail += "MISMATCH " + b + "/" + d.label + "/" + to_string( p ) + "/" + to_string( m ) + "  ";
        }
      SimConfig c;
      c.stimulus = d.stimulus;
      stuck += simulate( net, c ).deadlock;
      c.mode = Mode::SyncElastic;
      try
      {
        simulate( net, c );
      }
      catch ( CombinationalCycle const& )
      {
        ++rejected;
      }
    }
  }
  o.pass = runs == 36 && good == runs && stuck == 6 && rejected == 6;
  o.detail += std::to_string( good ) + "/" + std::to_string( runs ) + " runs match the references; unbuffered: " +
              std::to_string( stuck ) + "/6 async deadlocks, " + std::to_string( rejected ) +
              "/6 sync CombinationalCycle";
  return o;
}

Outcome throughput_trend()
{
  Outcome o;
  std::map<std::string, double> ratio;
  bool gcd_order = true;
  for ( auto const& b : builtin_benchmarks() )
  {
    auto spec = builtin_spec( b, bench_dir() );
    spec.modes = { Mode::SyncElastic };
    spec.policies = { Policy::Loop, Policy::PAC };
    spec.clocks_ps = { 1000 };
    auto const t = sweep( spec, Config{}, 0 );
    double const loop = t.rows[0].throughput, pac = t.rows[1].throughput;
    ratio[b] = pac / loop;
    if ( b == "elgcd" )
      gcd_order = pac >= loop;
    o.detail += b + " PAC/Loop " + num( ratio[b] ) + "  ";
  }
  bool const trend = ratio["poly"] >= ratio["elgcd"] || ratio["smul"] >= ratio["elgcd"];
  o.pass = gcd_order && trend;
  o.detail += std::string( "GCD PAC>=Loop: " ) + ( gcd_order ? "yes" : "no" ) +
              "; POLY or SMUL ratio >= GCD's: " + ( trend ? "yes" : "no" ) + " (sync, 1000 ps clock)";
  return o;
}

Outcome power_properties()
{
  Outcome o;
  PowerParams p;
  p.A = 0.5;
  p.C = 1;
  p.Vdd = 1;
  p.leak_per_area = 1;
  bool leak = true, leak_bits = true, linear = true;
  for ( auto const& b : builtin_benchmarks() )
  {
    auto const net = compile_bench( b );
    std::vector<double> units, bits;
    for ( auto pol : { Policy::Simple, Policy::Loop, Policy::PAC } )
    {
      auto const buffered = apply( net, make_plan( net, pol, Mode::Async ) );
      units.push_back( power( buffered, p, nullptr, MemWeight::Units ).leakage_power );
      bits.push_back( power( buffered, p, nullptr, MemWeight::Bits ).leakage_power );
    }
    leak = leak && units[0] > units[1] && units[1] > units[2];
    leak_bits = leak_bits && bits[0] > bits[1] && bits[1] > bits[2];
    o.detail += b + " " + num( units[0] ) + ">" + num( units[1] ) + ">" + num( units[2] ) + "  ";

    auto const buffered = apply( net, policy_pac( net ) );
    double const slope = p.A * p.C * p.Vdd * p.Vdd * area( buffered ).cell_area;
    for ( double f : { 2.5e8, 5e8, 1e9 } )
    {
      auto q = p;
      q.f = f;
      linear = linear && power( buffered, q ).dynamic_power == slope * f;
    }
  }
  o.pass = leak && linear;
  o.detail += std::string( "(leakage, unit-count Mem); dynamic == A*C*V^2*area*f exactly at 3 frequencies: " ) +
              ( linear ? "yes" : "no" ) + "; with bit-weighted Mem the leakage order " +
              ( leak_bits ? "also holds" : "does not hold" );
  return o;
}

Outcome random_rings()
{
  constexpr double kTol = 0.05;
  std::mt19937 rng( 2024 );
  Outcome o;
  double worst = 0;
  for ( int i = 0; i < 10; ++i )
  {
    auto const r = random_ring( rng );
    SimConfig c;
    c.delays = r.delays;
    c.probes = { r.probe };
    c.horizon_ps = 2'000'000;
    auto const s = simulate( r.net, c );
    auto const& t = s.probe_times.at( r.probe );
    double const sim = t.size() > 1 ? ( t.size() - 1 ) * 1000.0 / static_cast<double>( t.back() - t.front() ) : 0;
    double const an = analytic_throughput( r.net, r.delays ).theta;
    double const err = std::abs( sim - an ) / an;
    worst = std::max( worst, err );
    o.pass = o.pass && err <= kTol && r.net.components().size() <= 12 && !s.deadlock;
  }
  o.detail = "10 rings (seed 2024), worst error " + num( 100 * worst, 3 ) + "% (tol 5%)";
  return o;
}

} // namespace

int main( int argc, char** argv )
{
  std::set<int> expect_fail;
  for ( int i = 1; i < argc; ++i )
  {
    if ( std::strcmp( argv[i], "--expect-fail" ) == 0 && i + 1 < argc )
      expect_fail.insert( std::atoi( argv[++i] ) );
    else
    {
      std::cerr << "usage: acceptance [--expect-fail N]...\n";
      return 2;
    }
  }

  std::vector<Criterion> const all{
      { 1, "Figure-2 oracle", 1, figure2_oracle },
      { 2, "Simple-policy identity", 1, simple_identity },
      { 3, "Policy ordering", 5, policy_ordering },
      { 4, "Deadlock freedom + functional equivalence", 30, equivalence },
      { 5, "Throughput trend", 30, throughput_trend },
      { 6, "Power model properties", 1, power_properties },
      { 7, "Eq. (4) vs simulation", 10, random_rings },
  };

  int failed = 0;
  for ( auto const& c : all )
  {
    auto const t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch ( std::exception const& e )
    {
      o = { false, std::string( "exception: " ) + e.what() };
    }
    double const secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - t0 ).count();
    bool const pass = o.pass && secs <= c.budget_s;
    bool const expected = expect_fail.count( c.id ) > 0;
    std::string verdict = pass ? ( expected ? "XPASS" : "PASS" ) : ( expected ? "FAIL (expected)" : "FAIL" );
    if ( pass == expected )
      ++failed;
    std::cout << "[" << verdict << "] " << c.id << ". " << c.name << ": " << o.detail << " [" << num( secs, 3 )
              << " s / " << c.budget_s << " s]" << std::endl;
  }
  std::cout << ( failed ? "acceptance: unexpected outcomes: " + std::to_string( failed ) : std::string( "acceptance: ok" ) )
            << std::endl;
  return failed ? 1 : 0;
}
