#include "elastika/bench.hpp"

#include "elastika/frontend.hpp"
#include "elastika/metrics.hpp"
#include "elastika/netlist_io.hpp"
#include "elastika/ops.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

namespace elastika
{

namespace
{

int64_t wrap32( int64_t v ) { return sign_extend( static_cast<uint64_t>( v ), 32 ); }

std::vector<int64_t> const& channel( Stimulus const& s, std::string const& name )
{
  auto it = s.find( name );
  if ( it == s.end() )
    throw Error( "stimulus lacks channel '" + name + "'" );
  return it->second;
}

std::size_t tuples( Stimulus const& s )
{
  std::size_t n = SIZE_MAX;
  for ( auto const& [k, v] : s )
    n = std::min( n, v.size() );
  return s.empty() ? 0 : n;
}

std::string fixed( double v, int digits )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.*f", digits, v );
  return buf;
}

std::string describe( std::vector<int64_t> const& v )
{
  std::string s;
  for ( auto x : v )
    s += ( s.empty() ? "" : " " ) + std::to_string( x );
  return "[" + s + "]";
}

} // namespace

std::map<std::string, std::vector<int64_t>> reference_gcd( Stimulus const& s )
{
  auto const &a = channel( s, "a" ), &b = channel( s, "b" );
  std::vector<int64_t> g;
  for ( std::size_t i = 0; i < tuples( s ); ++i )
  {
    int64_t x = a[i], y = b[i];
    if ( x <= 0 || y <= 0 )
      throw Error( "gcd reference needs positive operands" );
    while ( x != y )
      ( x > y ? x : y ) -= ( x > y ? y : x );
    g.push_back( x );
  }
  return { { "g", g } };
}

std::map<std::string, std::vector<int64_t>> reference_poly( Stimulus const& s )
{
  auto const& x = channel( s, "x" );
  std::vector<std::vector<int64_t> const*> c{ &channel( s, "coefs[0]" ), &channel( s, "coefs[1]" ),
                                              &channel( s, "coefs[2]" ) };
  std::vector<int64_t> out;
  for ( std::size_t i = 0; i < tuples( s ); ++i )
  {
    int64_t acc = ( *c[2] )[i];
    for ( int k = 1; k >= 0; --k )
      acc = wrap32( wrap32( acc * x[i] ) + ( *c[k] )[i] );
    out.push_back( acc );
  }
  return { { "a", out } };
}

std::map<std::string, std::vector<int64_t>> reference_smul( Stimulus const& s )
{
  auto const &a = channel( s, "a" ), &b = channel( s, "b" );
  std::vector<int64_t> p;
  for ( std::size_t i = 0; i < tuples( s ); ++i )
    p.push_back( wrap32( a[i] * b[i] ) );
  return { { "p", p } };
}

std::vector<std::string> builtin_benchmarks() { return { "elgcd", "poly", "smul" }; }

BenchmarkSpec builtin_spec( std::string const& name, std::string const& dir )
{
  BenchmarkSpec spec;
  spec.name = name;
  spec.source = ( std::filesystem::path( dir ) / ( name + ".csp" ) ).string();
  if ( name == "elgcd" )
    spec.reference = reference_gcd;
  else if ( name == "poly" )
    spec.reference = reference_poly;
  else if ( name == "smul" )
    spec.reference = reference_smul;
  else
    throw Error( "unknown benchmark '" + name + "'" );
  for ( int d = 1; d <= 2; ++d )
  {
    auto const path = std::filesystem::path( dir ) / "stimulus" / ( name + "_" + std::to_string( d ) + ".txt" );
    spec.datasets.push_back( { "data" + std::to_string( d ), parse_stimulus( read_file( path.string() ) ) } );
  }
  return spec;
}

bool SweepTable::all_equivalent() const
{
  return std::all_of( rows.begin(), rows.end(), []( auto const& r ) { return r.equivalent; } );
}

SweepTable sweep( BenchmarkSpec const& spec, Config const& cfg, unsigned threads, bool strict )
{
  auto const net = compile( parse( read_file( spec.source ) ) );

  struct Cell
  {
    Mode mode;
    int64_t clock;
    Policy policy;
  };
  std::vector<Cell> cells;
  for ( auto m : spec.modes )
    for ( auto clk : spec.clocks_ps )
      for ( auto p : spec.policies )
        cells.push_back( { m, clk, p } );

  std::vector<std::map<std::string, std::vector<int64_t>>> expected;
  for ( auto const& d : spec.datasets )
    expected.push_back( spec.reference( d.stimulus ) );

  std::vector<SweepRow> rows( cells.size() );
  auto run = [&]( std::size_t i ) {
    auto const& cell = cells[i];
    auto& row = rows[i];
    row.benchmark = spec.name;
    row.mode = cell.mode;
    row.clock_ps = cell.clock;
    row.policy = cell.policy;

    auto const plan = make_plan( net, cell.policy, cell.mode );
    auto const simple = net.links().size();
    row.buffers = plan.size();
    row.reduction_pct = simple ? 100.0 * ( 1.0 - static_cast<double>( plan.size() ) / simple ) : 0.0;
    auto const buffered = apply( net, plan );

    row.equivalent = true;
    double thr = 0;
    for ( std::size_t d = 0; d < spec.datasets.size(); ++d )
    {
      SimConfig sc;
      sc.mode = cell.mode;
      sc.clock_ps = cell.clock;
      sc.delays = cfg.delays;
      sc.stimulus = spec.datasets[d].stimulus;
      auto const rep = simulate( buffered, sc );
      thr += rep.throughput;
      row.latency_ps.push_back( rep.latency_ps );
      for ( auto const& [ch, want] : expected[d] )
      {
        auto const got = rep.values( ch );
        if ( rep.deadlock || got != want )
        {
          row.equivalent = false;
          if ( row.mismatch.empty() )
            row.mismatch = spec.datasets[d].label + " " + ch + ": expected " + describe( want ) + ", got " +
                           describe( got ) + ( rep.deadlock ? " (deadlock)" : "" );
        }
      }
    }
    row.throughput = spec.datasets.empty() ? 0.0 : thr / spec.datasets.size();

    auto params = cfg.power;
    params.f = 1e12 / static_cast<double>( cell.clock );
    auto const pw = power( buffered, params, nullptr, cfg.mem_weight );
    row.dynamic_power = pw.dynamic_power;
    row.leakage_power = pw.leakage_power;
  };

  unsigned const n = std::max( 1u, std::min<unsigned>( threads ? threads : std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>( cells.size() ) ) );
  std::atomic<std::size_t> next{ 0 };
  std::vector<std::exception_ptr> errors( cells.size() );
  auto worker = [&] {
    for ( std::size_t i; ( i = next.fetch_add( 1 ) ) < cells.size(); )
    {
      try
      {
        run( i );
      }
      catch ( ... )
      {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for ( unsigned t = 1; t < n; ++t )
    pool.emplace_back( worker );
  worker();
  pool.clear();

  /* report in cell order so the outcome does not depend on scheduling */
  for ( std::size_t i = 0; i < cells.size(); ++i )
  {
    if ( errors[i] )
      std::rethrow_exception( errors[i] );
    if ( strict && !rows[i].equivalent )
      throw EquivalenceFailure( spec.name + " " + to_string( rows[i].mode ) + " clock=" +
                                std::to_string( rows[i].clock_ps ) + " " + to_string( rows[i].policy ) + ": " +
                                rows[i].mismatch );
  }
  return { std::move( rows ) };
}

std::string format_table( SweepTable const& t )
{
  std::ostringstream os;
  char line[256];
  std::snprintf( line, sizeof line, "%-6s %-5s %8s %-7s %7s %10s %12s %12s %12s %14s %12s %s\n", "bench", "mode", "clock",
                 "policy", "buffers", "reduction%", "thr(1/ns)", "latency1", "latency2", "dynamic", "leakage", "ok" );
  os << line;
  for ( auto const& r : t.rows )
  {
    auto lat = [&]( std::size_t i ) { return i < r.latency_ps.size() ? fixed( r.latency_ps[i], 1 ) : "-"; };
    std::snprintf( line, sizeof line, "%-6s %-5s %8lld %-7s %7zu %10s %12s %12s %12s %14s %12s %s\n",
                   r.benchmark.c_str(), to_string( r.mode ).c_str(), static_cast<long long>( r.clock_ps ),
                   to_string( r.policy ).c_str(), r.buffers, fixed( r.reduction_pct, 2 ).c_str(),
                   fixed( r.throughput, 6 ).c_str(), lat( 0 ).c_str(), lat( 1 ).c_str(),
                   fixed( r.dynamic_power, 1 ).c_str(), fixed( r.leakage_power, 3 ).c_str(),
                   r.equivalent ? "yes" : "NO" );
    os << line;
  }
  return os.str();
}

std::string to_csv( SweepTable const& t )
{
  std::ostringstream os;
  os << "benchmark,mode,clock_ps,policy,buffers,reduction_pct,throughput_per_ns,latency1_ps,latency2_ps,dynamic,"
        "leakage,equivalent\n";
  for ( auto const& r : t.rows )
  {
    auto lat = [&]( std::size_t i ) { return i < r.latency_ps.size() ? fixed( r.latency_ps[i], 1 ) : ""; };
    os << r.benchmark << "," << to_string( r.mode ) << "," << r.clock_ps << "," << to_string( r.policy ) << ","
       << r.buffers << "," << fixed( r.reduction_pct, 2 ) << "," << fixed( r.throughput, 6 ) << "," << lat( 0 ) << ","
       << lat( 1 ) << "," << fixed( r.dynamic_power, 1 ) << "," << fixed( r.leakage_power, 3 ) << ","
       << ( r.equivalent ? "true" : "false" ) << "\n";
  }
  return os.str();
}

nlohmann::ordered_json to_json( SweepTable const& t )
{
  auto rows = nlohmann::ordered_json::array();
  for ( auto const& r : t.rows )
  {
    nlohmann::ordered_json j;
    j["benchmark"] = r.benchmark;
    j["mode"] = to_string( r.mode );
    j["clock_ps"] = r.clock_ps;
    j["policy"] = to_string( r.policy );
    j["buffers"] = r.buffers;
    j["reduction_pct"] = r.reduction_pct;
    j["throughput_per_ns"] = r.throughput;
    j["latency_ps"] = r.latency_ps;
    j["dynamic"] = r.dynamic_power;
    j["leakage"] = r.leakage_power;
    j["equivalent"] = r.equivalent;
    if ( !r.equivalent )
      j["mismatch"] = r.mismatch;
    rows.push_back( std::move( j ) );
  }
  return { { "rows", rows } };
}

} // namespace elastika
