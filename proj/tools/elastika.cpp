// elastika: command-line front end for the compile / analyse / buffer / simulate pipeline.

#include "elastika/bench.hpp"
#include "elastika/buffering.hpp"
#include "elastika/config.hpp"
#include "elastika/depgraph.hpp"
#include "elastika/frontend.hpp"
#include "elastika/metrics.hpp"
#include "elastika/netlist_io.hpp"
#include "elastika/sim.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace elastika;

namespace
{

/* exit codes */
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

struct BadInput : Error
{
  using Error::Error;
};

/* a .csp source is compiled; anything else is read as a netlist */
Network load_any( std::string const& path )
{
  if ( std::filesystem::path( path ).extension() != ".csp" )
    return load_netlist( path );
  Network net;
  try
  {
    net = compile( parse( read_file( path ) ) );
  }
  catch ( SyntaxError const& e )
  {
    throw BadInput( path + ":" + e.what() );
  }
  catch ( CompileError const& e )
  {
    throw BadInput( path + ": " + e.what() );
  }
  auto const diags = validate( net );
  if ( !diags.empty() )
  {
    std::string msg = path + ": compiled network is invalid";
    for ( auto const& d : diags )
      msg += "\n  " + d.subject + " [" + d.rule + "] " + d.message;
    throw BadInput( msg );
  }
  return net;
}

void emit( std::string const& path, std::string const& text )
{
  if ( path.empty() || path == "-" )
    std::cout << text;
  else
    write_file( path, text );
}

Config config_from( std::string const& path ) { return path.empty() ? Config{} : load_config( path ); }

Mode parse_mode( std::string const& s )
{
  if ( auto m = mode_from_string( s ) )
    return *m;
  throw BadInput( "unknown mode '" + s + "' (async, sync)" );
}

Policy parse_policy( std::string const& s )
{
  if ( auto p = policy_from_string( s ) )
    return *p;
  throw BadInput( "unknown policy '" + s + "' (simple, loop, pac)" );
}

struct CompileOpts
{
  std::string src, out, dot;
};

int cmd_compile( CompileOpts const& o )
{
  auto const net = load_any( o.src );
  emit( o.out, write_netlist( net ) );
  if ( !o.dot.empty() )
    emit( o.dot, to_dot( net ) );
  return kOk;
}

struct DepOpts
{
  std::string in, json, dot;
};

int cmd_depgraph( DepOpts const& o )
{
  auto const g = build( load_any( o.in ) );
  emit( o.json, to_json( g ).dump( 2 ) + "\n" );
  if ( !o.dot.empty() )
    emit( o.dot, to_dot( g ) );
  return kOk;
}

struct BufferOpts
{
  std::string in, out, plan, dot;
  std::string policy{ "pac" }, mode{ "async" };
};

int cmd_buffer( BufferOpts const& o )
{
  auto const net = load_any( o.in );
  auto const plan = make_plan( net, parse_policy( o.policy ), parse_mode( o.mode ) );
  auto const buffered = apply( net, plan );
  emit( o.out, write_netlist( buffered ) );
  if ( !o.plan.empty() )
    emit( o.plan, write_plan( plan ) );
  if ( !o.dot.empty() )
    emit( o.dot, to_dot( net, plan.links() ) );
  std::cerr << to_string( plan.policy ) << ": " << plan.size() << " buffers on " << net.links().size() << " links\n";
  return kOk;
}

struct SimOpts
{
  std::string in, stimulus, config, out, trace;
  std::string mode{ "async" };
  std::optional<int64_t> clock_ps, horizon_ps;
  std::size_t max_results{ 0 };
  std::vector<std::string> probes;
};

int cmd_sim( SimOpts const& o )
{
  auto const net = load_any( o.in );
  auto const cfg = config_from( o.config );
  SimConfig sc;
  sc.mode = parse_mode( o.mode );
  sc.clock_ps = o.clock_ps.value_or( cfg.clock_ps );
  sc.delays = cfg.delays;
  if ( !o.stimulus.empty() )
    sc.stimulus = parse_stimulus( read_file( o.stimulus ) );
  if ( o.horizon_ps )
    sc.horizon_ps = *o.horizon_ps;
  sc.max_results = o.max_results;
  sc.probes = o.probes;
  sc.trace_occupancy = !o.trace.empty();
  auto const rep = simulate( net, sc );
  emit( o.out, to_json( rep ).dump( 2 ) + "\n" );
  if ( !o.trace.empty() )
    emit( o.trace, occupancy_csv( rep ) );
  if ( rep.deadlock )
    std::cerr << "deadlock: " << rep.diagnosis.text << "\n";
  return rep.deadlock ? kFailed : kOk;
}

struct ReportOpts
{
  std::string in, config, activity, out, csv;
  bool area{ false }, power{ false }, throughput{ false };
  std::string mode{ "async" };
  std::vector<double> freqs;
  std::vector<std::string> exclude;
  std::size_t cycle_limit{ 10000 };
};

int cmd_report( ReportOpts const& o )
{
  auto const net = load_any( o.in );
  auto const cfg = config_from( o.config );
  bool const all = !o.area && !o.power && !o.throughput;

  CostReport r = area( net, cfg.mem_weight );
  if ( o.power || all )
  {
    std::optional<SimReport> sim;
    if ( !o.activity.empty() )
    {
      /* only the occupancy histogram is needed from a saved report */
      auto const j = nlohmann::json::parse( read_file( o.activity ) );
      sim.emplace();
      sim->occupancy = j.at( "occupancy" ).get<std::vector<double>>();
    }
    r = power( net, cfg.power, sim ? &*sim : nullptr, cfg.mem_weight );
  }
  if ( o.throughput || all )
  {
    ThroughputOptions t;
    t.mode = parse_mode( o.mode );
    t.clock_ps = cfg.clock_ps;
    t.excluded = { o.exclude.begin(), o.exclude.end() };
    t.cycle_limit = o.cycle_limit;
    r.throughput = analytic_throughput( net, cfg.delays, t );
  }

  auto j = to_json( r );
  if ( !o.power && !all )
  {
    j.erase( "activity" );
    j.erase( "dynamic_power" );
    j.erase( "leakage_power" );
  }
  emit( o.out, j.dump( 2 ) + "\n" );
  if ( !o.csv.empty() )
  {
    auto freqs = o.freqs;
    if ( freqs.empty() )
      freqs = { 2.5e8, 5e8, 1e9, 2e9 };
    emit( o.csv, frequency_sweep_csv( net, cfg.power, freqs, cfg.mem_weight ) );
  }
  return kOk;
}

struct SweepOpts
{
  std::string bench{ "all" }, dir{ "benchmarks" }, config, csv, json;
  std::vector<int64_t> clocks;
  unsigned threads{ 0 };
};

int cmd_sweep( SweepOpts const& o )
{
  auto const cfg = config_from( o.config );
  std::vector<std::string> names = o.bench == "all" ? builtin_benchmarks() : std::vector<std::string>{ o.bench };
  SweepTable all;
  for ( auto const& n : names )
  {
    auto spec = builtin_spec( n, o.dir );
    spec.clocks_ps = o.clocks.empty() ? std::vector<int64_t>{ cfg.clock_ps } : o.clocks;
    auto t = sweep( spec, cfg, o.threads, false );
    all.rows.insert( all.rows.end(), t.rows.begin(), t.rows.end() );
  }
  std::cout << format_table( all );
  if ( !o.csv.empty() )
    emit( o.csv, to_csv( all ) );
  if ( !o.json.empty() )
    emit( o.json, to_json( all ).dump( 2 ) + "\n" );
  for ( auto const& r : all.rows )
    if ( !r.equivalent )
    {
      std::cerr << "equivalence failure: " << r.benchmark << " " << to_string( r.mode ) << " clock=" << r.clock_ps
                << " " << to_string( r.policy ) << ": " << r.mismatch << "\n";
      return kFailed;
    }
  return kOk;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Elastic dataflow synthesis: compile, analyse dependencies, place buffers, simulate, report." };
  app.require_subcommand( 1 );
  // ELASTIKA_SEED is reserved for future stochastic features and currently ignored.

  CompileOpts co;
  auto* c = app.add_subcommand( "compile", "Parse and lower a source file to a netlist" );
  c->add_option( "source", co.src, "Source file (.csp)" )->required()->check( CLI::ExistingFile );
  c->add_option( "-o,--output", co.out, "Netlist output (default: stdout)" );
  c->add_option( "--emit-dot", co.dot, "Also write a Graphviz rendering" );

  DepOpts dp;
  auto* d = app.add_subcommand( "depgraph", "Extract WAR/RAW/PAC dependency edges" );
  d->add_option( "input", dp.in, "Source (.csp) or netlist" )->required()->check( CLI::ExistingFile );
  d->add_option( "-o,--output", dp.json, "JSON output (default: stdout)" );
  d->add_option( "--dot", dp.dot, "Also write a Graphviz rendering" );

  BufferOpts bo;
  auto* b = app.add_subcommand( "buffer", "Place buffers by policy and splice them in" );
  b->add_option( "input", bo.in, "Source (.csp) or netlist" )->required()->check( CLI::ExistingFile );
  b->add_option( "-p,--policy", bo.policy, "simple, loop or pac" )->capture_default_str();
  b->add_option( "-m,--mode", bo.mode, "async or sync" )->capture_default_str();
  b->add_option( "-o,--output", bo.out, "Buffered netlist (default: stdout)" );
  b->add_option( "--plan", bo.plan, "Plan file with the provenance of each buffer" );
  b->add_option( "--dot", bo.dot, "Unbuffered net with planned links in bold" );

  SimOpts so;
  auto* s = app.add_subcommand( "sim", "Simulate a (buffered) network" );
  s->add_option( "input", so.in, "Source (.csp) or netlist" )->required()->check( CLI::ExistingFile );
  s->add_option( "-m,--mode", so.mode, "async or sync" )->capture_default_str();
  s->add_option( "-c,--clock", so.clock_ps, "Clock period in ps (sync)" );
  s->add_option( "--config,--delays", so.config, "Config file with [delays]" )->check( CLI::ExistingFile );
  s->add_option( "-s,--stimulus", so.stimulus, "Stimulus file" )->check( CLI::ExistingFile );
  s->add_option( "--horizon", so.horizon_ps, "Stop after this many ps" );
  s->add_option( "--max-results", so.max_results, "Stop after this many outputs (0: no limit)" );
  s->add_option( "--probe", so.probes, "Timestamp token arrivals on these links" );
  s->add_option( "-o,--output", so.out, "Report JSON (default: stdout)" );
  s->add_option( "--trace", so.trace, "Occupancy trace CSV" );

  ReportOpts ro;
  auto* r = app.add_subcommand( "report", "Area, power and analytic throughput of a netlist" );
  r->add_option( "input", ro.in, "Source (.csp) or netlist" )->required()->check( CLI::ExistingFile );
  r->add_flag( "--area", ro.area, "Cell area" );
  r->add_flag( "--power", ro.power, "Dynamic and leakage power" );
  r->add_flag( "--throughput", ro.throughput, "Analytic throughput bound" );
  r->add_option( "--config", ro.config, "Config file ([delays], [power], clock_ps)" )->check( CLI::ExistingFile );
  r->add_option( "--activity-from", ro.activity, "Sim report whose occupancy sets the activity factor" )
      ->check( CLI::ExistingFile );
  r->add_option( "-m,--mode", ro.mode, "Throughput model: async or sync" )->capture_default_str();
  r->add_option( "--exclude", ro.exclude, "Links left out of the cycle enumeration" );
  r->add_option( "--cycle-limit", ro.cycle_limit, "Give up past this many cycles" )->capture_default_str();
  r->add_option( "-o,--output", ro.out, "Report JSON (default: stdout)" );
  r->add_option( "--csv", ro.csv, "Power-vs-frequency CSV" );
  r->add_option( "--freq", ro.freqs, "Frequencies (Hz) for the CSV" );

  SweepOpts wo;
  auto* w = app.add_subcommand( "sweep", "Compare policies and modes on the shipped benchmarks" );
  w->add_option( "-b,--bench", wo.bench, "elgcd, poly, smul or all" )->capture_default_str();
  w->add_option( "--dir", wo.dir, "Directory with <bench>.csp and stimulus/" )->capture_default_str();
  w->add_option( "--clock", wo.clocks, "Clock periods in ps" );
  w->add_option( "--config", wo.config, "Config file" )->check( CLI::ExistingFile );
  w->add_option( "-j,--threads", wo.threads, "Worker threads (0: all cores)" );
  w->add_option( "--csv", wo.csv, "Table as CSV" );
  w->add_option( "--json", wo.json, "Table as JSON" );

  CLI11_PARSE( app, argc, argv );

  try
  {
    if ( c->parsed() )
      return cmd_compile( co );
    if ( d->parsed() )
      return cmd_depgraph( dp );
    if ( b->parsed() )
      return cmd_buffer( bo );
    if ( s->parsed() )
      return cmd_sim( so );
    if ( r->parsed() )
      return cmd_report( ro );
    if ( w->parsed() )
      return cmd_sweep( wo );
  }
  catch ( BadInput const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  catch ( NetlistError const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
