// Python bindings: networks and plans are opaque handles, everything
// structured crosses the boundary as JSON text decoded on the Python side.

#include "elastika/bench.hpp"
#include "elastika/buffering.hpp"
#include "elastika/depgraph.hpp"
#include "elastika/frontend.hpp"
#include "elastika/metrics.hpp"
#include "elastika/netlist_io.hpp"
#include "elastika/sim.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace elastika;

namespace
{

Mode mode_arg( std::string const& s )
{
  if ( auto m = mode_from_string( s ) )
    return *m;
  throw py::value_error( "mode must be 'async' or 'sync'" );
}

Policy policy_arg( std::string const& s )
{
  if ( auto p = policy_from_string( s ) )
    return *p;
  throw py::value_error( "policy must be 'simple', 'loop' or 'pac'" );
}

DelayTable delays_arg( std::map<std::string, int64_t> const& overrides )
{
  auto d = DelayTable::defaults();
  for ( auto const& [k, v] : overrides )
    d.ps[k] = v;
  return d;
}

} // namespace

PYBIND11_MODULE( _elastika, m )
{
  m.doc() = "Elastic dataflow synthesis core";

  py::register_exception<Error>( m, "ElastikaError", PyExc_RuntimeError );

  py::class_<Network>( m, "Network" )
      .def_property_readonly( "name", &Network::name )
      .def_property_readonly( "component_count", []( Network const& n ) { return n.components().size(); } )
      .def_property_readonly( "link_count", []( Network const& n ) { return n.links().size(); } )
      .def( "count", []( Network const& n, std::string const& kind ) {
        auto k = kind_from_string( kind );
        if ( !k )
          throw py::value_error( "unknown component kind '" + kind + "'" );
        return n.count( *k );
      } )
      .def( "netlist", []( Network const& n ) { return write_netlist( n ); } )
      .def( "dot", []( Network const& n ) { return to_dot( n ); } )
      .def( "__eq__", []( Network const& a, Network const& b ) { return a == b; } );

  py::class_<BufferPlan>( m, "BufferPlan" )
      .def_property_readonly( "policy", []( BufferPlan const& p ) { return to_string( p.policy ); } )
      .def_property_readonly( "mode", []( BufferPlan const& p ) { return to_string( p.mode ); } )
      .def_property_readonly( "links", []( BufferPlan const& p ) {
        std::vector<std::string> v;
        for ( auto const& e : p.entries )
          v.push_back( e.link );
        return v;
      } )
      .def_property_readonly( "provenance", []( BufferPlan const& p ) {
        std::map<std::string, std::string> v;
        for ( auto const& e : p.entries )
          v[e.link] = e.provenance;
        return v;
      } )
      .def( "__len__", &BufferPlan::size )
      .def( "text", &write_plan );

  m.def( "compile_source", []( std::string const& text ) { return compile( parse( text ) ); }, py::arg( "text" ) );
  m.def( "read_netlist", &read_netlist, py::arg( "text" ) );
  m.def( "validate", []( Network const& n ) {
    std::vector<std::map<std::string, std::string>> out;
    for ( auto const& d : validate( n ) )
      out.push_back( { { "subject", d.subject }, { "rule", d.rule }, { "message", d.message } } );
    return out;
  } );
  m.def( "depgraph_json", []( Network const& n ) { return to_json( build( n ) ).dump(); } );
  m.def(
      "make_plan",
      []( Network const& n, std::string const& policy, std::string const& mode ) {
        return make_plan( n, policy_arg( policy ), mode_arg( mode ) );
      },
      py::arg( "net" ), py::arg( "policy" ), py::arg( "mode" ) = "async" );
  m.def( "apply", &apply, py::arg( "net" ), py::arg( "plan" ) );
  m.def(
      "simulate_json",
      []( Network const& n, std::string const& mode, Stimulus const& stimulus, int64_t clock_ps,
          std::map<std::string, int64_t> const& delays, int64_t horizon_ps ) {
        SimConfig c;
        c.mode = mode_arg( mode );
        c.stimulus = stimulus;
        c.clock_ps = clock_ps;
        c.delays = delays_arg( delays );
        c.horizon_ps = horizon_ps;
        SimReport r;
        {
          py::gil_scoped_release unlocked;
          r = simulate( n, c );
        }
        return to_json( r ).dump();
      },
      py::arg( "net" ), py::arg( "mode" ) = "async", py::arg( "stimulus" ) = Stimulus{}, py::arg( "clock_ps" ) = 1000,
      py::arg( "delays" ) = std::map<std::string, int64_t>{}, py::arg( "horizon_ps" ) = 1'000'000'000 );
  m.def(
      "cost_json",
      []( Network const& n, double A, double f, double C, double Vdd, double leak, bool unit_mem ) {
        PowerParams p{ A, f, C, Vdd, leak };
        return to_json( power( n, p, nullptr, unit_mem ? MemWeight::Units : MemWeight::Bits ) ).dump();
      },
      py::arg( "net" ), py::arg( "A" ) = 0.5, py::arg( "f" ) = 1e9, py::arg( "C" ) = 1.0, py::arg( "Vdd" ) = 1.0,
      py::arg( "leak_per_area" ) = 1.0, py::arg( "unit_mem" ) = false );
  m.def(
      "throughput_json",
      []( Network const& n, std::string const& mode, int64_t clock_ps, std::map<std::string, int64_t> const& delays,
          std::vector<std::string> const& excluded ) {
        ThroughputOptions o;
        o.mode = mode_arg( mode );
        o.clock_ps = clock_ps;
        o.excluded = { excluded.begin(), excluded.end() };
        return to_json( analytic_throughput( n, delays_arg( delays ), o ) ).dump();
      },
      py::arg( "net" ), py::arg( "mode" ) = "async", py::arg( "clock_ps" ) = 1000,
      py::arg( "delays" ) = std::map<std::string, int64_t>{}, py::arg( "excluded" ) = std::vector<std::string>{} );
  m.def(
      "sweep_json",
      []( std::string const& bench, std::string const& dir, std::vector<int64_t> const& clocks, unsigned threads ) {
        auto spec = builtin_spec( bench, dir );
        spec.clocks_ps = clocks;
        py::gil_scoped_release unlocked;
        return to_json( sweep( spec, Config{}, threads, false ) ).dump();
      },
      py::arg( "bench" ), py::arg( "dir" ), py::arg( "clocks_ps" ) = std::vector<int64_t>{ 1000 },
      py::arg( "threads" ) = 0 );
}
