#include "elastika/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elastika
{

void PowerParams::validate() const
{
  if ( !( A >= 0.5 && A <= 1.0 ) )
    throw InvalidParams( "activity factor A must lie in [0.5, 1]" );
  if ( !( f > 0 ) || !( C > 0 ) || !( Vdd > 0 ) || !( leak_per_area > 0 ) )
    throw InvalidParams( "f, C, Vdd and leak_per_area must be positive" );
}

CostReport area( Network const& net, MemWeight w )
{
  CostReport r;
  for ( auto const& [id, c] : net.components() )
  {
    if ( !is_memory( c.kind ) )
    {
      ++r.comp_count;
      continue;
    }
    if ( w == MemWeight::Units )
    {
      r.mem_units += 1;
      continue;
    }
    /* pure control buffers carry no data bits but still hold a token */
    if ( c.kind == Kind::Variable )
      r.mem_units += std::max( c.params.width, 1 );
    else
      r.mem_units += std::max( c.in_widths.empty() ? 0 : c.in_widths[0], 1 ) * std::max( c.params.capacity, 1 );
  }
  r.cell_area = static_cast<double>( r.comp_count ) + r.mem_units;
  return r;
}

double occupancy_activity( SimReport const& r )
{
  double mean = 0;
  for ( std::size_t k = 0; k < r.occupancy.size(); ++k )
    mean += static_cast<double>( k ) * r.occupancy[k];
  return 0.5 + 0.5 * std::clamp( mean, 0.0, 1.0 );
}

CostReport power( Network const& net, PowerParams const& p, SimReport const* activity, MemWeight w )
{
  p.validate();
  auto r = area( net, w );
  r.activity = activity ? occupancy_activity( *activity ) : p.A;
  r.dynamic_power = r.activity * p.f * p.C * p.Vdd * p.Vdd * r.cell_area;
  r.leakage_power = p.leak_per_area * r.cell_area * p.Vdd;
  return r;
}

ThroughputReport analytic_throughput( Network const& net, DelayTable const& delays, ThroughputOptions const& opts )
{
  ThroughputReport rep;
  rep.delta_ps = opts.mode == Mode::SyncElastic ? opts.clock_ps : 0;

  auto marking = opts.marking;
  if ( marking.empty() )
    for ( auto const& [id, c] : net.components() )
      if ( c.kind == Kind::Initial )
        if ( auto const* o = net.output_link( id, 0 ) )
          marking[o->id] = 1;

  for ( auto const& cyc : enumerate_cycles( net, opts.cycle_limit ) )
  {
    if ( std::any_of( cyc.begin(), cyc.end(), [&]( auto const& l ) { return opts.excluded.count( l ) > 0; } ) )
      continue;
    ++rep.cycles;
    CycleFigures f;
    f.links = cyc;
    for ( std::size_t i = 0; i < cyc.size(); ++i )
    {
      auto const* l = net.link( cyc[i] );
      auto const* next = net.link( cyc[( i + 1 ) % cyc.size()] );
      if ( auto it = marking.find( l->id ); it != marking.end() )
        f.tokens += it->second;
      auto const* c = net.component( l->to.comp );
      if ( c->kind == Kind::Buffer )
        ++f.buffers;
      f.traversal_ps += delays.of( *c, next->from.port );
    }
    if ( opts.mode == Mode::SyncElastic )
      f.traversal_ps = static_cast<int64_t>( f.buffers ) * opts.clock_ps;
    if ( f.tokens == 0 )
    {
      ++rep.unmarked;
      continue;
    }
    f.theta = f.traversal_ps > 0 ? 1000.0 * f.tokens / static_cast<double>( f.traversal_ps ) : INFINITY;
    if ( !rep.binding || f.theta < rep.binding->theta )
      rep.binding = std::move( f );
  }
  rep.theta = rep.binding ? rep.binding->theta : 0.0;
  return rep;
}

nlohmann::ordered_json to_json( ThroughputReport const& r )
{
  nlohmann::ordered_json j;
  j["theta_per_ns"] = r.theta;
  j["cycles"] = r.cycles;
  j["unmarked_cycles"] = r.unmarked;
  j["delta_ps"] = r.delta_ps;
  if ( r.binding )
  {
    j["binding"]["links"] = r.binding->links;
    j["binding"]["tokens"] = r.binding->tokens;
    j["binding"]["gamma"] = r.binding->buffers;
    j["binding"]["traversal_ps"] = r.binding->traversal_ps;
  }
  else
    j["binding"] = nullptr;
  return j;
}

nlohmann::ordered_json to_json( CostReport const& r )
{
  nlohmann::ordered_json j;
  j["comp_count"] = r.comp_count;
  j["mem_units"] = r.mem_units;
  j["cell_area"] = r.cell_area;
  j["activity"] = r.activity;
  j["dynamic_power"] = r.dynamic_power;
  j["leakage_power"] = r.leakage_power;
  if ( r.throughput )
    j["throughput"] = to_json( *r.throughput );
  return j;
}

std::string frequency_sweep_csv( Network const& net, PowerParams p, std::vector<double> const& freqs, MemWeight w )
{
  std::ostringstream os;
  os.precision( 12 );
  os << "f_hz,dynamic,leakage,total\n";
  for ( double f : freqs )
  {
    p.f = f;
    auto r = power( net, p, nullptr, w );
    os << f << "," << r.dynamic_power << "," << r.leakage_power << "," << r.dynamic_power + r.leakage_power << "\n";
  }
  return os.str();
}

} // namespace elastika
