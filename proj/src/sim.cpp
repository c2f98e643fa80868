#include "elastika/sim.hpp"

#include "elastika/graph.hpp"
#include "elastika/ops.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace elastika
{

CombinationalCycle::CombinationalCycle( std::vector<std::string> l )
    : Error( "combinational cycle through " + ( l.empty() ? std::string( "?" ) : l.front() ) + " (" +
             std::to_string( l.size() ) + " links, no buffer)" ),
      links( std::move( l ) )
{
}

DelayTable DelayTable::defaults()
{
  DelayTable t;
  for ( auto const* k : { "steer", "fork", "merge", "join", "arbiter", "initial", "buffer", "variable.read" } )
    t.ps[k] = 100;
  t.ps["variable.write"] = 500;
  t.ps["op"] = 1000;
  t.ps["op.wire"] = 100;
  t.ps["op.const"] = 100;
  return t;
}

int64_t DelayTable::of( Component const& c, int out_port ) const
{
  auto get = [&]( std::string const& k, int64_t fallback ) {
    auto it = ps.find( k );
    return it == ps.end() ? fallback : it->second;
  };
  switch ( c.kind )
  {
  case Kind::Variable:
    return out_port == 0 ? get( "variable.write", 0 ) : get( "variable.read", 0 );
  case Kind::Operator:
    return get( "op." + c.params.delay_class, get( "op", 0 ) );
  default:
    return get( to_string( c.kind ), 0 );
  }
}

std::vector<int64_t> SimReport::values( std::string const& channel ) const
{
  std::vector<int64_t> v;
  if ( auto it = outputs.find( channel ); it != outputs.end() )
    for ( auto const& s : it->second )
      v.push_back( s.value );
  return v;
}

namespace
{

using Status = FrozenState::Status;

/*! \brief Token machine shared by both protocols.
 *
 * Only Buffers, the Initial's first token and the environment store
 * tokens. A transparent component that fires keeps its input links
 * occupied until every token it produced has been stored downstream;
 * the acknowledgement then ripples back. In clocked mode every delay is
 * zero except Buffers and input ports, which present one cycle after
 * capture; time is counted in cycles.
 */
class Engine
{
public:
  Engine( Network const& net, SimConfig const& cfg ) : _net( net ), _cfg( cfg ), _sync( cfg.mode == Mode::SyncElastic )
  {
    index();
  }

  SimReport run();

private:
  enum class Origin
  {
    None,
    Firing,
    Buffer,
    Source
  };

  struct LinkRt
  {
    std::string id;
    int width{ 0 };
    int from{ -1 }, from_port{ 0 }, to{ -1 }, to_port{ 0 };
    Status st{ Status::Empty };
    uint64_t val{ 0 };
    int64_t ready{ 0 };
    Origin origin{ Origin::None };
    int owner{ -1 }; /* firing record, buffer component, or port index */
    bool probe{ false };
  };

  struct FiringRec
  {
    std::vector<int> held;
    int outstanding{ 0 };
  };

  struct Slot
  {
    uint64_t val;
    int64_t ready;
  };

  struct CompRt
  {
    Component const* c{ nullptr };
    std::vector<int> in, out; /* link index per port, -1 if unbound */
    std::vector<int64_t> delay;
    std::deque<Slot> store;   /* Buffer contents; front is the presented token */
    bool presented{ false };
    uint64_t value{ 0 };      /* Variable */
    bool initial_done{ false };
    int rr{ -1 };             /* Arbiter round-robin pointer */
    int64_t occ_since{ 0 };
  };

  struct PortRt
  {
    std::string name;
    Dir dir;
    int width;
    int link;
    std::vector<int64_t> values;
    std::size_t next{ 0 };
    std::vector<int64_t> taken_at;
  };

  Network const& _net;
  SimConfig const& _cfg;
  bool _sync;
  std::vector<LinkRt> _links;
  std::vector<CompRt> _comps;
  std::vector<PortRt> _ports;
  std::vector<FiringRec> _firings;
  std::vector<int> _free_firings;
  std::map<std::string, int> _link_index;

  int64_t _now{ 0 };
  std::set<int> _work; /* components and ports (offset by component count) to examine */
  std::priority_queue<int64_t, std::vector<int64_t>, std::greater<>> _times;
  std::multimap<int64_t, int> _wake;
  std::vector<double> _occ_time;
  SimReport _rep;

  int port_node( std::size_t p ) const { return static_cast<int>( _comps.size() + p ); }

  void index();
  void wake( int node, int64_t at );
  void wake_consumer( LinkRt const& l );
  void put( int li, uint64_t val, int64_t ready, Origin o, int owner );
  void take( int li );
  void release( int li );
  int new_firing( std::vector<int> held, int outputs );
  bool ready( int li ) const
  {
    return li >= 0 && _links[li].st == Status::Full && _links[li].ready <= _now;
  }
  bool empty( int li ) const { return li >= 0 && _links[li].st == Status::Empty; }
  void set_occupancy( CompRt& b, int64_t before );

  bool step_component( int ci );
  bool step_port( std::size_t pi );
  bool fire_transparent( int ci, std::vector<int> const& inputs, std::vector<std::pair<int, uint64_t>> const& outs,
                         int64_t delay );

  FrozenState freeze() const;
  bool has_room( int ci ) const;
  void finish();
};

void Engine::index()
{
  for ( auto const& [id, l] : _net.links() )
  {
    _link_index[id] = static_cast<int>( _links.size() );
    LinkRt rt;
    rt.id = id;
    rt.width = l.width;
    _links.push_back( rt );
  }
  std::map<std::string, int> comp_index;
  for ( auto const& [id, c] : _net.components() )
  {
    comp_index[id] = static_cast<int>( _comps.size() );
    CompRt rt;
    rt.c = &c;
    rt.in.assign( c.in_widths.size(), -1 );
    rt.out.assign( c.out_widths.size(), -1 );
    for ( std::size_t p = 0; p < c.out_widths.size(); ++p )
      rt.delay.push_back( _sync ? 0 : _cfg.delays.of( c, static_cast<int>( p ) ) );
    if ( c.out_widths.empty() )
      rt.delay.push_back( 0 );
    _comps.push_back( std::move( rt ) );
  }
  for ( auto const& [id, l] : _net.links() )
  {
    auto& rt = _links[_link_index[id]];
    if ( !l.from.external() )
    {
      rt.from = comp_index.at( l.from.comp );
      rt.from_port = l.from.port;
      _comps[rt.from].out[l.from.port] = _link_index[id];
    }
    if ( !l.to.external() )
    {
      rt.to = comp_index.at( l.to.comp );
      rt.to_port = l.to.port;
      _comps[rt.to].in[l.to.port] = _link_index[id];
    }
  }
  for ( auto const& p : _net.ports() )
  {
    PortRt rt{ p.name, p.dir, p.width, _link_index.at( p.link ), {}, 0, {} };
    if ( p.dir == Dir::In )
    {
      if ( auto it = _cfg.stimulus.find( p.name ); it != _cfg.stimulus.end() )
        rt.values = it->second;
      for ( auto v : rt.values )
        if ( p.width < 64 && ( v >= ( int64_t{ 1 } << p.width ) || v < -( int64_t{ 1 } << ( p.width - 1 ) ) ) )
          throw SimError( "stimulus value " + std::to_string( v ) + " does not fit " + p.name + ":" +
                          std::to_string( p.width ) );
      _links[rt.link].from = -1;
    }
    _ports.push_back( std::move( rt ) );
  }
  for ( auto const& [name, vals] : _cfg.stimulus )
    if ( !_net.port( name ) || _net.port( name )->dir != Dir::In )
      throw SimError( "stimulus names '" + name + "', which is not an input channel" );
  for ( auto const& pr : _cfg.probes )
  {
    auto it = _link_index.find( pr );
    if ( it == _link_index.end() )
      throw UnknownLink( "probe link '" + pr + "' not in network" );
    _links[it->second].probe = true;
    _rep.probe_times[pr];
  }
}

void Engine::wake( int node, int64_t at )
{
  if ( at <= _now )
    _work.insert( node );
  else
  {
    _wake.emplace( at, node );
    _times.push( at );
  }
}

void Engine::wake_consumer( LinkRt const& l )
{
  if ( l.to >= 0 )
    wake( l.to, l.ready );
  else
    for ( std::size_t p = 0; p < _ports.size(); ++p )
      if ( &_links[_ports[p].link] == &l )
        wake( port_node( p ), l.ready );
}

void Engine::put( int li, uint64_t val, int64_t ready, Origin o, int owner )
{
  auto& l = _links[li];
  l.st = Status::Full;
  l.val = val & mask_bits( l.width );
  l.ready = ready;
  l.origin = o;
  l.owner = owner;
  ++_rep.link_puts[l.id];
  if ( l.probe )
    _rep.probe_times[l.id].push_back( ready );
  wake_consumer( l );
}

/* the consumer took the token; a transparent consumer holds the link until acked */
void Engine::take( int li )
{
  _links[li].st = Status::Held;
  ++_rep.link_takes[_links[li].id];
  for ( auto& p : _ports )
    if ( p.link == li && p.dir == Dir::In )
      p.taken_at.push_back( _now );
}

/* the token on `li` has been stored downstream: free the link and acknowledge upstream */
void Engine::release( int li )
{
  auto& l = _links[li];
  l.st = Status::Empty;
  auto const origin = l.origin;
  auto const owner = l.owner;
  l.origin = Origin::None;
  l.owner = -1;
  if ( l.from >= 0 )
    _work.insert( l.from );

  switch ( origin )
  {
  case Origin::Firing:
  {
    auto& f = _firings[owner];
    if ( --f.outstanding == 0 )
    {
      auto held = std::move( f.held );
      f.held.clear();
      _free_firings.push_back( owner );
      for ( int h : held )
        release( h );
    }
    break;
  }
  case Origin::Buffer:
  {
    auto& b = _comps[owner];
    auto const before = static_cast<int>( b.store.size() );
    b.store.pop_front();
    b.presented = false;
    set_occupancy( b, before );
    _work.insert( owner );
    break;
  }
  case Origin::Source:
    wake( port_node( owner ), _now + ( _sync ? 1 : 0 ) );
    break;
  case Origin::None:
    break;
  }
}

int Engine::new_firing( std::vector<int> held, int outputs )
{
  int id;
  if ( !_free_firings.empty() )
  {
    id = _free_firings.back();
    _free_firings.pop_back();
  }
  else
  {
    id = static_cast<int>( _firings.size() );
    _firings.emplace_back();
  }
  _firings[id].held = std::move( held );
  _firings[id].outstanding = outputs;
  return id;
}

void Engine::set_occupancy( CompRt& b, int64_t before )
{
  auto const span = _now - b.occ_since;
  if ( static_cast<std::size_t>( before ) >= _occ_time.size() )
    _occ_time.resize( before + 1, 0.0 );
  _occ_time[before] += static_cast<double>( span );
  b.occ_since = _now;
  if ( _cfg.trace_occupancy )
    _rep.occupancy_trace.push_back(
        { _now * ( _sync ? _cfg.clock_ps : 1 ), b.c->id, static_cast<int>( b.store.size() ) } );
}

bool Engine::fire_transparent( int ci, std::vector<int> const& inputs,
                               std::vector<std::pair<int, uint64_t>> const& outs, int64_t delay )
{
  auto f = new_firing( inputs, static_cast<int>( outs.size() ) );
  for ( int li : inputs )
    take( li );
  for ( auto const& [li, val] : outs )
    put( li, val, _now + delay, Origin::Firing, f );
  _work.insert( ci );
  return true;
}

bool Engine::step_component( int ci )
{
  auto& rt = _comps[ci];
  auto const& c = *rt.c;
  auto in_val = [&]( int p ) { return _links[rt.in[p]].val; };

  switch ( c.kind )
  {
  case Kind::Buffer:
  {
    bool progress = false;
    int const cap = std::max( 1, c.params.capacity );
    if ( ready( rt.in[0] ) && static_cast<int>( rt.store.size() ) < cap )
    {
      auto const before = static_cast<int>( rt.store.size() );
      int64_t const delay = _sync ? 1 : rt.delay[0];
      rt.store.push_back( { in_val( 0 ), _now + delay } );
      take( rt.in[0] );
      release( rt.in[0] );
      set_occupancy( rt, before );
      progress = true;
    }
    if ( !rt.presented && !rt.store.empty() && empty( rt.out[0] ) )
    {
      put( rt.out[0], rt.store.front().val, std::max( _now, rt.store.front().ready ), Origin::Buffer, ci );
      rt.presented = true;
      progress = true;
    }
    if ( progress )
      _work.insert( ci );
    return progress;
  }

  case Kind::Initial:
    if ( !rt.initial_done )
    {
      if ( !empty( rt.out[0] ) )
        return false;
      rt.initial_done = true;
      put( rt.out[0], c.params.init, _now, Origin::None, -1 );
      return true;
    }
    if ( ready( rt.in[0] ) && empty( rt.out[0] ) )
      return fire_transparent( ci, { rt.in[0] }, { { rt.out[0], in_val( 0 ) } }, rt.delay[0] );
    return false;

  case Kind::Fork:
  {
    if ( !ready( rt.in[0] ) )
      return false;
    std::vector<std::pair<int, uint64_t>> outs;
    for ( std::size_t p = 0; p < rt.out.size(); ++p )
    {
      if ( !empty( rt.out[p] ) )
        return false;
      outs.push_back( { rt.out[p], in_val( 0 ) & mask_bits( c.out_widths[p] ) } );
    }
    return fire_transparent( ci, { rt.in[0] }, outs, rt.delay[0] );
  }

  case Kind::Join:
  case Kind::Operator:
  {
    if ( !empty( rt.out[0] ) )
      return false;
    uint64_t word = 0;
    int shift = 0;
    for ( std::size_t p = 0; p < rt.in.size(); ++p )
    {
      if ( !ready( rt.in[p] ) )
        return false;
      if ( shift < 64 )
        word |= ( in_val( static_cast<int>( p ) ) & mask_bits( c.in_widths[p] ) ) << shift;
      shift += c.in_widths[p];
    }
    auto const out = c.kind == Kind::Join ? word : eval_operator( c, word );
    return fire_transparent( ci, rt.in, { { rt.out[0], out } }, rt.delay[0] );
  }

  case Kind::Merge:
  case Kind::Arbiter:
  {
    if ( !empty( rt.out[0] ) )
      return false;
    int const n = static_cast<int>( rt.in.size() );
    int pick = -1;
    if ( c.kind == Kind::Merge )
    {
      /* first come, first served; equal arrival times go to the lower port */
      for ( int p = 0; p < n; ++p )
        if ( ready( rt.in[p] ) && ( pick < 0 || _links[rt.in[p]].ready < _links[rt.in[pick]].ready ) )
          pick = p;
    }
    else
    {
      for ( int k = 1; k <= n && pick < 0; ++k )
      {
        int const p = ( rt.rr + k + n ) % n;
        if ( ready( rt.in[p] ) )
          pick = p;
      }
      if ( pick >= 0 )
        rt.rr = pick;
    }
    if ( pick < 0 )
      return false;
    return fire_transparent( ci, { rt.in[pick] }, { { rt.out[0], in_val( pick ) } }, rt.delay[0] );
  }

  case Kind::Steer:
  {
    if ( !ready( rt.in[0] ) )
      return false;
    auto const v = in_val( 0 );
    auto const ctrl = v & mask_bits( c.params.ctrl_width );
    int sel = -1;
    for ( std::size_t i = 0; i < c.params.cases.size() && sel < 0; ++i )
      for ( auto x : c.params.cases[i] )
        if ( x == ctrl )
          sel = static_cast<int>( i );
    if ( sel < 0 )
      sel = c.params.default_case;
    if ( sel < 0 || sel >= static_cast<int>( rt.out.size() ) )
      throw SimError( "steer '" + c.id + "': no output for control value " + std::to_string( ctrl ) );
    if ( !empty( rt.out[sel] ) )
      return false;
    auto const data = c.params.ctrl_width >= 64 ? 0 : v >> c.params.ctrl_width;
    return fire_transparent( ci, { rt.in[0] }, { { rt.out[sel], data } }, rt.delay[0] );
  }

  case Kind::Variable:
    for ( std::size_t p = 0; p < rt.in.size(); ++p )
    {
      if ( !ready( rt.in[p] ) || !empty( rt.out[p] ) )
        continue;
      uint64_t out = 0;
      if ( p == 0 )
        rt.value = in_val( 0 ) & mask_bits( c.params.width );
      else
        out = rt.value;
      return fire_transparent( ci, { rt.in[p] }, { { rt.out[p], out } }, rt.delay[p] );
    }
    return false;
  }
  return false;
}

bool Engine::step_port( std::size_t pi )
{
  auto& p = _ports[pi];
  if ( p.dir == Dir::In )
  {
    if ( !empty( p.link ) || p.next >= p.values.size() )
      return false;
    put( p.link, static_cast<uint64_t>( p.values[p.next++] ), _now, Origin::Source, static_cast<int>( pi ) );
    return true;
  }
  if ( !ready( p.link ) )
    return false;
  auto const v = sign_extend( _links[p.link].val, p.width );
  _rep.outputs[p.name].push_back( { v, _now } );
  ++_rep.results;
  take( p.link );
  release( p.link );
  return true;
}

bool Engine::has_room( int ci ) const
{
  auto const& rt = _comps[ci];
  auto const& c = *rt.c;
  auto any_ready = [&] { return std::any_of( rt.in.begin(), rt.in.end(), [&]( int l ) { return ready( l ); } ); };
  switch ( c.kind )
  {
  case Kind::Merge:
  case Kind::Arbiter:
  case Kind::Variable:
    return !any_ready();
  case Kind::Initial:
    return rt.initial_done && !ready( rt.in[0] );
  default:
    return !std::all_of( rt.in.begin(), rt.in.end(), [&]( int l ) { return ready( l ); } );
  }
}

FrozenState Engine::freeze() const
{
  FrozenState s;
  for ( auto const& l : _links )
    s.links[l.id] = l.st;
  for ( std::size_t i = 0; i < _comps.size(); ++i )
    if ( !has_room( static_cast<int>( i ) ) )
      s.blocked.push_back( _comps[i].c->id );
  for ( auto const& p : _ports )
  {
    if ( p.dir != Dir::In )
      continue;
    s.has_inputs = true;
    if ( p.next < p.values.size() || _links[p.link].st == Status::Full )
      s.stimulus_pending = true;
  }
  return s;
}

SimReport Engine::run()
{
  _rep.mode = _cfg.mode;
  int64_t const scale = _sync ? _cfg.clock_ps : 1;
  int64_t const horizon = _cfg.horizon_ps / scale;
  for ( std::size_t i = 0; i < _comps.size() + _ports.size(); ++i )
    _work.insert( static_cast<int>( i ) );

  bool stopped = false;
  while ( true )
  {
    while ( !_work.empty() )
    {
      int node = *_work.begin();
      _work.erase( _work.begin() );
      bool fired = node < static_cast<int>( _comps.size() ) ? step_component( node )
                                                              : step_port( static_cast<std::size_t>( node ) - _comps.size() );
      if ( fired )
        _work.insert( node );
      if ( _cfg.max_results && _rep.results >= _cfg.max_results )
      {
        stopped = true;
        break;
      }
    }
    if ( stopped )
      break;
    while ( !_times.empty() && _times.top() <= _now )
      _times.pop();
    if ( _times.empty() )
      break;
    auto const t = _times.top();
    if ( t > horizon )
    {
      _rep.horizon_reached = true;
      stopped = true;
      break;
    }
    _now = t;
    while ( !_wake.empty() && _wake.begin()->first <= _now )
    {
      _work.insert( _wake.begin()->second );
      _wake.erase( _wake.begin() );
    }
  }

  finish();
  if ( !stopped )
  {
    _rep.diagnosis = detect_deadlock( _net, freeze() );
    _rep.deadlock = _rep.diagnosis.deadlock;
    _rep.stimulus_exhausted = !_rep.deadlock;
  }

  /* report times in picoseconds */
  if ( _sync )
  {
    _rep.cycles = _now;
    for ( auto& [ch, samples] : _rep.outputs )
      for ( auto& s : samples )
        s.time_ps *= scale;
    for ( auto& [l, ts] : _rep.probe_times )
      for ( auto& t : ts )
        t *= scale;
    for ( auto& p : _ports )
      for ( auto& t : p.taken_at )
        t *= scale;
  }

  std::vector<int64_t> all;
  for ( auto const& [ch, samples] : _rep.outputs )
    for ( auto const& s : samples )
      all.push_back( s.time_ps );
  std::sort( all.begin(), all.end() );
  if ( !all.empty() )
  {
    _rep.elapsed_ps = all.back();
    if ( _rep.elapsed_ps > 0 )
      _rep.throughput = static_cast<double>( all.size() ) * 1000.0 / static_cast<double>( _rep.elapsed_ps );
    if ( all.size() > 1 )
      _rep.cycle_time_ps = static_cast<double>( all.back() - all.front() ) / static_cast<double>( all.size() - 1 );
  }

  /* k-th result against the earliest k-th input acceptance */
  if ( !_rep.outputs.empty() )
  {
    auto const& first = _rep.outputs.begin()->second;
    double sum = 0;
    std::size_t n = 0;
    for ( std::size_t k = 0; k < first.size(); ++k )
    {
      int64_t start = -1;
      for ( auto const& p : _ports )
        if ( p.dir == Dir::In && k < p.taken_at.size() && ( start < 0 || p.taken_at[k] < start ) )
          start = p.taken_at[k];
      if ( start < 0 )
        continue;
      sum += static_cast<double>( first[k].time_ps - start );
      ++n;
    }
    if ( n )
      _rep.latency_ps = sum / static_cast<double>( n );
  }
  return std::move( _rep );
}

void Engine::finish()
{
  for ( auto& b : _comps )
    if ( b.c->kind == Kind::Buffer )
      set_occupancy( b, static_cast<int>( b.store.size() ) );
  double total = 0;
  for ( double v : _occ_time )
    total += v;
  for ( double v : _occ_time )
    _rep.occupancy.push_back( total > 0 ? v / total : 0.0 );
}

} // namespace

DeadlockDiagnosis detect_deadlock( Network const& net, FrozenState const& state )
{
  DeadlockDiagnosis d;
  bool const in_flight =
      std::any_of( state.links.begin(), state.links.end(), []( auto const& kv ) { return kv.second != Status::Empty; } );
  d.blocked = state.blocked;
  d.deadlock = in_flight && ( !state.blocked.empty() || state.stimulus_pending || !state.has_inputs );
  if ( !d.deadlock )
    return d;

  /* a loop of occupied links explains the freeze */
  auto occupied = [&]( std::string const& id ) {
    auto it = state.links.find( id );
    return it != state.links.end() && it->second != Status::Empty;
  };
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::function<bool( std::string const& )> dfs = [&]( std::string const& id ) {
    color[id] = 1;
    stack.push_back( id );
    for ( auto const& n : next_links( net, *net.link( id ), false ) )
    {
      if ( !occupied( n ) )
        continue;
      if ( color[n] == 1 )
      {
        auto it = std::find( stack.begin(), stack.end(), n );
        d.cycle.assign( it, stack.end() );
        return true;
      }
      if ( color[n] == 0 && dfs( n ) )
        return true;
    }
    stack.pop_back();
    color[id] = 2;
    return false;
  };
  for ( auto const& [id, st] : state.links )
    if ( st != Status::Empty && color[id] == 0 && dfs( id ) )
      break;

  std::ostringstream os;
  os << "deadlock: " << d.blocked.size() << " blocked component(s)";
  for ( auto const& b : d.blocked )
    os << " " << b;
  if ( !d.cycle.empty() )
  {
    os << "; occupied cycle";
    for ( auto const& l : d.cycle )
      os << " " << l;
  }
  if ( state.stimulus_pending )
    os << "; stimulus not consumed";
  d.text = os.str();
  return d;
}

} // namespace elastika

namespace elastika
{

int64_t critical_path( Network const& net, DelayTable const& delays )
{
  if ( auto cyc = combinational_cycle( net ); !cyc.empty() )
    throw CombinationalCycle( cyc );
  /* arrival time at each link; a Buffer output starts a new path */
  std::map<std::string, int64_t> arrival;
  std::function<int64_t( Link const& )> at = [&]( Link const& l ) -> int64_t {
    if ( auto it = arrival.find( l.id ); it != arrival.end() )
      return it->second;
    int64_t t = 0;
    if ( !l.from.external() )
    {
      auto const& c = *net.component( l.from.comp );
      int64_t in = 0;
      if ( c.kind != Kind::Buffer )
        for ( int p : supporting_inputs( c, l.from.port ) )
          if ( auto const* i = net.input_link( c.id, p ) )
            in = std::max( in, at( *i ) );
      t = in + delays.of( c, l.from.port );
    }
    arrival[l.id] = t;
    return t;
  };
  int64_t worst = 0;
  for ( auto const& [id, l] : net.links() )
    worst = std::max( worst, at( l ) );
  return worst;
}

SimReport run_async( Network const& net, SimConfig const& cfg )
{
  if ( cfg.mode != Mode::Async )
    throw SimError( "run_async needs an async configuration" );
  for ( auto const& [k, v] : cfg.delays.ps )
    if ( v < 0 )
      throw SimError( "negative delay for '" + k + "'" );
  Engine e( net, cfg );
  return e.run();
}

SimReport run_sync( Network const& net, SimConfig const& cfg )
{
  if ( cfg.mode != Mode::SyncElastic )
    throw SimError( "run_sync needs a sync configuration" );
  if ( cfg.clock_ps <= 0 )
    throw SimError( "clock period must be positive" );
  auto const cp = critical_path( net, cfg.delays );
  Engine e( net, cfg );
  auto r = e.run();
  r.critical_path_ps = cp;
  r.overclocked = cfg.clock_ps < cp;
  r.approximate = r.overclocked;
  return r;
}

SimReport simulate( Network const& net, SimConfig const& cfg )
{
  return cfg.mode == Mode::Async ? run_async( net, cfg ) : run_sync( net, cfg );
}

Stimulus parse_stimulus( std::string const& text )
{
  Stimulus s;
  std::istringstream in( text );
  std::string line;
  int n = 0;
  while ( std::getline( in, line ) )
  {
    ++n;
    if ( auto h = line.find( '#' ); h != std::string::npos )
      line.erase( h );
    if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
      continue;
    auto colon = line.find( ':' );
    if ( colon == std::string::npos )
      throw SimError( "stimulus line " + std::to_string( n ) + ": expected 'name: values'" );
    std::istringstream name_in( line.substr( 0, colon ) );
    std::string name;
    name_in >> name;
    if ( name.empty() )
      throw SimError( "stimulus line " + std::to_string( n ) + ": missing channel name" );
    auto& vals = s[name];
    std::istringstream vin( line.substr( colon + 1 ) );
    std::string tok;
    while ( vin >> tok )
    {
      try
      {
        std::size_t used = 0;
        vals.push_back( std::stoll( tok, &used, 0 ) );
        if ( used != tok.size() )
          throw std::invalid_argument( tok );
      }
      catch ( std::logic_error const& )
      {
        throw SimError( "stimulus line " + std::to_string( n ) + ": bad value '" + tok + "'" );
      }
    }
  }
  return s;
}

std::string write_stimulus( Stimulus const& s )
{
  std::ostringstream os;
  for ( auto const& [name, vals] : s )
  {
    os << name << ":";
    for ( auto v : vals )
      os << " " << v;
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json to_json( SimReport const& r )
{
  nlohmann::ordered_json j;
  j["mode"] = to_string( r.mode );
  j["results"] = r.results;
  j["elapsed_ps"] = r.elapsed_ps;
  j["throughput_per_ns"] = r.throughput;
  j["cycle_time_ps"] = r.cycle_time_ps;
  j["latency_ps"] = r.latency_ps;
  if ( r.mode == Mode::SyncElastic )
  {
    j["cycles"] = r.cycles;
    j["critical_path_ps"] = r.critical_path_ps;
    j["overclocked"] = r.overclocked;
    j["approximate"] = r.approximate;
  }
  j["deadlock"] = r.deadlock;
  if ( r.deadlock )
  {
    j["diagnosis"] = r.diagnosis.text;
    j["blocked"] = r.diagnosis.blocked;
    j["cycle"] = r.diagnosis.cycle;
  }
  j["stimulus_exhausted"] = r.stimulus_exhausted;
  j["horizon_reached"] = r.horizon_reached;
  j["outputs"] = nlohmann::ordered_json::object();
  for ( auto const& [ch, samples] : r.outputs )
  {
    auto arr = nlohmann::ordered_json::array();
    for ( auto const& s : samples )
      arr.push_back( { { "value", s.value }, { "time_ps", s.time_ps } } );
    j["outputs"][ch] = std::move( arr );
  }
  j["occupancy"] = r.occupancy;
  if ( !r.probe_times.empty() )
    j["probes"] = r.probe_times;
  return j;
}

std::string occupancy_csv( SimReport const& r )
{
  std::ostringstream os;
  os << "time_ps,buffer,tokens\n";
  for ( auto const& p : r.occupancy_trace )
    os << p.time_ps << "," << p.buffer << "," << p.tokens << "\n";
  return os.str();
}

} // namespace elastika
