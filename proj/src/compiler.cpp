#include "elastika/frontend.hpp"

#include <cstdio>
#include <map>
#include <set>

namespace elastika
{

namespace
{

using namespace ast;

/// A component output not yet connected to anything.
struct Out
{
  std::string comp;
  int port{ 0 };
  int width{ 0 };
};

int bits_for( std::size_t n )
{
  int b = 1;
  while ( ( std::size_t{ 1 } << b ) < n )
    ++b;
  return b;
}

uint64_t mask( int w )
{
  return w >= 64 ? ~uint64_t{ 0 } : ( ( uint64_t{ 1 } << w ) - 1 );
}

struct SiteCounts
{
  std::map<std::string, int> var_reads, var_writes, chan_reads, chan_sends;
};

void count_expr( Expr const& e, SiteCounts& c )
{
  if ( e.type == Expr::Type::Var )
    c.var_reads[e.name]++;
  if ( e.type == Expr::Type::Chan )
    c.chan_reads[e.name]++;
  if ( e.lhs )
    count_expr( *e.lhs, c );
  if ( e.rhs )
    count_expr( *e.rhs, c );
}

void count_stmt( Stmt const& s, SiteCounts& c )
{
  if ( s.expr )
    count_expr( *s.expr, c );
  switch ( s.type )
  {
  case Stmt::Type::Assign:
    c.var_writes[s.target]++;
    break;
  case Stmt::Type::Receive:
    c.var_writes[s.target]++;
    c.chan_reads[s.source]++;
    break;
  case Stmt::Type::Send:
    c.chan_sends[s.target]++;
    break;
  default:
    break;
  }
  for ( auto const& ch : s.children )
    count_stmt( *ch, c );
  for ( auto const& a : s.arms )
    count_stmt( *a.body, c );
}

int natural_width( Expr const& e, SourceModule const& m )
{
  switch ( e.type )
  {
  case Expr::Type::Const:
    return 0;
  case Expr::Type::Var:
    return m.find_var( e.name )->width;
  case Expr::Type::Chan:
    return m.find_port( e.name )->width;
  case Expr::Type::Bit:
    return 1;
  case Expr::Type::Unary:
    return natural_width( *e.lhs, m );
  case Expr::Type::Binary:
  {
    static const std::set<std::string> compare{ "eq", "ne", "lt", "le", "gt", "ge" };
    if ( compare.count( e.op ) )
      return 1;
    return std::max( natural_width( *e.lhs, m ), natural_width( *e.rhs, m ) );
  }
  }
  return 0;
}

int leaf_count( Expr const& e )
{
  switch ( e.type )
  {
  case Expr::Type::Const:
  case Expr::Type::Var:
  case Expr::Type::Chan:
    return 1;
  default:
    return ( e.lhs ? leaf_count( *e.lhs ) : 0 ) + ( e.rhs ? leaf_count( *e.rhs ) : 0 );
  }
}

class Compiler
{
public:
  explicit Compiler( SourceModule const& m ) : _m( m ) {}

  Network run()
  {
    count_stmt( *_m.body, _counts );
    build_resources();

    auto const& loop = *_m.body;
    auto init = add( "loop", Kind::Initial, {}, { 0 }, { 0 } );
    auto done = stmt( *loop.children.front(), Out{ init, 0, 0 }, "loop" );
    connect( done, init, 0 );

    for ( auto const& [name, n] : _counts.var_reads )
      if ( _read_next[name] != n )
        throw CompileError( "read sites of '" + name + "' out of step" );

    std::vector<ExternalPort> ports;
    for ( auto const& p : _m.ports )
      ports.push_back( ExternalPort{ p.name, p.dir, p.width, _port_links.at( p.name ) } );
    return Network( _m.name, std::move( _comps ), std::move( _links ), std::move( ports ) );
  }

private:
  SourceModule const& _m;
  SiteCounts _counts;
  std::vector<Component> _comps;
  std::vector<Link> _links;
  std::map<std::string, int> _path_counter;
  std::map<std::string, std::string> _port_links;

  /* per-resource site cursors and endpoints */
  std::map<std::string, int> _read_next, _write_next, _chan_read_next, _send_next;
  std::map<std::string, std::vector<Endpoint>> _write_sink; /* var -> per-site data input */
  std::map<std::string, std::vector<Out>> _write_done;      /* var -> per-site done output */
  std::map<std::string, std::vector<Endpoint>> _chan_go;    /* multi-site input chan -> per-site go input */
  std::map<std::string, std::vector<Out>> _chan_data;       /* multi-site input chan -> per-site data output */
  std::map<std::string, std::vector<Endpoint>> _send_sink;  /* multi-site output chan -> per-site merge input */

  static Params op_params( std::string op, std::string cls, int64_t imm = 0, std::vector<int> fields = {} )
  {
    Params p;
    p.op = std::move( op );
    p.delay_class = std::move( cls );
    p.imm = imm;
    p.fields = std::move( fields );
    return p;
  }

  std::string add( std::string const& path, Kind kind, Params params, std::vector<int> in, std::vector<int> out )
  {
    auto n = _path_counter[path]++;
    Component c;
    c.id = path + "." + std::to_string( n );
    c.kind = kind;
    c.params = std::move( params );
    c.in_widths = std::move( in );
    c.out_widths = std::move( out );
    _comps.push_back( c );
    return c.id;
  }

  std::string next_link_id()
  {
    char buf[16];
    std::snprintf( buf, sizeof( buf ), "L%04zu", _links.size() );
    return buf;
  }

  void connect( Out const& from, std::string const& comp, int port )
  {
    _links.push_back( Link{ next_link_id(), from.width, Endpoint{ from.comp, from.port }, Endpoint{ comp, port } } );
  }

  void connect( Out const& from, Endpoint const& to ) { connect( from, to.comp, to.port ); }

  void port_in( std::string const& name, Endpoint const& to )
  {
    auto const* p = _m.find_port( name );
    auto id = next_link_id();
    _links.push_back( Link{ id, p->width, Endpoint{}, to } );
    _port_links[name] = id;
  }

  void port_out( std::string const& name, Out const& from )
  {
    auto id = next_link_id();
    _links.push_back( Link{ id, from.width, Endpoint{ from.comp, from.port }, Endpoint{} } );
    _port_links[name] = id;
  }

  /* variables, write multiplexers, and shared channel multiplexers */
  void build_resources()
  {
    for ( auto const& v : _m.vars )
    {
      int reads = _counts.var_reads.count( v.name ) ? _counts.var_reads.at( v.name ) : 0;
      int writes = _counts.var_writes.count( v.name ) ? _counts.var_writes.at( v.name ) : 0;
      if ( reads == 0 || writes == 0 )
        throw CompileError( "variable '" + v.name + "' escaped the usage check" );

      Params vp;
      vp.width = v.width;
      std::vector<int> in{ v.width }, out{ 0 };
      for ( int i = 0; i < reads; ++i )
      {
        in.push_back( 0 );
        out.push_back( v.width );
      }
      Component c;
      c.id = "var." + v.name;
      c.kind = Kind::Variable;
      c.params = vp;
      c.in_widths = in;
      c.out_widths = out;
      _comps.push_back( c );

      if ( writes == 1 )
      {
        _write_sink[v.name] = { Endpoint{ c.id, 0 } };
        _write_done[v.name] = { Out{ c.id, 0, 0 } };
        continue;
      }
      /* tag each write site, merge, write the value, route done back by tag */
      int const b = bits_for( writes );
      int const w = v.width;
      auto path = "wmux." + v.name;
      auto merge = add( path, Kind::Merge, {}, std::vector<int>( writes, w + b ), { w + b } );
      auto fork = add( path, Kind::Fork, {}, { w + b }, { w + b, b } );
      auto value = add( path, Kind::Operator, op_params( "high", "wire", b, { w + b } ), { w + b }, { w } );
      auto join = add( path, Kind::Join, {}, { b, 0 }, { b } );
      Params sp;
      sp.ctrl_width = b;
      for ( int i = 0; i < writes; ++i )
        sp.cases.push_back( { static_cast<uint64_t>( i ) } );
      auto steer = add( path, Kind::Steer, sp, { b }, std::vector<int>( writes, 0 ) );
      connect( Out{ merge, 0, w + b }, fork, 0 );
      connect( Out{ fork, 0, w + b }, value, 0 );
      connect( Out{ value, 0, w }, c.id, 0 );
      connect( Out{ fork, 1, b }, join, 0 );
      connect( Out{ c.id, 0, 0 }, join, 1 );
      connect( Out{ join, 0, b }, steer, 0 );
      for ( int i = 0; i < writes; ++i )
      {
        auto tag = add( path, Kind::Operator, op_params( "tag", "wire", i, { w } ), { w }, { w + b } );
        connect( Out{ tag, 0, w + b }, merge, i );
        _write_sink[v.name].push_back( Endpoint{ tag, 0 } );
        _write_done[v.name].push_back( Out{ steer, i, 0 } );
      }
    }

    for ( auto const& [name, n] : _counts.chan_reads )
    {
      if ( n < 2 )
        continue;
      int const w = _m.find_port( name )->width;
      int const b = bits_for( n );
      auto path = "cmux." + name;
      auto merge = add( path, Kind::Merge, {}, std::vector<int>( n, b ), { b } );
      auto join = add( path, Kind::Join, {}, { b, w }, { b + w } );
      Params sp;
      sp.ctrl_width = b;
      for ( int i = 0; i < n; ++i )
        sp.cases.push_back( { static_cast<uint64_t>( i ) } );
      auto steer = add( path, Kind::Steer, sp, { b + w }, std::vector<int>( n, w ) );
      connect( Out{ merge, 0, b }, join, 0 );
      port_in( name, Endpoint{ join, 1 } );
      connect( Out{ join, 0, b + w }, steer, 0 );
      for ( int i = 0; i < n; ++i )
      {
        auto sel = add( path, Kind::Operator, op_params( "const", "const", i ), { 0 }, { b } );
        connect( Out{ sel, 0, b }, merge, i );
        _chan_go[name].push_back( Endpoint{ sel, 0 } );
        _chan_data[name].push_back( Out{ steer, i, w } );
      }
    }

    for ( auto const& [name, n] : _counts.chan_sends )
    {
      if ( n < 2 )
        continue;
      int const w = _m.find_port( name )->width;
      auto merge = add( "smux." + name, Kind::Merge, {}, std::vector<int>( n, w ), { w } );
      port_out( name, Out{ merge, 0, w } );
      for ( int i = 0; i < n; ++i )
        _send_sink[name].push_back( Endpoint{ merge, i } );
    }
  }

  /* resources used at a site */
  Out var_read( std::string const& name, Out const& go )
  {
    int r = _read_next[name]++;
    auto id = "var." + name;
    connect( go, id, 1 + r );
    return Out{ id, 1 + r, _m.find_var( name )->width };
  }

  Out var_write( std::string const& name, Out const& value )
  {
    int i = _write_next[name]++;
    connect( value, _write_sink.at( name ).at( i ) );
    return _write_done.at( name ).at( i );
  }

  Out chan_read( std::string const& name, Out const& go, std::string const& path )
  {
    int const w = _m.find_port( name )->width;
    int i = _chan_read_next[name]++;
    if ( _counts.chan_reads.at( name ) == 1 )
    {
      auto join = add( path, Kind::Join, {}, { 0, w }, { w } );
      connect( go, join, 0 );
      port_in( name, Endpoint{ join, 1 } );
      return Out{ join, 0, w };
    }
    connect( go, _chan_go.at( name ).at( i ) );
    return _chan_data.at( name ).at( i );
  }

  Out chan_send( std::string const& name, Out const& value, std::string const& path )
  {
    int const w = _m.find_port( name )->width;
    int i = _send_next[name]++;
    auto fork = add( path, Kind::Fork, {}, { w }, { w, 0 } );
    connect( value, fork, 0 );
    if ( _counts.chan_sends.at( name ) == 1 )
      port_out( name, Out{ fork, 0, w } );
    else
      connect( Out{ fork, 0, w }, _send_sink.at( name ).at( i ) );
    return Out{ fork, 1, 0 };
  }

  Out resize( Out const& v, int width, std::string const& path )
  {
    if ( v.width == width )
      return v;
    auto op = add( path, Kind::Operator, op_params( "resize", "wire", 0, { v.width } ), { v.width }, { width } );
    connect( v, op, 0 );
    return Out{ op, 0, width };
  }

  /* expressions: one activation per leaf, forked from `go` when needed */
  Out expr( Expr const& e, Out const& go, int hint, std::string const& path )
  {
    int const leaves = leaf_count( e );
    std::vector<Out> gos;
    if ( leaves == 1 )
      gos.push_back( go );
    else
    {
      auto fork = add( path, Kind::Fork, {}, { 0 }, std::vector<int>( leaves, 0 ) );
      connect( go, fork, 0 );
      for ( int i = 0; i < leaves; ++i )
        gos.push_back( Out{ fork, i, 0 } );
    }
    std::size_t next = 0;
    return expr_rec( e, gos, next, hint, path );
  }

  Out expr_rec( Expr const& e, std::vector<Out> const& gos, std::size_t& next, int hint, std::string const& path )
  {
    switch ( e.type )
    {
    case Expr::Type::Const:
    {
      int w = hint > 0 ? hint : 32;
      auto op = add( path, Kind::Operator, op_params( "const", "const", static_cast<int64_t>( e.value & mask( w ) ) ), { 0 },
                     { w } );
      connect( gos[next++], op, 0 );
      return Out{ op, 0, w };
    }
    case Expr::Type::Var:
      return var_read( e.name, gos[next++] );
    case Expr::Type::Chan:
      return chan_read( e.name, gos[next++], path );
    case Expr::Type::Bit:
    {
      auto v = expr_rec( *e.lhs, gos, next, 0, path );
      auto op = add( path, Kind::Operator, op_params( "bit", "wire", e.value, { v.width } ), { v.width }, { 1 } );
      connect( v, op, 0 );
      return Out{ op, 0, 1 };
    }
    case Expr::Type::Unary:
    {
      auto v = expr_rec( *e.lhs, gos, next, hint, path );
      bool const wiring = e.op == "shl" || e.op == "shr";
      auto op = add( path, Kind::Operator, op_params( e.op, wiring ? "wire" : "op", e.value, { v.width } ), { v.width },
                     { v.width } );
      connect( v, op, 0 );
      return Out{ op, 0, v.width };
    }
    case Expr::Type::Binary:
    {
      static const std::set<std::string> compare{ "eq", "ne", "lt", "le", "gt", "ge" };
      bool const is_cmp = compare.count( e.op ) > 0;
      int operand = std::max( natural_width( *e.lhs, _m ), natural_width( *e.rhs, _m ) );
      if ( operand == 0 )
        operand = is_cmp || hint == 0 ? 32 : hint;
      auto l = expr_rec( *e.lhs, gos, next, operand, path );
      auto r = expr_rec( *e.rhs, gos, next, operand, path );
      auto join = add( path, Kind::Join, {}, { l.width, r.width }, { l.width + r.width } );
      connect( l, join, 0 );
      connect( r, join, 1 );
      int const out_w = is_cmp ? 1 : std::max( l.width, r.width );
      std::string cls = e.op == "mul" ? "mul" : is_cmp ? "cmp" : "op";
      auto op = add( path, Kind::Operator, op_params( e.op, cls, 0, { l.width, r.width } ), { l.width + r.width }, { out_w } );
      connect( Out{ join, 0, l.width + r.width }, op, 0 );
      return Out{ op, 0, out_w };
    }
    }
    throw CompileError( "unknown expression node" );
  }

  /* 1-bit truth value of a condition */
  Out condition( Expr const& e, Out const& go, std::string const& path )
  {
    auto v = expr( e, go, 0, path );
    if ( v.width == 1 )
      return v;
    auto op = add( path, Kind::Operator, op_params( "nez", "cmp", 0, { v.width } ), { v.width }, { 1 } );
    connect( v, op, 0 );
    return Out{ op, 0, 1 };
  }

  Out stmt( Stmt const& s, Out go, std::string const& path )
  {
    switch ( s.type )
    {
    case Stmt::Type::Skip:
      return go;

    case Stmt::Type::Seq:
      for ( std::size_t i = 0; i < s.children.size(); ++i )
        go = stmt( *s.children[i], go, path + "/s" + std::to_string( i ) );
      return go;

    case Stmt::Type::Par:
    {
      auto const n = static_cast<int>( s.children.size() );
      auto fork = add( path + "/par", Kind::Fork, {}, { 0 }, std::vector<int>( n, 0 ) );
      auto join = add( path + "/par", Kind::Join, {}, std::vector<int>( n, 0 ), { 0 } );
      connect( go, fork, 0 );
      for ( int i = 0; i < n; ++i )
      {
        auto done = stmt( *s.children[i], Out{ fork, i, 0 }, path + "/p" + std::to_string( i ) );
        connect( done, join, i );
      }
      return Out{ join, 0, 0 };
    }

    case Stmt::Type::Assign:
    {
      auto p = path + "/asg";
      int const w = _m.find_var( s.target )->width;
      auto v = resize( expr( *s.expr, go, w, p ), w, p );
      return var_write( s.target, v );
    }

    case Stmt::Type::Receive:
    {
      auto p = path + "/recv";
      auto v = resize( chan_read( s.source, go, p ), _m.find_var( s.target )->width, p );
      return var_write( s.target, v );
    }

    case Stmt::Type::Send:
    {
      auto p = path + "/send";
      int const w = _m.find_port( s.target )->width;
      auto v = resize( expr( *s.expr, go, w, p ), w, p );
      return chan_send( s.target, v, p );
    }

    case Stmt::Type::While:
    {
      auto p = path + "/while";
      auto merge = add( p, Kind::Merge, {}, { 0, 0 }, { 0 } );
      connect( go, merge, 0 );
      auto c = condition( *s.expr, Out{ merge, 0, 0 }, p );
      Params sp;
      sp.ctrl_width = 1;
      sp.cases = { { 1 }, { 0 } };
      auto steer = add( p, Kind::Steer, sp, { 1 }, { 0, 0 } );
      connect( c, steer, 0 );
      auto done = stmt( *s.children.front(), Out{ steer, 0, 0 }, p + "/b" );
      connect( done, merge, 1 );
      return Out{ steer, 1, 0 };
    }

    case Stmt::Type::If:
    {
      auto p = path + "/if";
      auto c = condition( *s.expr, go, p );
      Params sp;
      sp.ctrl_width = 1;
      sp.cases = { { 1 }, { 0 } };
      auto steer = add( p, Kind::Steer, sp, { 1 }, { 0, 0 } );
      connect( c, steer, 0 );
      auto then_done = stmt( *s.children[0], Out{ steer, 0, 0 }, p + "/t" );
      Out else_done{ steer, 1, 0 };
      if ( s.children.size() > 1 )
        else_done = stmt( *s.children[1], else_done, p + "/e" );
      auto merge = add( p, Kind::Merge, {}, { 0, 0 }, { 0 } );
      connect( then_done, merge, 0 );
      connect( else_done, merge, 1 );
      return Out{ merge, 0, 0 };
    }

    case Stmt::Type::Case:
    {
      auto p = path + "/case";
      auto sel = expr( *s.expr, go, 0, p );
      std::vector<CaseArm const*> arms;
      CaseArm const* else_arm = nullptr;
      for ( auto const& a : s.arms )
      {
        if ( a.labels.empty() )
          else_arm = &a;
        else
          arms.push_back( &a );
      }
      Params sp;
      sp.ctrl_width = sel.width;
      for ( auto const* a : arms )
      {
        std::vector<uint64_t> labels;
        for ( auto l : a->labels )
          labels.push_back( static_cast<uint64_t>( l ) & mask( sel.width ) );
        sp.cases.push_back( labels );
      }
      /* unmatched selectors fall through as skip */
      sp.cases.push_back( {} );
      sp.default_case = static_cast<int>( arms.size() );
      auto const n = static_cast<int>( arms.size() ) + 1;
      auto steer = add( p, Kind::Steer, sp, { sel.width }, std::vector<int>( n, 0 ) );
      connect( sel, steer, 0 );
      auto merge = add( p, Kind::Merge, {}, std::vector<int>( n, 0 ), { 0 } );
      for ( int i = 0; i < n; ++i )
      {
        Out done{ steer, i, 0 };
        if ( i < n - 1 )
          done = stmt( *arms[i]->body, done, p + "/a" + std::to_string( i ) );
        else if ( else_arm )
          done = stmt( *else_arm->body, done, p + "/else" );
        connect( done, merge, i );
      }
      return Out{ merge, 0, 0 };
    }

    case Stmt::Type::Loop:
      throw CompileError( "nested loop reached the compiler" );
    }
    throw CompileError( "unknown statement node" );
  }
};

} // namespace

Network compile( SourceModule const& m )
{
  return Compiler( m ).run();
}

} // namespace elastika
