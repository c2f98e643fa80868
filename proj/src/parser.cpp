#include "elastika/frontend.hpp"

#include <cctype>
#include <map>
#include <set>

namespace elastika
{

PortDecl const* SourceModule::find_port( std::string const& n ) const
{
  for ( auto const& p : ports )
    if ( p.name == n )
      return &p;
  return nullptr;
}

VarDecl const* SourceModule::find_var( std::string const& n ) const
{
  for ( auto const& v : vars )
    if ( v.name == n )
      return &v;
  return nullptr;
}

namespace
{

using namespace ast;

struct Token
{
  enum class Type
  {
    Ident,
    Int,
    Punct,
    End
  };
  Type type{ Type::End };
  std::string text;
  int64_t value{ 0 };
  int line{ 1 };
  int col{ 1 };
};

std::vector<Token> lex( std::string const& src )
{
  static const std::vector<std::string> puncts{ "<<", ">>", "||", ":=", "..", "!=", "<=", ">=", "(", ")", "{", "}", "[", "]", ";",
                                                ",", ":", "?", "!", "|", "+", "-", "*", "=", "<", ">", "&", "^", "~" };
  std::vector<Token> toks;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&]( std::size_t n ) {
    for ( std::size_t k = 0; k < n; ++k, ++i )
    {
      if ( src[i] == '\n' )
      {
        ++line;
        col = 1;
      }
      else
        ++col;
    }
  };
  while ( i < src.size() )
  {
    char c = src[i];
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      advance( 1 );
      continue;
    }
    if ( c == '/' && i + 1 < src.size() && src[i + 1] == '/' )
    {
      while ( i < src.size() && src[i] != '\n' )
        advance( 1 );
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      std::size_t j = i;
      while ( j < src.size() && ( std::isalnum( static_cast<unsigned char>( src[j] ) ) || src[j] == '_' ) )
        ++j;
      t.type = Token::Type::Ident;
      t.text = src.substr( i, j - i );
      advance( j - i );
      toks.push_back( t );
      continue;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      std::size_t j = i;
      while ( j < src.size() && std::isdigit( static_cast<unsigned char>( src[j] ) ) )
        ++j;
      t.type = Token::Type::Int;
      t.text = src.substr( i, j - i );
      t.value = std::stoll( t.text );
      advance( j - i );
      toks.push_back( t );
      continue;
    }
    bool matched = false;
    for ( auto const& p : puncts )
    {
      if ( src.compare( i, p.size(), p ) == 0 )
      {
        t.type = Token::Type::Punct;
        t.text = p;
        advance( p.size() );
        toks.push_back( t );
        matched = true;
        break;
      }
    }
    if ( !matched )
      throw SyntaxError( line, col, std::string( "unexpected character '" ) + c + "'" );
  }
  Token end;
  end.line = line;
  end.col = col;
  toks.push_back( end );
  return toks;
}

/* resources touched by a statement, for the parallel-composition check */
struct Footprint
{
  std::set<std::string> reads, writes, sends, receives;
};

void expr_footprint( Expr const& e, Footprint& f )
{
  switch ( e.type )
  {
  case Expr::Type::Var:
    f.reads.insert( e.name );
    break;
  case Expr::Type::Chan:
    f.receives.insert( e.name );
    break;
  default:
    break;
  }
  if ( e.lhs )
    expr_footprint( *e.lhs, f );
  if ( e.rhs )
    expr_footprint( *e.rhs, f );
}

void stmt_footprint( Stmt const& s, Footprint& f )
{
  if ( s.expr )
    expr_footprint( *s.expr, f );
  switch ( s.type )
  {
  case Stmt::Type::Assign:
    f.writes.insert( s.target );
    break;
  case Stmt::Type::Receive:
    f.writes.insert( s.target );
    f.receives.insert( s.source );
    break;
  case Stmt::Type::Send:
    f.sends.insert( s.target );
    break;
  default:
    break;
  }
  for ( auto const& c : s.children )
    stmt_footprint( *c, f );
  for ( auto const& a : s.arms )
    stmt_footprint( *a.body, f );
}

class Parser
{
public:
  explicit Parser( std::vector<Token> toks ) : _toks( std::move( toks ) ) {}

  SourceModule module()
  {
    expect_kw( "module" );
    _mod.name = ident( "module name" );
    expect( "(" );
    if ( !at( ")" ) )
    {
      port_decl();
      while ( accept( ";" ) )
        port_decl();
    }
    expect( ")" );
    expect( "{" );
    decls();
    auto const& start = peek();
    auto body = stmt();
    if ( body->type != Stmt::Type::Loop )
      throw SyntaxError( start.line, start.col, "module body must be a single top-level 'loop'" );
    accept( ";" );
    expect( "}" );
    if ( peek().type != Token::Type::End )
      fail( "end of input" );
    _mod.body = body;
    check_usage( start );
    return std::move( _mod );
  }

private:
  /* every declared resource must be wired: variables read and written, channels used */
  void check_usage( Token const& where )
  {
    Footprint f;
    stmt_footprint( *_mod.body, f );
    for ( auto const& v : _mod.vars )
    {
      if ( !f.reads.count( v.name ) )
        throw SyntaxError( where.line, where.col, "variable '" + v.name + "' is never read" );
      if ( !f.writes.count( v.name ) )
        throw SyntaxError( where.line, where.col, "variable '" + v.name + "' is never written" );
    }
    for ( auto const& p : _mod.ports )
    {
      bool used = p.dir == Dir::In ? f.receives.count( p.name ) : f.sends.count( p.name );
      if ( !used )
        throw SyntaxError( where.line, where.col, "channel '" + p.name + "' is never used" );
    }
  }

  std::vector<Token> _toks;
  std::size_t _pos{ 0 };
  SourceModule _mod;
  std::map<std::string, int64_t> _consts;
  std::map<std::string, std::pair<int64_t, int64_t>> _arrays; /* base name -> index range */
  int _loop_depth{ 0 };

  Token const& peek( std::size_t k = 0 ) const { return _toks[std::min( _pos + k, _toks.size() - 1 )]; }

  bool at( std::string const& p ) const
  {
    auto const& t = peek();
    return ( t.type == Token::Type::Punct || t.type == Token::Type::Ident ) && t.text == p;
  }

  bool accept( std::string const& p )
  {
    if ( !at( p ) )
      return false;
    ++_pos;
    return true;
  }

  [[noreturn]] void fail( std::string const& expected ) const
  {
    auto const& t = peek();
    std::string got = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError( t.line, t.col, "expected " + expected + ", got " + got );
  }

  void expect( std::string const& p )
  {
    if ( !accept( p ) )
      fail( "'" + p + "'" );
  }

  void expect_kw( std::string const& k ) { expect( k ); }

  std::string ident( std::string const& what )
  {
    if ( peek().type != Token::Type::Ident )
      fail( what );
    return _toks[_pos++].text;
  }

  int64_t integer()
  {
    bool neg = accept( "-" );
    if ( peek().type == Token::Type::Ident && _consts.count( peek().text ) )
      return ( neg ? -1 : 1 ) * _consts.at( _toks[_pos++].text );
    if ( peek().type != Token::Type::Int )
      fail( "integer" );
    auto v = _toks[_pos++].value;
    return neg ? -v : v;
  }

  int width()
  {
    auto const& t = peek();
    auto w = integer();
    if ( w < 0 || w > 64 )
      throw SyntaxError( t.line, t.col, "width must be within [0, 64]" );
    return static_cast<int>( w );
  }

  void declare( Token const& at_tok, std::string const& name )
  {
    if ( _mod.find_port( name ) || _mod.find_var( name ) || _consts.count( name ) || _arrays.count( name ) )
      throw SyntaxError( at_tok.line, at_tok.col, "'" + name + "' declared twice" );
  }

  void port_decl()
  {
    Dir dir;
    if ( accept( "in" ) )
      dir = Dir::In;
    else if ( accept( "out" ) )
      dir = Dir::Out;
    else
      fail( "'in' or 'out'" );
    auto const tok = peek();
    auto name = ident( "channel name" );
    declare( tok, name );
    bool array = false;
    int64_t lo = 0, hi = 0;
    if ( accept( "[" ) )
    {
      array = true;
      lo = integer();
      expect( ".." );
      hi = integer();
      expect( "]" );
      if ( hi < lo )
        throw SyntaxError( tok.line, tok.col, "empty channel array" );
    }
    expect( ":" );
    int w = width();
    if ( array )
    {
      _arrays[name] = { lo, hi };
      for ( auto i = lo; i <= hi; ++i )
        _mod.ports.push_back( { dir, name + "[" + std::to_string( i ) + "]", w } );
    }
    else
      _mod.ports.push_back( { dir, name, w } );
  }

  void decls()
  {
    while ( true )
    {
      if ( accept( "var" ) )
      {
        std::vector<Token> names{ peek() };
        ident( "variable name" );
        while ( accept( "," ) )
        {
          names.push_back( peek() );
          ident( "variable name" );
        }
        expect( ":" );
        int w = width();
        expect( ";" );
        for ( auto const& n : names )
        {
          declare( n, n.text );
          _mod.vars.push_back( { n.text, w } );
        }
      }
      else if ( accept( "const" ) )
      {
        auto const tok = peek();
        auto name = ident( "constant name" );
        declare( tok, name );
        expect( "=" );
        _consts[name] = integer();
        expect( ";" );
      }
      else
        return;
    }
  }

  static StmtPtr make_list( Stmt::Type t, std::vector<StmtPtr> items, int line )
  {
    if ( items.size() == 1 )
      return items.front();
    auto s = std::make_shared<Stmt>();
    s->type = t;
    s->children = std::move( items );
    s->line = line;
    return s;
  }

  StmtPtr stmt()
  {
    int line = peek().line;
    std::vector<StmtPtr> items{ par() };
    while ( at( ";" ) && !( peek( 1 ).type == Token::Type::Punct && ( peek( 1 ).text == "}" || peek( 1 ).text == ")" ||
                                                                       peek( 1 ).text == "|" ) ) )
    {
      ++_pos;
      items.push_back( par() );
    }
    return make_list( Stmt::Type::Seq, std::move( items ), line );
  }

  StmtPtr par()
  {
    auto const start = peek();
    std::vector<StmtPtr> items{ atom() };
    while ( accept( "||" ) )
      items.push_back( atom() );
    if ( items.size() > 1 )
      check_par( start, items );
    return make_list( Stmt::Type::Par, std::move( items ), start.line );
  }

  void check_par( Token const& where, std::vector<StmtPtr> const& items )
  {
    std::vector<Footprint> fps( items.size() );
    for ( std::size_t i = 0; i < items.size(); ++i )
      stmt_footprint( *items[i], fps[i] );
    auto clash = [&]( std::set<std::string> const& a, std::set<std::string> const& b, std::string const& what ) {
      for ( auto const& x : a )
        if ( b.count( x ) )
          throw ParConflict( where.line, where.col, "parallel branches both " + what + " '" + x + "'" );
    };
    for ( std::size_t i = 0; i < items.size(); ++i )
      for ( std::size_t j = 0; j < items.size(); ++j )
      {
        if ( i == j )
          continue;
        clash( fps[i].writes, fps[j].writes, "write" );
        clash( fps[i].writes, fps[j].reads, "access" );
        if ( i < j )
        {
          clash( fps[i].sends, fps[j].sends, "send on" );
          clash( fps[i].receives, fps[j].receives, "receive from" );
        }
      }
  }

  StmtPtr block()
  {
    expect( "{" );
    decls();
    StmtPtr s;
    if ( at( "}" ) )
    {
      auto k = std::make_shared<Stmt>();
      k->type = Stmt::Type::Skip;
      s = k;
    }
    else
    {
      s = stmt();
      accept( ";" );
    }
    expect( "}" );
    return s;
  }

  StmtPtr atom()
  {
    auto const tok = peek();
    auto s = std::make_shared<Stmt>();
    s->line = tok.line;

    if ( accept( "loop" ) )
    {
      if ( _loop_depth > 0 || _in_nested )
        throw SyntaxError( tok.line, tok.col, "'loop' is only allowed as the module body" );
      ++_loop_depth;
      s->type = Stmt::Type::Loop;
      s->children.push_back( block() );
      --_loop_depth;
      return s;
    }
    NestedGuard guard( *this );
    if ( accept( "while" ) )
    {
      s->type = Stmt::Type::While;
      s->expr = expr();
      s->children.push_back( block() );
      return s;
    }
    if ( accept( "if" ) )
    {
      s->type = Stmt::Type::If;
      s->expr = expr();
      s->children.push_back( block() );
      if ( accept( "else" ) )
      {
        if ( at( "if" ) )
          s->children.push_back( atom() );
        else
          s->children.push_back( block() );
      }
      return s;
    }
    if ( accept( "case" ) )
    {
      s->type = Stmt::Type::Case;
      s->expr = expr();
      expect( "{" );
      arm( *s );
      while ( accept( "|" ) )
        arm( *s );
      expect( "}" );
      std::set<int64_t> seen;
      bool has_else = false;
      for ( auto const& a : s->arms )
      {
        if ( a.labels.empty() )
        {
          if ( has_else )
            throw SyntaxError( tok.line, tok.col, "duplicate else arm" );
          has_else = true;
        }
        for ( auto v : a.labels )
          if ( !seen.insert( v ).second )
            throw SyntaxError( tok.line, tok.col, "duplicate case label " + std::to_string( v ) );
      }
      return s;
    }
    if ( accept( "for" ) )
    {
      std::vector<StmtPtr> items;
      for_unroll( [&] { items.push_back( block() ); } );
      if ( items.empty() )
      {
        s->type = Stmt::Type::Skip;
        return s;
      }
      return make_list( Stmt::Type::Seq, std::move( items ), tok.line );
    }
    if ( accept( "skip" ) )
    {
      s->type = Stmt::Type::Skip;
      return s;
    }
    if ( accept( "(" ) )
    {
      auto inner = stmt();
      expect( ")" );
      return inner;
    }
    if ( at( "{" ) )
      return block();

    if ( peek().type != Token::Type::Ident )
      fail( "statement" );
    auto name = resource_name();
    if ( accept( ":=" ) )
    {
      require_var( tok, name );
      s->type = Stmt::Type::Assign;
      s->target = name;
      s->expr = expr();
      return s;
    }
    if ( accept( "?" ) )
    {
      require_chan( tok, name, Dir::In );
      auto const vt = peek();
      auto var = ident( "variable" );
      require_var( vt, var );
      s->type = Stmt::Type::Receive;
      s->source = name;
      s->target = var;
      return s;
    }
    if ( accept( "!" ) )
    {
      require_chan( tok, name, Dir::Out );
      s->type = Stmt::Type::Send;
      s->target = name;
      s->expr = expr();
      return s;
    }
    fail( "':=', '?' or '!'" );
  }

  /* `for j in lo..hi` followed by a body parsed once per value with j bound */
  template<class Fn>
  void for_unroll( Fn&& body )
  {
    auto const tok = peek();
    auto var = ident( "loop index" );
    if ( _consts.count( var ) )
      throw SyntaxError( tok.line, tok.col, "'" + var + "' already bound" );
    expect( "in" );
    auto lo = integer();
    expect( ".." );
    auto hi = integer();
    auto const start = _pos;
    std::size_t end = start;
    if ( hi < lo )
      throw SyntaxError( tok.line, tok.col, "empty for range" );
    for ( auto v = lo; v <= hi; ++v )
    {
      _pos = start;
      _consts[var] = v;
      body();
      end = _pos;
    }
    _consts.erase( var );
    _pos = end;
  }

  void arm( Stmt& s )
  {
    CaseArm a;
    if ( accept( "else" ) )
    {
      expect( ":" );
      a.body = stmt();
      s.arms.push_back( std::move( a ) );
      return;
    }
    if ( accept( "for" ) )
    {
      /* one arm per index value, labelled with that value */
      std::string var = peek().text;
      for_unroll( [&] {
        expect( ":" );
        CaseArm x;
        x.labels.push_back( _consts.at( var ) );
        x.body = stmt();
        s.arms.push_back( std::move( x ) );
      } );
      return;
    }
    a.labels.push_back( integer() );
    while ( accept( "," ) )
      a.labels.push_back( integer() );
    expect( ":" );
    a.body = stmt();
    s.arms.push_back( std::move( a ) );
  }

  /* identifier with an optional constant index for channel arrays */
  std::string resource_name()
  {
    auto const tok = peek();
    auto name = ident( "name" );
    if ( _arrays.count( name ) )
    {
      expect( "[" );
      auto idx = integer();
      expect( "]" );
      auto [lo, hi] = _arrays.at( name );
      if ( idx < lo || idx > hi )
        throw SyntaxError( tok.line, tok.col, "index " + std::to_string( idx ) + " outside " + name + "[" +
                                                  std::to_string( lo ) + ".." + std::to_string( hi ) + "]" );
      return name + "[" + std::to_string( idx ) + "]";
    }
    return name;
  }

  void require_var( Token const& t, std::string const& name )
  {
    if ( _mod.find_var( name ) )
      return;
    if ( _mod.find_port( name ) )
      throw SyntaxError( t.line, t.col, "'" + name + "' is a channel, not a variable" );
    throw UndeclaredName( t.line, t.col, "undeclared variable '" + name + "'" );
  }

  void require_chan( Token const& t, std::string const& name, Dir dir )
  {
    auto const* p = _mod.find_port( name );
    if ( !p )
    {
      if ( _mod.find_var( name ) )
        throw SyntaxError( t.line, t.col, "'" + name + "' is a variable, not a channel" );
      throw UndeclaredName( t.line, t.col, "undeclared channel '" + name + "'" );
    }
    if ( p->dir != dir )
      throw SyntaxError( t.line, t.col, "channel '" + name + "' is " + ( p->dir == Dir::In ? "an input" : "an output" ) );
  }

  /* expressions, loosest binding first */
  ExprPtr binary( ExprPtr l, std::string op, ExprPtr r, int line )
  {
    auto e = std::make_shared<Expr>();
    e->type = Expr::Type::Binary;
    e->op = std::move( op );
    e->lhs = std::move( l );
    e->rhs = std::move( r );
    e->line = line;
    return e;
  }

  ExprPtr expr()
  {
    auto e = conj();
    while ( at( "or" ) )
    {
      int line = peek().line;
      ++_pos;
      e = binary( e, "or", conj(), line );
    }
    return e;
  }

  ExprPtr conj()
  {
    auto e = cmp();
    while ( at( "and" ) )
    {
      int line = peek().line;
      ++_pos;
      e = binary( e, "and", cmp(), line );
    }
    return e;
  }

  ExprPtr cmp()
  {
    static const std::map<std::string, std::string> ops{ { "=", "eq" },  { "!=", "ne" }, { "<", "lt" },
                                                         { "<=", "le" }, { ">", "gt" },  { ">=", "ge" } };
    auto e = shift();
    for ( auto const& [tok, op] : ops )
    {
      if ( at( tok ) )
      {
        int line = peek().line;
        ++_pos;
        return binary( e, op, shift(), line );
      }
    }
    return e;
  }

  /* shifts take a constant amount */
  ExprPtr shift()
  {
    auto e = sum();
    while ( at( "<<" ) || at( ">>" ) )
    {
      auto const tok = _toks[_pos++];
      auto s = std::make_shared<Expr>();
      s->type = Expr::Type::Unary;
      s->op = tok.text == "<<" ? "shl" : "shr";
      s->value = integer();
      if ( s->value < 0 || s->value > 63 )
        throw SyntaxError( tok.line, tok.col, "shift amount outside [0, 63]" );
      s->lhs = e;
      s->line = tok.line;
      e = s;
    }
    return e;
  }

  ExprPtr sum()
  {
    auto e = product();
    while ( at( "+" ) || at( "-" ) || at( "^" ) )
    {
      int line = peek().line;
      auto op = _toks[_pos++].text;
      e = binary( e, op == "+" ? "add" : op == "-" ? "sub" : "xor", product(), line );
    }
    return e;
  }

  ExprPtr product()
  {
    auto e = unary();
    while ( at( "*" ) || at( "&" ) )
    {
      int line = peek().line;
      auto op = _toks[_pos++].text;
      e = binary( e, op == "*" ? "mul" : "and", unary(), line );
    }
    return e;
  }

  ExprPtr unary()
  {
    auto const tok = peek();
    if ( accept( "-" ) || accept( "not" ) || accept( "~" ) )
    {
      auto e = std::make_shared<Expr>();
      e->type = Expr::Type::Unary;
      e->op = tok.text == "-" ? "neg" : "not";
      e->lhs = unary();
      e->line = tok.line;
      return e;
    }
    return postfix();
  }

  ExprPtr postfix()
  {
    auto e = primary();
    while ( e->type == Expr::Type::Var && at( "[" ) )
    {
      int line = peek().line;
      ++_pos;
      auto bit = integer();
      expect( "]" );
      auto b = std::make_shared<Expr>();
      b->type = Expr::Type::Bit;
      b->value = bit;
      b->lhs = e;
      b->line = line;
      auto const* v = _mod.find_var( e->name );
      if ( bit < 0 || bit >= v->width )
        throw SyntaxError( line, 0, "bit " + std::to_string( bit ) + " outside '" + e->name + "'" );
      e = b;
    }
    return e;
  }

  ExprPtr primary()
  {
    auto const tok = peek();
    auto e = std::make_shared<Expr>();
    e->line = tok.line;
    if ( tok.type == Token::Type::Int )
    {
      ++_pos;
      e->type = Expr::Type::Const;
      e->value = tok.value;
      return e;
    }
    if ( accept( "(" ) )
    {
      auto inner = expr();
      expect( ")" );
      return inner;
    }
    if ( tok.type != Token::Type::Ident )
      fail( "expression" );
    if ( _consts.count( tok.text ) )
    {
      ++_pos;
      e->type = Expr::Type::Const;
      e->value = _consts.at( tok.text );
      return e;
    }
    auto name = resource_name();
    if ( _mod.find_var( name ) )
    {
      e->type = Expr::Type::Var;
      e->name = name;
      return e;
    }
    if ( _mod.find_port( name ) )
    {
      require_chan( tok, name, Dir::In );
      e->type = Expr::Type::Chan;
      e->name = name;
      return e;
    }
    throw UndeclaredName( tok.line, tok.col, "undeclared name '" + name + "'" );
  }

  /* marks statements nested below the module body so `loop` can be rejected there */
  bool _in_nested{ false };
  struct NestedGuard
  {
    explicit NestedGuard( Parser& p ) : p( p ), saved( p._in_nested ) { p._in_nested = p._loop_depth > 0 || p._in_nested; }
    ~NestedGuard() { p._in_nested = saved; }
    Parser& p;
    bool saved;
  };
};

} // namespace

SourceModule parse( std::string const& text )
{
  Parser p( lex( text ) );
  return p.module();
}

} // namespace elastika
