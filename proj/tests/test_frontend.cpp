#include "support.hpp"

#include "elastika/frontend.hpp"
#include "elastika/graph.hpp"
#include "elastika/netlist_io.hpp"

#include <doctest.h>

using namespace elastika;
using namespace elastika::testing;
using ast::Stmt;

TEST_CASE( "minimal loop lowers to one Initial and one constant" )
{
  auto const net = compile( parse( "module t(out b:8) { loop { b!1 } }" ) );
  CHECK( net.count( Kind::Initial ) == 1 );
  CHECK( net.count( Kind::Buffer ) == 0 );
  std::size_t consts = 0;
  for ( auto const& [id, c] : net.components() )
    consts += c.kind == Kind::Operator && c.params.op == "const";
  CHECK( consts == 1 );
  CHECK( validate( net ).empty() );
}

TEST_CASE( "POLY parses to a loop of receive, while and send" )
{
  auto const m = parse( read_file( bench_dir() + "/poly.csp" ) );
  CHECK( m.name == "poly" );
  /* coefs[0..2] elaborates to three ports */
  CHECK( m.find_port( "coefs[0]" ) );
  CHECK( m.find_port( "coefs[2]" ) );
  CHECK( !m.find_port( "coefs[3]" ) );
  REQUIRE( m.body->type == Stmt::Type::Loop );
  auto const& seq = m.body->children.at( 0 );
  REQUIRE( seq->type == Stmt::Type::Seq );
  REQUIRE( seq->children.size() == 3 );
  CHECK( seq->children[0]->type == Stmt::Type::Par );
  CHECK( seq->children[1]->type == Stmt::Type::While );
  CHECK( seq->children[2]->type == Stmt::Type::Send );
}

TEST_CASE( "for unrolls into case arms" )
{
  auto const m = parse( "module t(in c[0..2]:8; out o:8) { var s, k : 8; loop { c[2]?k; case k { for j in 0..1: s := c[j] }; o!s } }" );
  auto const& seq = m.body->children.at( 0 );
  auto const& cs = seq->children.at( 1 );
  REQUIRE( cs->type == Stmt::Type::Case );
  REQUIRE( cs->arms.size() == 2 );
  CHECK( cs->arms[0].labels == std::vector<int64_t>{ 0 } );
  CHECK( cs->arms[1].labels == std::vector<int64_t>{ 1 } );
}

TEST_CASE( "static errors" )
{
  CHECK_THROWS_AS( parse( "module t(out b:8) { loop { b!x } }" ), UndeclaredName );
  CHECK_THROWS_AS( parse( "module t(out b:8) { var x:8; loop { x := 1 || x := 2 } }" ), ParConflict );
  CHECK_THROWS_AS( parse( "module t(out b:8) { loop { b!1 || b!2 } }" ), ParConflict );
  CHECK_THROWS_AS( parse( "module t(in a:8) { var x:8; loop { x!a } }" ), SyntaxError );
  try
  {
    parse( "module t(out b:8) {\n  loop { b!1 ;; }\n}" );
    FAIL( "expected a syntax error" );
  }
  catch ( SyntaxError const& e )
  {
    CHECK( e.line == 2 );
    CHECK( e.column > 1 );
  }
}

TEST_CASE( "shift operators" )
{
  auto const net = compile( parse( "module t(in a:8; out b:8) { var x:8; loop { a?x; b!(x << 2) >> 1 } }" ) );
  CHECK( validate( net ).empty() );
  CHECK_THROWS_AS( parse( "module t(in a:8; out b:8) { var x:8; loop { a?x; b!x << x } }" ), SyntaxError );
}

TEST_CASE( "benchmarks compile clean, deterministically, without buffers" )
{
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const text = read_file( bench_dir() + "/" + std::string( b ) + ".csp" );
    auto const n1 = compile( parse( text ) );
    auto const n2 = compile( parse( text ) );
    CHECK( write_netlist( n1 ) == write_netlist( n2 ) );
    CHECK( n1.count( Kind::Buffer ) == 0 );
    CHECK( validate( n1 ).empty() );
    CHECK( n1.count( Kind::Initial ) == 1 );
  }
}

TEST_CASE( "every loop construct contributes a cycle" )
{
  /* elgcd: loop + while; poly: loop + while; smul: loop + while */
  for ( auto const* b : { "elgcd", "poly", "smul" } )
  {
    auto const net = compile_bench( b );
    CHECK( enumerate_cycles( net, 100000 ).size() >= 2 );
    CHECK( find_back_edges( net ).size() >= 2 );
  }
}
