#pragma once

#include "elastika/ir.hpp"

#include <memory>
#include <string>
#include <vector>

namespace elastika
{

class SyntaxError : public Error
{
public:
  SyntaxError( int line, int column, std::string const& msg )
      : Error( std::to_string( line ) + ":" + std::to_string( column ) + ": " + msg ), line( line ), column( column )
  {}
  int line;
  int column;
};

class UndeclaredName : public SyntaxError
{
public:
  using SyntaxError::SyntaxError;
};

class ParConflict : public SyntaxError
{
public:
  using SyntaxError::SyntaxError;
};

class CompileError : public Error
{
public:
  using Error::Error;
};

namespace ast
{

struct Expr;
using ExprPtr = std::shared_ptr<Expr const>;

/// Expression tree. `Chan` reads an input channel inside an expression.
struct Expr
{
  enum class Type
  {
    Const,
    Var,
    Chan,
    Unary,
    Binary,
    Bit
  };
  Type type{ Type::Const };
  int64_t value{ 0 };
  std::string name;
  std::string op;
  ExprPtr lhs;
  ExprPtr rhs;
  int line{ 0 };
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt const>;

struct CaseArm
{
  std::vector<int64_t> labels; /* empty for the else arm */
  StmtPtr body;
};

struct Stmt
{
  enum class Type
  {
    Seq,
    Par,
    Loop,
    While,
    If,
    Case,
    Assign,
    Send,
    Receive,
    Skip
  };
  Type type{ Type::Skip };
  std::vector<StmtPtr> children; /* Seq/Par items, Loop/While body, If then/else */
  ExprPtr expr;                  /* condition, selector, assigned or sent value */
  std::string target;            /* variable or channel */
  std::string source;            /* Receive: channel */
  std::vector<CaseArm> arms;
  int line{ 0 };
};

} // namespace ast

struct PortDecl
{
  Dir dir{ Dir::In };
  std::string name;
  int width{ 0 };
};

struct VarDecl
{
  std::string name;
  int width{ 0 };
};

struct SourceModule
{
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<VarDecl> vars;
  ast::StmtPtr body;

  PortDecl const* find_port( std::string const& n ) const;
  VarDecl const* find_var( std::string const& n ) const;
};

/// Parses and statically checks a module; `for` loops are unrolled and channel arrays elaborated.
SourceModule parse( std::string const& text );

/// Syntax-directed lowering to an unbuffered elastic network.
Network compile( SourceModule const& m );

} // namespace elastika
