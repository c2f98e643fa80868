#include "elastika/ops.hpp"

#include <numeric>
#include <set>

namespace elastika
{

bool known_operator( std::string const& op )
{
  static const std::set<std::string> ops{ "const", "add", "sub", "mul", "and", "or",   "xor",    "eq",   "ne",
                                          "lt",    "le",  "gt",  "ge",  "neg", "not",  "nez",    "bit",  "resize",
                                          "high",  "tag", "id",  "drop",  "shl", "shr" };
  return ops.count( op ) > 0;
}

uint64_t eval_operator( Component const& c, uint64_t word )
{
  auto const& p = c.params;
  int const out_w = c.out_widths.empty() ? 0 : c.out_widths[0];
  int const in_w = std::accumulate( c.in_widths.begin(), c.in_widths.end(), 0 );
  auto fields = p.fields.empty() ? std::vector<int>{ in_w } : p.fields;

  auto field = [&]( std::size_t i ) -> int64_t {
    int shift = 0;
    for ( std::size_t k = 0; k < i && k < fields.size(); ++k )
      shift += fields[k];
    int const w = i < fields.size() ? fields[i] : 0;
    return sign_extend( shift >= 64 ? 0 : word >> shift, w );
  };
  auto out = [&]( int64_t v ) { return static_cast<uint64_t>( v ) & mask_bits( out_w ); };

  auto const& op = p.op;
  if ( op == "const" )
    return out( p.imm );
  if ( op == "id" )
    return word & mask_bits( out_w );
  if ( op == "drop" )
    return 0;
  if ( op == "neg" )
    return out( -field( 0 ) );
  if ( op == "not" )
    return out( ~field( 0 ) );
  if ( op == "nez" )
    return ( word & mask_bits( in_w ) ) != 0;
  if ( op == "bit" )
    return ( word >> p.imm ) & 1u;
  if ( op == "shl" )
    return out( static_cast<int64_t>( static_cast<uint64_t>( field( 0 ) ) << p.imm ) );
  if ( op == "shr" )
    return out( field( 0 ) >> p.imm );
  if ( op == "resize" )
    return out( field( 0 ) );
  if ( op == "high" )
    return out( static_cast<int64_t>( word >> p.imm ) );
  if ( op == "tag" )
    return out( static_cast<int64_t>( ( word << ( out_w - in_w ) ) | static_cast<uint64_t>( p.imm ) ) );

  auto const a = field( 0 ), b = field( 1 );
  if ( op == "add" )
    return out( static_cast<int64_t>( static_cast<uint64_t>( a ) + static_cast<uint64_t>( b ) ) );
  if ( op == "sub" )
    return out( static_cast<int64_t>( static_cast<uint64_t>( a ) - static_cast<uint64_t>( b ) ) );
  if ( op == "mul" )
    return out( static_cast<int64_t>( static_cast<uint64_t>( a ) * static_cast<uint64_t>( b ) ) );
  if ( op == "and" )
    return out( a & b );
  if ( op == "or" )
    return out( a | b );
  if ( op == "xor" )
    return out( a ^ b );
  if ( op == "eq" )
    return a == b;
  if ( op == "ne" )
    return a != b;
  if ( op == "lt" )
    return a < b;
  if ( op == "le" )
    return a <= b;
  if ( op == "gt" )
    return a > b;
  if ( op == "ge" )
    return a >= b;
  throw Error( "operator '" + c.id + "': unknown function '" + op + "'" );
}

} // namespace elastika
