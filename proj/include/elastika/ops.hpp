#pragma once

#include "elastika/ir.hpp"

#include <cstdint>
#include <string>

namespace elastika
{

inline uint64_t mask_bits( int width )
{
  return width >= 64 ? ~uint64_t{ 0 } : ( ( uint64_t{ 1 } << width ) - 1 );
}

/// Two's-complement value of the low `width` bits.
inline int64_t sign_extend( uint64_t v, int width )
{
  if ( width <= 0 )
    return 0;
  if ( width >= 64 )
    return static_cast<int64_t>( v );
  v &= mask_bits( width );
  uint64_t const sign = uint64_t{ 1 } << ( width - 1 );
  return static_cast<int64_t>( ( v ^ sign ) - sign );
}

bool known_operator( std::string const& op );

/// Applies an Operator to its concatenated input word (input 0 in the low bits).
uint64_t eval_operator( Component const& c, uint64_t word );

} // namespace elastika
