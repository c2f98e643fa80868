#include "elastika/config.hpp"

#include "elastika/netlist_io.hpp"

#include <charconv>
#include <sstream>

namespace elastika
{

namespace
{

std::string trim( std::string s )
{
  auto const b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
    return {};
  auto const e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}

std::string unquote( std::string s )
{
  if ( s.size() >= 2 && s.front() == '"' && s.back() == '"' )
    return s.substr( 1, s.size() - 2 );
  return s;
}

double number( std::string const& v, int line )
{
  std::size_t used = 0;
  double d = 0;
  try
  {
    d = std::stod( v, &used );
  }
  catch ( std::exception const& )
  {
    used = 0;
  }
  if ( used != v.size() || v.empty() )
    throw ConfigError( "line " + std::to_string( line ) + ": expected a number, got '" + v + "'" );
  return d;
}

int64_t integer( std::string const& v, int line )
{
  int64_t x = 0;
  auto [p, ec] = std::from_chars( v.data(), v.data() + v.size(), x );
  if ( ec != std::errc{} || p != v.data() + v.size() )
    throw ConfigError( "line " + std::to_string( line ) + ": expected an integer, got '" + v + "'" );
  return x;
}

} // namespace

Config parse_config( std::string const& text )
{
  Config c;
  std::string section;
  std::istringstream in( text );
  std::string raw;
  int line = 0;
  while ( std::getline( in, raw ) )
  {
    ++line;
    /* comments: '#' outside quotes */
    bool quoted = false;
    for ( std::size_t i = 0; i < raw.size(); ++i )
    {
      if ( raw[i] == '"' )
        quoted = !quoted;
      else if ( raw[i] == '#' && !quoted )
      {
        raw.resize( i );
        break;
      }
    }
    auto s = trim( raw );
    if ( s.empty() )
      continue;
    if ( s.front() == '[' )
    {
      if ( s.back() != ']' )
        throw ConfigError( "line " + std::to_string( line ) + ": unterminated section header" );
      section = trim( s.substr( 1, s.size() - 2 ) );
      if ( section != "delays" && section != "power" )
        throw ConfigError( "line " + std::to_string( line ) + ": unknown section [" + section + "]" );
      continue;
    }
    auto const eq = s.find( '=' );
    if ( eq == std::string::npos )
      throw ConfigError( "line " + std::to_string( line ) + ": expected key = value" );
    auto const key = unquote( trim( s.substr( 0, eq ) ) );
    auto const val = unquote( trim( s.substr( eq + 1 ) ) );

    if ( section.empty() )
    {
      if ( key == "clock_ps" )
        c.clock_ps = integer( val, line );
      else if ( key == "mem_weight" )
      {
        if ( val != "bits" && val != "units" )
          throw ConfigError( "line " + std::to_string( line ) + ": mem_weight is bits or units" );
        c.mem_weight = val == "bits" ? MemWeight::Bits : MemWeight::Units;
      }
      else
        throw ConfigError( "line " + std::to_string( line ) + ": unknown key '" + key + "'" );
    }
    else if ( section == "delays" )
      c.delays.ps[key] = integer( val, line );
    else
    {
      double const d = number( val, line );
      if ( key == "A" )
        c.power.A = d;
      else if ( key == "f" )
        c.power.f = d;
      else if ( key == "C" )
        c.power.C = d;
      else if ( key == "Vdd" || key == "V_DD" )
        c.power.Vdd = d;
      else if ( key == "leak_per_area" )
        c.power.leak_per_area = d;
      else
        throw ConfigError( "line " + std::to_string( line ) + ": unknown power key '" + key + "'" );
    }
  }
  if ( c.clock_ps <= 0 )
    throw ConfigError( "clock_ps must be positive" );
  try
  {
    c.power.validate();
  }
  catch ( InvalidParams const& e )
  {
    throw ConfigError( e.what() );
  }
  return c;
}

Config load_config( std::string const& path )
{
  return parse_config( read_file( path ) );
}

} // namespace elastika
