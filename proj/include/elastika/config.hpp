#pragma once

#include "elastika/metrics.hpp"
#include "elastika/sim.hpp"

#include <string>

namespace elastika
{

class ConfigError : public Error
{
public:
  using Error::Error;
};

/*! \brief Settings read from a TOML-style key/value file.
 *
 * \verbatim
 * clock_ps = 1000
 * mem_weight = "bits"      # or "units"
 * [delays]
 * fork = 100
 * "op.mul" = 3000
 * [power]
 * A = 0.5
 * f = 1e9
 * \endverbatim
 *
 * Keys under [delays] replace or add to the default table.
 */
struct Config
{
  int64_t clock_ps{ 1000 };
  MemWeight mem_weight{ MemWeight::Bits };
  DelayTable delays{ DelayTable::defaults() };
  PowerParams power;
};

Config parse_config( std::string const& text );
Config load_config( std::string const& path );

} // namespace elastika
