#pragma once

#include "elastika/graph.hpp"
#include "elastika/ir.hpp"
#include "elastika/sim.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace elastika
{

class InvalidParams : public Error
{
public:
  using Error::Error;
};

/// Relative-unit inputs of the dynamic and static power models.
struct PowerParams
{
  double A{ 0.5 };             /* activity factor, 0.5..1 */
  double f{ 1e9 };             /* Hz */
  double C{ 1.0 };             /* switched capacitance per unit area */
  double Vdd{ 1.0 };           /* V */
  double leak_per_area{ 1.0 }; /* leakage current per unit area */

  void validate() const; /* throws InvalidParams */
  bool operator==( PowerParams const& ) const = default;
};

/// How memory is counted: width x capacity bits, or one unit per element.
enum class MemWeight
{
  Bits,
  Units
};

struct ThroughputOptions
{
  Mode mode{ Mode::Async };
  int64_t clock_ps{ 1000 };           /* sync: delta */
  std::map<std::string, int> marking; /* tokens per link; empty: one per Initial output */
  std::set<std::string> excluded;     /* links never traversed (untaken branches) */
  std::size_t cycle_limit{ 10000 };
};

struct CycleFigures
{
  std::vector<std::string> links;
  int tokens{ 0 };          /* sum of m(e) */
  int64_t traversal_ps{ 0 }; /* async: member delays; sync: gamma x delta */
  int buffers{ 0 };         /* gamma in sync mode */
  double theta{ 0 };        /* tokens per ns */
};

struct ThroughputReport
{
  double theta{ 0 }; /* per ns; 0 when no marked cycle exists */
  std::optional<CycleFigures> binding;
  std::size_t cycles{ 0 };   /* cycles considered */
  std::size_t unmarked{ 0 }; /* cycles holding no token, skipped */
  int64_t delta_ps{ 0 };
};

struct CostReport
{
  std::size_t comp_count{ 0 };
  double mem_units{ 0 };
  double cell_area{ 0 };
  double activity{ 0 };
  double dynamic_power{ 0 };
  double leakage_power{ 0 };
  std::optional<ThroughputReport> throughput;
};

/// Comp and Mem of the network; cell_area = comp_count + mem_units.
CostReport area( Network const& net, MemWeight w = MemWeight::Bits );

/*! \brief Dynamic and leakage power in relative units.
 *
 * dynamic = A f C Vdd^2 cell_area, leakage = leak_per_area cell_area Vdd.
 * With a simulation report, A is taken from buffer occupancy instead:
 * 0.5 plus half the mean fraction of buffer capacity in use.
 */
CostReport power( Network const& net, PowerParams const& p, SimReport const* activity = nullptr,
                  MemWeight w = MemWeight::Bits );

/// Activity factor derived from a simulation's occupancy histogram.
double occupancy_activity( SimReport const& r );

/*! \brief Marked-graph throughput bound: min over cycles of tokens / traversal time.
 *
 * Throws TooManyCycles past `cycle_limit`.
 */
ThroughputReport analytic_throughput( Network const& net, DelayTable const& delays,
                                      ThroughputOptions const& opts = {} );

nlohmann::ordered_json to_json( CostReport const& r );
nlohmann::ordered_json to_json( ThroughputReport const& r );

/// `f_hz,dynamic,leakage,total` rows for each frequency.
std::string frequency_sweep_csv( Network const& net, PowerParams p, std::vector<double> const& freqs,
                                 MemWeight w = MemWeight::Bits );

} // namespace elastika
