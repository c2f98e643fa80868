#pragma once

#include "elastika/buffering.hpp"
#include "elastika/config.hpp"
#include "elastika/sim.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace elastika
{

/// A sweep cell whose outputs differ from the software reference.
class EquivalenceFailure : public Error
{
public:
  using Error::Error;
};

/// Expected output values per channel for a stimulus.
using Reference = std::function<std::map<std::string, std::vector<int64_t>>( Stimulus const& )>;

struct Dataset
{
  std::string label;
  Stimulus stimulus;
};

struct BenchmarkSpec
{
  std::string name;
  std::string source; /* path */
  std::vector<Dataset> datasets;
  Reference reference;
  std::vector<Policy> policies{ Policy::Simple, Policy::Loop, Policy::PAC };
  std::vector<Mode> modes{ Mode::Async, Mode::SyncElastic };
  std::vector<int64_t> clocks_ps{ 1000 };
};

/// The shipped benchmarks: `elgcd`, `poly`, `smul`, read from `<dir>/<name>.csp`.
std::vector<std::string> builtin_benchmarks();
BenchmarkSpec builtin_spec( std::string const& name, std::string const& dir );

/// Software references for the shipped benchmarks.
std::map<std::string, std::vector<int64_t>> reference_gcd( Stimulus const& s );
std::map<std::string, std::vector<int64_t>> reference_poly( Stimulus const& s );
std::map<std::string, std::vector<int64_t>> reference_smul( Stimulus const& s );

struct SweepRow
{
  std::string benchmark;
  Mode mode{ Mode::Async };
  int64_t clock_ps{ 0 };
  Policy policy{ Policy::Simple };
  std::size_t buffers{ 0 };
  double reduction_pct{ 0 };            /* vs the Simple plan */
  double throughput{ 0 };               /* results per ns, mean over datasets */
  std::vector<double> latency_ps;       /* one per dataset */
  double dynamic_power{ 0 };
  double leakage_power{ 0 };
  bool equivalent{ false };
  std::string mismatch;
};

struct SweepTable
{
  std::vector<SweepRow> rows; /* ordered by mode, clock, then policy */
  bool all_equivalent() const;
};

/*! \brief Runs every (mode, clock, policy) cell of `spec` on a worker pool.
 *
 * Rows come back in cell order whatever the thread count. With `strict`,
 * the first mismatching cell (in that order) raises EquivalenceFailure.
 */
SweepTable sweep( BenchmarkSpec const& spec, Config const& cfg, unsigned threads = 0, bool strict = true );

std::string format_table( SweepTable const& t );
std::string to_csv( SweepTable const& t );
nlohmann::ordered_json to_json( SweepTable const& t );

} // namespace elastika
