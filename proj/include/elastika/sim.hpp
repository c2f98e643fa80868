#pragma once

#include "elastika/ir.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace elastika
{

/// A buffer-free cycle: unschedulable under a clock.
class CombinationalCycle : public Error
{
public:
  CombinationalCycle( std::vector<std::string> links );
  std::vector<std::string> links;
};

/// Runtime failure of the token machine (bad stimulus, unmatched Steer value).
class SimError : public Error
{
public:
  using Error::Error;
};

/*! \brief Per-component delays in picoseconds.
 *
 * Keys are kind names (`steer`, `fork`, `merge`, `join`, `arbiter`,
 * `initial`, `buffer`), `variable.read`, `variable.write`, and
 * `op.<delay class>` for Operators. An Operator whose class has no entry
 * falls back to `op`.
 */
struct DelayTable
{
  std::map<std::string, int64_t> ps;

  static DelayTable defaults();
  int64_t of( Component const& c, int out_port = 0 ) const;
  bool operator==( DelayTable const& ) const = default;
};

/// Per input channel, the values offered in order.
using Stimulus = std::map<std::string, std::vector<int64_t>>;

/// `name: v1 v2 ...` per line; `#` starts a comment.
Stimulus parse_stimulus( std::string const& text );
std::string write_stimulus( Stimulus const& s );

struct SimConfig
{
  Mode mode{ Mode::Async };
  int64_t clock_ps{ 1000 };
  DelayTable delays{ DelayTable::defaults() };
  Stimulus stimulus;
  int64_t horizon_ps{ 1'000'000'000 }; /* async: simulated time; sync: cycles x clock */
  std::size_t max_results{ 0 };        /* 0: no limit */
  std::vector<std::string> probes;     /* links whose token arrivals are timestamped */
  bool trace_occupancy{ false };
};

struct Sample
{
  int64_t value{ 0 };
  int64_t time_ps{ 0 };
  bool operator==( Sample const& ) const = default;
};

struct OccupancyPoint
{
  int64_t time_ps;
  std::string buffer;
  int tokens;
};

/// Link states at the moment a simulation stalls.
struct FrozenState
{
  enum class Status
  {
    Empty,
    Full, /* token offered to the consumer */
    Held  /* token taken by a transparent component still waiting for its ack */
  };
  std::map<std::string, Status> links;
  std::vector<std::string> blocked; /* components with their inputs ready but no room to fire */
  bool stimulus_pending{ false };
  bool has_inputs{ false };
};

struct DeadlockDiagnosis
{
  bool deadlock{ false };
  std::vector<std::string> blocked;
  std::vector<std::string> cycle; /* occupied links closing a loop, if any */
  std::string text;
};

DeadlockDiagnosis detect_deadlock( Network const& net, FrozenState const& state );

struct SimReport
{
  Mode mode{ Mode::Async };
  std::map<std::string, std::vector<Sample>> outputs;
  std::size_t results{ 0 };
  int64_t elapsed_ps{ 0 };     /* time of the last result */
  double throughput{ 0 };      /* results per ns */
  double cycle_time_ps{ 0 };   /* mean gap between consecutive results */
  double latency_ps{ 0 };      /* mean first-input-to-output delay */
  int64_t cycles{ 0 };         /* sync: clock cycles simulated */
  bool deadlock{ false };
  DeadlockDiagnosis diagnosis;
  bool stimulus_exhausted{ false };
  bool horizon_reached{ false };
  std::vector<double> occupancy; /* fraction of buffer-time holding k tokens */
  std::vector<OccupancyPoint> occupancy_trace;
  int64_t critical_path_ps{ 0 };
  bool overclocked{ false };
  bool approximate{ false };
  std::map<std::string, std::vector<int64_t>> probe_times;
  std::map<std::string, uint64_t> link_puts;  /* tokens placed on each link */
  std::map<std::string, uint64_t> link_takes; /* tokens removed from each link */

  /// Values on one output channel, in order.
  std::vector<int64_t> values( std::string const& channel ) const;
};

/// Longest buffer-free path through the delay table; throws CombinationalCycle.
int64_t critical_path( Network const& net, DelayTable const& delays );

SimReport run_async( Network const& net, SimConfig const& cfg );
SimReport run_sync( Network const& net, SimConfig const& cfg );
SimReport simulate( Network const& net, SimConfig const& cfg );

nlohmann::ordered_json to_json( SimReport const& r );
/// `time_ps,buffer,tokens` rows of the occupancy trace.
std::string occupancy_csv( SimReport const& r );

} // namespace elastika
