#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "analyzers.hpp"
#include "economy.hpp"
#include "partition.hpp"
#include "strategy.hpp"

namespace qdispatch {

enum class ArrivalModel { poisson, deterministic };

struct SimConfig {
  unsigned scale = 1;  // drivers per unit mass
  double horizon = 1000.0;
  double warmup = 0.0;
  double offer_latency = 0.0;  // time per dispatch attempt
  std::uint64_t seed = 1;
  ArrivalModel arrivals = ArrivalModel::poisson;
  bool record = false;           // keep per-event and per-agent logs
  double sample_interval = 0.0;  // queue samples; 0 picks horizon / 1000
  double drain_limit = -1.0;     // extra time after horizon for the cohort to leave; < 0 means horizon
  std::size_t tag_every = 0;     // every n-th arriving driver uses the tagged strategy
};

void validate_config(const SimConfig& cfg);

enum class RiderFate { completed, cancelled, not_dispatched };
enum class DriverFate { balked, trip, left_empty, in_queue };

struct TraceEvent {
  enum class Type { rider_arrival, driver_arrival, join, balk, offer, accept, decline, rejoin, leave, cancel, lost };
  Type type = Type::rider_arrival;
  double time = 0.0;
  std::uint64_t rider = 0;
  std::uint64_t driver = 0;
  double position = 0.0;   // of the driver, in mass
  std::size_t destination = 0;
  long attempt = 0;
};

struct RiderRecord {
  std::uint64_t id = 0;
  double arrival = 0.0;
  std::size_t destination = 0;
  long attempts = 0;
  RiderFate fate = RiderFate::not_dispatched;
  std::uint64_t driver = 0;
};

struct DriverRecord {
  std::uint64_t id = 0;
  double arrival = 0.0;
  double departure = std::numeric_limits<double>::quiet_NaN();
  DriverFate fate = DriverFate::in_queue;
  std::size_t destination = 0;
  double payoff = 0.0;
  bool tagged = false;
};

struct QueueSample {
  double time = 0.0;
  std::size_t length = 0;
};

// Streaming mean/variance.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x);
  double variance() const { return count ? m2 / static_cast<double>(count) : 0.0; }
};

// Metrics over the window [warmup, horizon). The cohort is the set of drivers
// arriving inside the window; they are followed until they leave.
struct TraceSummary {
  std::vector<std::uint64_t> completed;  // trips per destination completed in the window
  double revenue = 0.0;                  // earnings of those trips
  double queue_area = 0.0;               // integral of queue count over the window

  std::uint64_t cohort_arrived = 0;
  std::uint64_t cohort_joined = 0;
  std::uint64_t cohort_censored = 0;  // still queued when the run stopped
  RunningStats cohort_payoff;         // arrived drivers, balkers count as 0
  RunningStats cohort_wait;           // joined drivers who left
  RunningStats tagged_payoff;

  std::uint64_t riders = 0;
  std::uint64_t riders_completed = 0;
  std::uint64_t riders_cancelled = 0;
  std::uint64_t riders_not_dispatched = 0;
  long max_attempts = 0;

  std::uint64_t drivers = 0;
  std::uint64_t joined = 0;
  std::uint64_t departed_trip = 0;
  std::uint64_t departed_empty = 0;
  std::uint64_t in_queue_at_end = 0;

  double end_time = 0.0;
  bool drained = true;
};

struct SimulationTrace {
  SimConfig config;
  Mechanism mechanism = Mechanism::direct_fifo;
  TraceSummary summary;
  std::vector<QueueSample> samples;
  std::vector<TraceEvent> events;  // only with cfg.record
  std::vector<RiderRecord> riders;
  std::vector<DriverRecord> drivers;
};

SimulationTrace simulate(const Economy& e, Mechanism m, const DriverStrategy& strategy, const SimConfig& cfg,
                         const BinLayout* layout = nullptr, const DriverStrategy* tagged = nullptr);

struct EmpiricalOutcome {
  EquilibriumOutcome outcome;
  bool no_completions = false;
  std::uint64_t censored = 0;
};

EmpiricalOutcome empirical_outcome(const SimulationTrace& trace, const Economy& e, const SimConfig& cfg);

void write_trace(const SimulationTrace& trace, std::ostream& out);
void write_trace(const SimulationTrace& trace, const std::string& path);

}  // namespace qdispatch
