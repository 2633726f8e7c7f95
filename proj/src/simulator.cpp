#include "simulator.hpp"

#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dispatch.hpp"
#include "error.hpp"
#include "order_queue.hpp"

namespace qdispatch {

void RunningStats::add(double x) {
  ++count;
  double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
  min = std::min(min, x);
  max = std::max(max, x);
}

void validate_config(const SimConfig& cfg) {
  if (cfg.scale < 1) fail(ErrorKind::invalid_argument, "scale must be at least 1");
  if (!(cfg.warmup >= 0)) fail(ErrorKind::invalid_argument, "warmup must be nonnegative");
  if (!(cfg.horizon > cfg.warmup) || !std::isfinite(cfg.horizon))
    fail(ErrorKind::invalid_argument, "horizon must be finite and exceed warmup");
  if (!(cfg.offer_latency >= 0) || !std::isfinite(cfg.offer_latency))
    fail(ErrorKind::invalid_argument, "offer latency must be nonnegative");
  if (cfg.sample_interval < 0) fail(ErrorKind::invalid_argument, "sample interval must be nonnegative");
}

namespace {

struct QueueEntry {
  std::uint64_t id = 0;
  double arrival = 0.0;
  bool cohort = false;
  bool tagged = false;
};

enum Kind : int { rider_kind = 0, driver_kind = 1, attempt_kind = 2 };

struct Event {
  double time;
  int kind;
  std::uint64_t seq;
  std::size_t payload;  // destination for arrivals (0: draw one), rider id for attempts
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

struct PendingRider {
  std::size_t destination = 0;
  long attempt = 0;
};

class Runner {
public:
  Runner(const Economy& e, Mechanism m, const DriverStrategy& s, const SimConfig& cfg, const BinLayout* layout,
         const DriverStrategy* tagged)
      : e_(e), strategy_(s), tagged_(tagged ? *tagged : s), cfg_(cfg), rng_(cfg.seed),
        plan_(make_dispatch_plan(m, e, layout, cfg.scale)), k_(static_cast<double>(cfg.scale)) {
    trace_.config = cfg;
    trace_.mechanism = m;
    trace_.summary.completed.assign(e.size(), 0);
    interval_ = cfg.sample_interval > 0 ? cfg.sample_interval : cfg.horizon / 1000.0;
    hard_end_ = cfg.horizon + (cfg.drain_limit >= 0 ? cfg.drain_limit : cfg.horizon);
  }

  SimulationTrace run() {
    const double rider_rate = e_.total_demand() * k_;
    const double driver_rate = e_.lambda() * k_;
    if (cfg_.arrivals == ArrivalModel::poisson) {
      std::vector<double> weights;
      for (const auto& d : e_.destinations()) weights.push_back(d.mu);
      pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
      push(exp_draw(rider_rate), rider_kind, 0);
      push(exp_draw(driver_rate), driver_kind, 0);
    } else {
      for (std::size_t i = 1; i <= e_.size(); ++i) push(uniform() / (e_.mu(i) * k_), rider_kind, i);
      push(uniform() / driver_rate, driver_kind, 0);
    }

    auto& sum = trace_.summary;
    while (!events_.empty()) {
      Event ev = events_.top();
      if (ev.time >= cfg_.horizon) {
        if (cohort_in_queue_ == 0) break;
        if (ev.time >= hard_end_) {
          sum.drained = false;
          break;
        }
      }
      events_.pop();
      advance(ev.time);
      switch (ev.kind) {
        case rider_kind: {
          std::size_t dest = ev.payload;
          if (cfg_.arrivals == ArrivalModel::poisson) {
            dest = pick_(rng_) + 1;
            push(ev.time + exp_draw(rider_rate), rider_kind, 0);
          } else {
            push(ev.time + 1.0 / (e_.mu(dest) * k_), rider_kind, dest);
          }
          rider_arrival(ev.time, dest);
          break;
        }
        case driver_kind:
          if (cfg_.arrivals == ArrivalModel::poisson)
            push(ev.time + exp_draw(driver_rate), driver_kind, 0);
          else
            push(ev.time + 1.0 / driver_rate, driver_kind, 0);
          driver_arrival(ev.time);
          break;
        case attempt_kind: {
          auto it = pending_.find(ev.payload);
          PendingRider pr = it->second;
          if (attempt(ev.time, ev.payload, pr.destination, pr.attempt)) {
            pending_.erase(it);
          } else {
            it->second.attempt += 1;
            push(ev.time + cfg_.offer_latency, attempt_kind, ev.payload);
          }
          break;
        }
      }
    }
    sum.end_time = clock_;
    sum.cohort_censored = cohort_in_queue_;
    sum.in_queue_at_end = queue_.size();
    return std::move(trace_);
  }

private:
  void push(double t, int kind, std::size_t payload) { events_.push({t, kind, seq_++, payload}); }

  double exp_draw(double rate) { return std::exponential_distribution<double>(rate)(rng_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool draw(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  bool in_window(double t) const { return t >= cfg_.warmup && t < cfg_.horizon; }

  void advance(double t) {
    double a = std::max(clock_, cfg_.warmup);
    double b = std::min(t, cfg_.horizon);
    if (b > a) trace_.summary.queue_area += static_cast<double>(queue_.size()) * (b - a);
    while (next_sample_ <= t && next_sample_ <= cfg_.horizon) {
      trace_.samples.push_back({next_sample_, queue_.size()});
      next_sample_ += interval_;
    }
    clock_ = t;
  }

  void log(TraceEvent::Type type, double t, std::uint64_t rider, std::uint64_t driver, double position,
           std::size_t dest, long attempt_no) {
    if (cfg_.record) trace_.events.push_back({type, t, rider, driver, position, dest, attempt_no});
  }

  void rider_arrival(double t, std::size_t dest) {
    std::uint64_t id = rider_seq_++;
    ++trace_.summary.riders;
    if (cfg_.record) trace_.riders.push_back({id, t, dest, 0, RiderFate::not_dispatched, 0});
    log(TraceEvent::Type::rider_arrival, t, id, 0, 0.0, dest, 0);
    if (cfg_.offer_latency == 0.0) {
      for (long a = 1; !attempt(t, id, dest, a); ++a) {
      }
      return;
    }
    if (!attempt(t, id, dest, 1)) {
      pending_[id] = {dest, 2};
      push(t + cfg_.offer_latency, attempt_kind, id);
    }
  }

  void rider_done(std::uint64_t id, RiderFate fate, long attempts, std::uint64_t driver) {
    auto& sum = trace_.summary;
    sum.max_attempts = std::max(sum.max_attempts, attempts);
    switch (fate) {
      case RiderFate::completed: ++sum.riders_completed; break;
      case RiderFate::cancelled: ++sum.riders_cancelled; break;
      case RiderFate::not_dispatched: ++sum.riders_not_dispatched; break;
    }
    if (cfg_.record) {
      auto& r = trace_.riders[id];
      r.fate = fate;
      r.attempts = attempts;
      r.driver = driver;
    }
  }

  // Returns true once the rider is resolved.
  bool attempt(double t, std::uint64_t rider, std::size_t dest, long a) {
    auto target = dispatch_target(plan_, dest, a, queue_.size(), rng_);
    if (!target) {
      // an empty randomized-FIFO bin still uses up the attempt
      bool empty_bin = plan_.mechanism == Mechanism::randomized_fifo && a <= static_cast<long>(plan_.bins.size());
      if (empty_bin && a < plan_.patience) return false;
      long used = empty_bin ? a : a - 1;
      if (plan_.mechanism == Mechanism::direct_fifo) {
        log(TraceEvent::Type::lost, t, rider, 0, 0.0, dest, used);
        rider_done(rider, RiderFate::not_dispatched, used, 0);
      } else {
        log(TraceEvent::Type::cancel, t, rider, 0, 0.0, dest, used);
        rider_done(rider, RiderFate::cancelled, used, 0);
      }
      return true;
    }
    std::size_t slot = queue_.slot_at(*target);
    QueueEntry entry = queue_.at_slot(slot);
    const double q = static_cast<double>(*target) / k_;
    const double Q = static_cast<double>(queue_.size()) / k_;
    const DriverStrategy& s = entry.tagged ? tagged_ : strategy_;
    log(TraceEvent::Type::offer, t, rider, entry.id, q, dest, a);

    if (draw(s.accept(q, Q, dest))) {
      queue_.erase_slot(slot);
      log(TraceEvent::Type::accept, t, rider, entry.id, q, dest, a);
      auto& sum = trace_.summary;
      if (in_window(t)) {
        ++sum.completed[dest - 1];
        sum.revenue += e_.w(dest);
      }
      ++sum.departed_trip;
      depart(entry, t, e_.w(dest) - e_.driver_cost() * (t - entry.arrival), DriverFate::trip, dest);
      rider_done(rider, RiderFate::completed, a, entry.id);
      return true;
    }

    log(TraceEvent::Type::decline, t, rider, entry.id, q, dest, a);
    if (draw(s.leave(q, Q))) {
      queue_.erase_slot(slot);
      log(TraceEvent::Type::leave, t, 0, entry.id, q, 0, 0);
      ++trace_.summary.departed_empty;
      depart(entry, t, -e_.driver_cost() * (t - entry.arrival), DriverFate::left_empty, 0);
    } else if (draw(s.rejoin(q, Q))) {
      queue_.erase_slot(slot);
      queue_.push_back(entry);
      log(TraceEvent::Type::rejoin, t, 0, entry.id, q, 0, 0);
    }
    if (a >= plan_.patience) {
      log(TraceEvent::Type::cancel, t, rider, 0, 0.0, dest, a);
      rider_done(rider, RiderFate::cancelled, a, 0);
      return true;
    }
    return false;
  }

  void depart(const QueueEntry& entry, double t, double payoff, DriverFate fate, std::size_t dest) {
    auto& sum = trace_.summary;
    if (entry.cohort) {
      sum.cohort_payoff.add(payoff);
      sum.cohort_wait.add(t - entry.arrival);
      if (entry.tagged) sum.tagged_payoff.add(payoff);
      --cohort_in_queue_;
    }
    if (cfg_.record) {
      auto& d = trace_.drivers[entry.id];
      d.departure = t;
      d.fate = fate;
      d.destination = dest;
      d.payoff = payoff;
    }
  }

  void driver_arrival(double t) {
    std::uint64_t id = driver_seq_++;
    auto& sum = trace_.summary;
    ++sum.drivers;
    QueueEntry entry{id, t, in_window(t), cfg_.tag_every > 0 && (id + 1) % cfg_.tag_every == 0};
    if (cfg_.record) trace_.drivers.push_back({id, t, std::numeric_limits<double>::quiet_NaN(), DriverFate::in_queue, 0, 0.0, entry.tagged});
    log(TraceEvent::Type::driver_arrival, t, 0, id, 0.0, 0, 0);
    const double Q = static_cast<double>(queue_.size()) / k_;
    const DriverStrategy& s = entry.tagged ? tagged_ : strategy_;
    if (entry.cohort) ++sum.cohort_arrived;
    if (draw(s.leave(Q, Q))) {
      log(TraceEvent::Type::balk, t, 0, id, Q, 0, 0);
      if (entry.cohort) {
        sum.cohort_payoff.add(0.0);
        if (entry.tagged) sum.tagged_payoff.add(0.0);
      }
      if (cfg_.record) {
        auto& d = trace_.drivers[id];
        d.fate = DriverFate::balked;
        d.departure = t;
      }
      return;
    }
    queue_.push_back(entry);
    ++sum.joined;
    if (entry.cohort) {
      ++sum.cohort_joined;
      ++cohort_in_queue_;
    }
    log(TraceEvent::Type::join, t, 0, id, Q, 0, 0);
  }

  const Economy& e_;
  const DriverStrategy& strategy_;
  const DriverStrategy& tagged_;
  SimConfig cfg_;
  std::mt19937_64 rng_;
  DispatchPlan plan_;
  double k_;
  SimulationTrace trace_;
  OrderedQueue<QueueEntry> queue_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::unordered_map<std::uint64_t, PendingRider> pending_;
  std::discrete_distribution<std::size_t> pick_;
  std::uint64_t seq_ = 0;
  std::uint64_t rider_seq_ = 0;
  std::uint64_t driver_seq_ = 0;
  std::uint64_t cohort_in_queue_ = 0;
  double clock_ = 0.0;
  double interval_ = 1.0;
  double next_sample_ = 0.0;
  double hard_end_ = 0.0;
};

}  // namespace

SimulationTrace simulate(const Economy& e, Mechanism m, const DriverStrategy& strategy, const SimConfig& cfg,
                         const BinLayout* layout, const DriverStrategy* tagged) {
  validate_config(cfg);
  if (!strategy.accept || !strategy.leave || !strategy.rejoin)
    fail(ErrorKind::invalid_argument, "driver strategy is incomplete");
  if (tagged && (!tagged->accept || !tagged->leave || !tagged->rejoin))
    fail(ErrorKind::invalid_argument, "tagged driver strategy is incomplete");
  Runner runner(e, m, strategy, cfg, layout, tagged);
  return runner.run();
}

EmpiricalOutcome empirical_outcome(const SimulationTrace& trace, const Economy& e, const SimConfig& cfg) {
  validate_config(cfg);
  const auto& sum = trace.summary;
  const double mass_time = (cfg.horizon - cfg.warmup) * static_cast<double>(cfg.scale);
  EmpiricalOutcome out;
  EquilibriumOutcome& o = out.outcome;
  o.mechanism = trace.mechanism;
  o.completed_rates.assign(e.size(), 0.0);
  std::uint64_t trips = 0;
  for (std::size_t i = 0; i < e.size() && i < sum.completed.size(); ++i) {
    o.completed_rates[i] = static_cast<double>(sum.completed[i]) / mass_time;
    trips += sum.completed[i];
  }
  o.throughput = static_cast<double>(trips) / mass_time;
  o.queue_length = sum.queue_area / mass_time;
  o.net_revenue = sum.revenue / mass_time - e.platform_cost() * o.queue_length;
  o.payoff_mean = sum.cohort_payoff.mean;
  o.payoff_variance = sum.cohort_payoff.variance();
  if (sum.cohort_wait.count) {
    o.wait_min = sum.cohort_wait.min;
    o.wait_max = sum.cohort_wait.max;
    double total = sum.cohort_wait.mean * static_cast<double>(sum.cohort_wait.count);
    o.wait_avg_joined = sum.cohort_wait.mean;
    o.wait_avg_arrived = total / static_cast<double>(sum.cohort_arrived - sum.cohort_censored);
  }
  out.no_completions = trips == 0;
  out.censored = sum.cohort_censored;
  return out;
}

namespace {

const char* type_name(TraceEvent::Type t) {
  using T = TraceEvent::Type;
  switch (t) {
    case T::rider_arrival: return "rider_arrival";
    case T::driver_arrival: return "driver_arrival";
    case T::join: return "join";
    case T::balk: return "balk";
    case T::offer: return "offer";
    case T::accept: return "accept";
    case T::decline: return "decline";
    case T::rejoin: return "rejoin";
    case T::leave: return "leave";
    case T::cancel: return "cancel";
    case T::lost: return "lost";
  }
  return "unknown";
}

}  // namespace

void write_trace(const SimulationTrace& trace, std::ostream& out) {
  using nlohmann::json;
  for (const auto& ev : trace.events) {
    json j = {{"type", type_name(ev.type)}, {"time", ev.time}};
    if (ev.rider || ev.type == TraceEvent::Type::rider_arrival) j["rider"] = ev.rider;
    if (ev.driver || ev.type == TraceEvent::Type::driver_arrival) j["driver"] = ev.driver;
    if (ev.destination) j["destination"] = ev.destination;
    if (ev.attempt) j["attempt"] = ev.attempt;
    if (ev.type != TraceEvent::Type::rider_arrival && ev.type != TraceEvent::Type::driver_arrival)
      j["position"] = ev.position;
    out << j.dump() << '\n';
  }
  for (const auto& d : trace.drivers) {
    json j = {{"type", "driver"}, {"time", d.arrival}, {"driver", d.id}, {"payoff", d.payoff}};
    if (!std::isnan(d.departure)) j["departure"] = d.departure;
    if (d.destination) j["destination"] = d.destination;
    if (d.tagged) j["tagged"] = true;
    out << j.dump() << '\n';
  }
  for (const auto& s : trace.samples) out << json{{"type", "queue"}, {"time", s.time}, {"length", s.length}}.dump() << '\n';
}

void write_trace(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write trace file " + path);
  write_trace(trace, out);
  if (!out) fail(ErrorKind::io, "failed writing " + path);
}

}  // namespace qdispatch
