#include "qdispatch/qdispatch.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "analyzers.hpp"
#include "economy.hpp"
#include "error.hpp"
#include "format.hpp"
#include "ingest.hpp"
#include "partition.hpp"
#include "simulator.hpp"
#include "strategy.hpp"
#include "sweep.hpp"

struct qd_economy {
  qdispatch::Economy value;
};

struct qd_partition {
  qdispatch::OrderedPartition value;
};

namespace {

using namespace qdispatch;

thread_local std::string last_error;

qd_status code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return QD_ERR_INVALID_ARGUMENT;
    case ErrorKind::parse: return QD_ERR_PARSE;
    case ErrorKind::io: return QD_ERR_IO;
    case ErrorKind::invalid_layout: return QD_ERR_INVALID_LAYOUT;
    case ErrorKind::runtime: return QD_ERR_RUNTIME;
  }
  return QD_ERR_RUNTIME;
}

template <class F>
qd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return QD_OK;
  } catch (const Error& err) {
    last_error = err.what();
    return code_for(err.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QD_ERR_RUNTIME;
  } catch (const std::exception& err) {
    last_error = err.what();
    return QD_ERR_RUNTIME;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorKind::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Mechanism to_mechanism(qd_mechanism m) {
  switch (m) {
    case QD_FIRST_BEST: return Mechanism::first_best;
    case QD_STRICT_FIFO: return Mechanism::strict_fifo;
    case QD_DIRECT_FIFO: return Mechanism::direct_fifo;
    case QD_RANDOM_DISPATCH: return Mechanism::random_dispatch;
    case QD_RANDOMIZED_FIFO: return Mechanism::randomized_fifo;
  }
  fail(ErrorKind::invalid_argument, "unknown mechanism code");
}

qd_mechanism from_mechanism(Mechanism m) { return static_cast<qd_mechanism>(static_cast<int>(m)); }

void copy_outcome(const EquilibriumOutcome& o, qd_outcome* out) {
  out->mechanism = from_mechanism(o.mechanism);
  out->throughput = o.throughput;
  out->net_revenue = o.net_revenue;
  out->queue_length = o.queue_length;
  out->wait_min = o.wait_min;
  out->wait_max = o.wait_max;
  out->wait_avg_arrived = o.wait_avg_arrived;
  out->wait_avg_joined = o.wait_avg_joined;
  out->payoff_mean = o.payoff_mean;
  out->payoff_variance = o.payoff_variance;
}

EquilibriumOutcome to_outcome(const qd_outcome* in) {
  EquilibriumOutcome o;
  o.mechanism = to_mechanism(in->mechanism);
  o.throughput = in->throughput;
  o.net_revenue = in->net_revenue;
  o.queue_length = in->queue_length;
  o.wait_min = in->wait_min;
  o.wait_max = in->wait_max;
  o.wait_avg_arrived = in->wait_avg_arrived;
  o.wait_avg_joined = in->wait_avg_joined;
  o.payoff_mean = in->payoff_mean;
  o.payoff_variance = in->payoff_variance;
  return o;
}

qd_economy* wrap(Economy e) { return new qd_economy{std::move(e)}; }

}  // namespace

extern "C" {

const char* qd_last_error(void) { return last_error.c_str(); }

const char* qd_version(void) { return "0.1.0"; }

void qd_string_free(char* s) { std::free(s); }

const char* qd_mechanism_name(qd_mechanism m) {
  if (m < QD_FIRST_BEST || m > QD_RANDOMIZED_FIFO) return "unknown";
  return mechanism_name(to_mechanism(m));
}

qd_status qd_mechanism_parse(const char* name, qd_mechanism* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    auto m = mechanism_from_name(name);
    if (!m)
      fail(ErrorKind::invalid_argument, std::string("unknown mechanism '") + name +
                                            "' (expected first_best, strict, direct, random or randomized)");
    *out = from_mechanism(*m);
  });
}

qd_status qd_economy_create(const double* mu, const double* w, size_t n, double lambda, double driver_cost,
                            double platform_cost, long patience, qd_economy** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) {
      need(mu, "mu");
      need(w, "w");
    }
    RawEconomy raw;
    for (size_t i = 0; i < n; ++i) raw.destinations.push_back({mu[i], w[i]});
    raw.lambda = lambda;
    raw.driver_cost = driver_cost;
    raw.platform_cost = platform_cost;
    raw.patience = patience;
    *out = wrap(validate_economy(raw));
  });
}

qd_status qd_economy_parse(const char* text, qd_economy** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap(parse_economy(text));
  });
}

qd_status qd_economy_load(const char* path, qd_economy** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(load_economy(path));
  });
}

qd_status qd_economy_save(const qd_economy* e, const char* path) {
  return guarded([&] {
    need(e, "economy");
    need(path, "path");
    save_economy(e->value, path);
  });
}

qd_status qd_economy_to_text(const qd_economy* e, char** out) {
  return guarded([&] {
    need(e, "economy");
    need(out, "out");
    *out = dup_string(to_text(e->value));
  });
}

qd_status qd_economy_with_lambda(const qd_economy* e, double lambda, qd_economy** out) {
  return guarded([&] {
    need(e, "economy");
    need(out, "out");
    *out = wrap(with_lambda(e->value, lambda));
  });
}

qd_status qd_economy_with_patience(const qd_economy* e, long patience, qd_economy** out) {
  return guarded([&] {
    need(e, "economy");
    need(out, "out");
    *out = wrap(with_patience(e->value, patience));
  });
}

void qd_economy_free(qd_economy* e) { delete e; }

size_t qd_economy_size(const qd_economy* e) { return e ? e->value.size() : 0; }
double qd_economy_lambda(const qd_economy* e) { return e ? e->value.lambda() : 0.0; }
long qd_economy_patience(const qd_economy* e) { return e ? e->value.patience() : 0; }
int qd_economy_over_supplied(const qd_economy* e) { return e && e->value.over_supplied() ? 1 : 0; }
int qd_economy_degenerate(const qd_economy* e) { return e && e->value.degenerate() ? 1 : 0; }
size_t qd_economy_max_completed(const qd_economy* e) { return e ? max_completed_index(e->value) : 0; }

qd_status qd_economy_thresholds(const qd_economy* e, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(e, "economy");
    auto n = thresholds(e->value);
    if (count) *count = n.size();
    if (capacity > 0) need(out, "out");
    for (size_t i = 0; i < n.size() && i < capacity; ++i) out[i] = n[i];
  });
}

double qd_economy_qbar(const qd_economy* e) { return e ? qbar(e->value) : 0.0; }

qd_status qd_partition_parse(const char* literal, qd_partition** out) {
  return guarded([&] {
    need(literal, "literal");
    need(out, "out");
    *out = new qd_partition{parse_partition(literal)};
  });
}

qd_status qd_partition_default(const qd_economy* e, qd_partition** out) {
  return guarded([&] {
    need(e, "economy");
    need(out, "out");
    *out = new qd_partition{default_partition(e->value)};
  });
}

qd_status qd_partition_to_text(const qd_partition* p, char** out) {
  return guarded([&] {
    need(p, "partition");
    need(out, "out");
    *out = dup_string(to_string(p->value));
  });
}

size_t qd_partition_size(const qd_partition* p) { return p ? p->value.size() : 0; }

void qd_partition_free(qd_partition* p) { delete p; }

qd_status qd_layout_bins(const qd_economy* e, const qd_partition* p, double* lower, double* upper, size_t capacity,
                         size_t* count) {
  return guarded([&] {
    need(e, "economy");
    need(p, "partition");
    BinLayout layout = bins(e->value, p->value);
    if (count) *count = layout.bins.size();
    if (capacity > 0) {
      need(lower, "lower");
      need(upper, "upper");
    }
    for (size_t k = 0; k < layout.bins.size() && k < capacity; ++k) {
      lower[k] = layout.bins[k].lower;
      upper[k] = layout.bins[k].upper;
    }
  });
}

qd_status qd_layout_check(const qd_economy* e, const qd_partition* p, int* ok, char** report) {
  return guarded([&] {
    need(e, "economy");
    need(p, "partition");
    need(ok, "ok");
    LayoutReport rep;
    try {
      rep = validate_layout(e->value, bins(e->value, p->value));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::invalid_layout) throw;
      rep.checks.push_back({"partition well formed", false, err.what()});
    }
    *ok = rep.ok() ? 1 : 0;
    if (report) *report = dup_string(rep.summary());
  });
}

qd_status qd_analyze(const qd_economy* e, qd_mechanism m, const qd_partition* partition, qd_outcome* out) {
  return guarded([&] {
    need(e, "economy");
    need(out, "out");
    copy_outcome(analyze(e->value, to_mechanism(m), partition ? &partition->value : nullptr), out);
  });
}

qd_status qd_outcome_csv_header(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup_string(outcome_csv_header());
  });
}

qd_status qd_outcome_csv_row(const qd_outcome* o, const qd_economy* e, char** out) {
  return guarded([&] {
    need(o, "outcome");
    need(e, "economy");
    need(out, "out");
    *out = dup_string(outcome_csv_row(to_outcome(o), e->value));
  });
}

void qd_sim_config_default(qd_sim_config* cfg) {
  if (!cfg) return;
  SimConfig d;
  cfg->scale = d.scale;
  cfg->horizon = d.horizon;
  cfg->warmup = d.warmup;
  cfg->offer_latency = d.offer_latency;
  cfg->seed = d.seed;
  cfg->arrivals = QD_ARRIVALS_POISSON;
  cfg->trace_path = nullptr;
}

qd_status qd_simulate(const qd_economy* e, qd_mechanism m, const qd_partition* partition, const qd_sim_config* cfg,
                      qd_outcome* empirical, qd_sim_report* report) {
  return guarded([&] {
    need(e, "economy");
    need(cfg, "config");
    need(empirical, "out");
    Mechanism mech = to_mechanism(m);
    SimConfig sc;
    sc.scale = cfg->scale;
    sc.horizon = cfg->horizon;
    sc.warmup = cfg->warmup;
    sc.offer_latency = cfg->offer_latency;
    sc.seed = cfg->seed;
    sc.arrivals = cfg->arrivals == QD_ARRIVALS_DETERMINISTIC ? ArrivalModel::deterministic : ArrivalModel::poisson;
    sc.record = cfg->trace_path != nullptr;

    BinLayout layout;
    const BinLayout* lp = nullptr;
    if (mech == Mechanism::randomized_fifo) {
      layout = bins(e->value, partition ? partition->value : default_partition(e->value));
      lp = &layout;
    }
    DriverStrategy s = equilibrium_strategy(mech, e->value, lp);
    SimulationTrace trace = simulate(e->value, mech, s, sc, lp);
    if (cfg->trace_path) write_trace(trace, cfg->trace_path);
    EmpiricalOutcome emp = empirical_outcome(trace, e->value, sc);
    copy_outcome(emp.outcome, empirical);
    if (report) {
      report->no_completions = emp.no_completions ? 1 : 0;
      report->censored = emp.censored;
      report->riders = trace.summary.riders;
      report->drivers = trace.summary.drivers;
      report->end_time = trace.summary.end_time;
    }
  });
}

qd_status qd_sweep_csv(const qd_economy* base, qd_sweep_parameter parameter, const double* grid, size_t n,
                       const qd_mechanism* mechanisms, size_t n_mechanisms, const char* partition_literal,
                       char** out) {
  return guarded([&] {
    need(base, "economy");
    need(out, "out");
    if (n > 0) need(grid, "grid");
    if (n_mechanisms > 0) need(mechanisms, "mechanisms");
    SweepSpec spec;
    spec.parameter = parameter == QD_SWEEP_PATIENCE ? SweepParameter::patience : SweepParameter::lambda;
    spec.grid.assign(grid, grid + n);
    for (size_t i = 0; i < n_mechanisms; ++i) spec.mechanisms.push_back(to_mechanism(mechanisms[i]));
    if (partition_literal && *partition_literal) spec.partition = parse_partition(partition_literal);
    *out = dup_string(sweep_csv(run_sweep(base->value, spec)));
  });
}

void qd_ingest_params_default(qd_ingest_params* params) {
  if (!params) return;
  BuildParams d;
  params->origin = nullptr;
  params->from = nullptr;
  params->until = nullptr;
  params->driver_cost = d.driver_cost;
  params->platform_cost = d.platform_cost;
  params->min_relocation = d.min_relocation;
  params->lambda = d.lambda;
  params->patience = d.patience;
  params->total_demand_rate = d.total_demand_rate;
  params->min_trip_count = d.min_trip_count;
  params->ratio_of_means = 0;
}

qd_status qd_ingest(const char* trips_csv, const qd_ingest_params* params, qd_economy** out,
                    qd_ingest_report* report, char** problems) {
  return guarded([&] {
    need(trips_csv, "path");
    need(params, "params");
    need(out, "out");
    if (problems) *problems = nullptr;
    TripFilter filter;
    if (params->origin) filter.origin = params->origin;
    if (params->from && *params->from) filter.from = parse_timestamp(params->from);
    if (params->until && *params->until) filter.until = parse_timestamp(params->until);
    ParseReport rep = parse_trips_file(trips_csv, filter);
    if (report) {
      report->rows = rep.rows;
      report->records = rep.records.size();
      report->filtered_out = rep.filtered_out;
      report->missing_dropoff = rep.missing_dropoff;
      report->malformed = rep.malformed;
      report->tracts = 0;
    }
    if (problems) {
      std::string joined;
      for (const auto& p : rep.problems) joined += p + '\n';
      *problems = dup_string(joined);
    }
    if (rep.records.empty())
      fail(ErrorKind::invalid_argument, "all tracts filtered: no usable trips (" +
                                            std::to_string(rep.missing_dropoff) + " without a dropoff tract, " +
                                            std::to_string(rep.filtered_out) + " outside the filter, " +
                                            std::to_string(rep.malformed) + " malformed)");
    auto stats = aggregate(rep.records, params->ratio_of_means ? RateAverage::ratio_of_means
                                                               : RateAverage::mean_of_ratios);
    if (report) report->tracts = stats.size();
    BuildParams bp;
    bp.driver_cost = params->driver_cost;
    bp.platform_cost = params->platform_cost;
    bp.min_relocation = params->min_relocation;
    bp.lambda = params->lambda;
    bp.patience = params->patience;
    bp.total_demand_rate = params->total_demand_rate;
    bp.min_trip_count = params->min_trip_count;
    *out = wrap(build_economy(stats, bp));
  });
}

}  // extern "C"
