#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "qdispatch/qdispatch.h"

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(qd_status s) {
  switch (s) {
    case QD_ERR_INVALID_ARGUMENT:
    case QD_ERR_PARSE:
    case QD_ERR_INVALID_LAYOUT: return exit_usage;
    default: return exit_runtime;
  }
}

void check(qd_status s) {
  if (s != QD_OK) throw Failure{exit_code_for(s), qd_last_error()};
}

struct EconomyDeleter {
  void operator()(qd_economy* e) const { qd_economy_free(e); }
};
struct PartitionDeleter {
  void operator()(qd_partition* p) const { qd_partition_free(p); }
};
using EconomyPtr = std::unique_ptr<qd_economy, EconomyDeleter>;
using PartitionPtr = std::unique_ptr<qd_partition, PartitionDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  qd_string_free(s);
  return out;
}

struct Overrides {
  double lambda = 0.0;
  long patience = 0;
};

EconomyPtr load(const std::string& path, const Overrides& ov) {
  qd_economy* raw = nullptr;
  check(qd_economy_load(path.c_str(), &raw));
  EconomyPtr e(raw);
  if (ov.lambda > 0) {
    check(qd_economy_with_lambda(e.get(), ov.lambda, &raw));
    e.reset(raw);
  }
  if (ov.patience > 0) {
    check(qd_economy_with_patience(e.get(), ov.patience, &raw));
    e.reset(raw);
  }
  return e;
}

qd_mechanism mechanism(const std::string& name) {
  qd_mechanism m;
  check(qd_mechanism_parse(name.c_str(), &m));
  return m;
}

PartitionPtr partition_for(const qd_economy* e, qd_mechanism m, const std::string& literal, bool& defaulted) {
  defaulted = false;
  if (m != QD_RANDOMIZED_FIFO) return nullptr;
  qd_partition* p = nullptr;
  if (literal.empty()) {
    check(qd_partition_default(e, &p));
    defaulted = true;
  } else {
    check(qd_partition_parse(literal.c_str(), &p));
  }
  return PartitionPtr(p);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{exit_runtime, "cannot write " + path};
  out << text;
  if (!out) throw Failure{exit_runtime, "failed writing " + path};
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", std::fabs(v) < 1e-10 ? 0.0 : v);
  return buf;
}

void describe(std::ostream& out, const qd_outcome& o) {
  out << "  throughput        " << fmt(o.throughput) << '\n'
      << "  net revenue       " << fmt(o.net_revenue) << '\n'
      << "  queue length      " << fmt(o.queue_length) << '\n'
      << "  wait min / max    " << fmt(o.wait_min) << " / " << fmt(o.wait_max) << '\n'
      << "  wait avg (joined) " << fmt(o.wait_avg_joined) << '\n'
      << "  payoff mean       " << fmt(o.payoff_mean) << '\n'
      << "  payoff variance   " << fmt(o.payoff_variance) << '\n';
}

// ---- analyze

struct AnalyzeArgs {
  std::string economy;
  std::vector<std::string> mechanisms{"direct"};
  std::string partition;
  std::string out;
  Overrides ov;
  bool quiet = false;
};

int run_analyze(const AnalyzeArgs& a) {
  EconomyPtr e = load(a.economy, a.ov);
  std::vector<std::string> names = a.mechanisms;
  if (names.size() == 1 && names[0] == "all") names = {"first_best", "strict", "direct", "random", "randomized"};

  std::ostringstream csv;
  csv << take([] {
    char* h = nullptr;
    check(qd_outcome_csv_header(&h));
    return h;
  }()) << '\n';
  for (const auto& name : names) {
    qd_mechanism m = mechanism(name);
    bool defaulted = false;
    PartitionPtr p = partition_for(e.get(), m, a.partition, defaulted);
    qd_outcome o;
    check(qd_analyze(e.get(), m, p.get(), &o));
    char* row = nullptr;
    check(qd_outcome_csv_row(&o, e.get(), &row));
    csv << take(row) << '\n';
    if (!a.quiet) {
      std::cerr << qd_mechanism_name(m);
      if (p) {
        char* text = nullptr;
        check(qd_partition_to_text(p.get(), &text));
        std::cerr << " with partition " << take(text) << (defaulted ? " (default)" : "");
      }
      std::cerr << '\n';
      describe(std::cerr, o);
    }
  }
  write_output(a.out, csv.str());
  return 0;
}

// ---- sweep

struct SweepArgs {
  std::string economy;
  std::string param = "lambda";
  std::vector<double> grid;
  std::string range;
  std::vector<std::string> mechanisms{"strict", "direct", "random", "randomized"};
  std::string partition;
  std::string out;
};

std::vector<double> expand_range(const std::string& spec) {
  // start:stop:step, stop inclusive
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{exit_usage, "bad --range '" + spec + "', expected start:stop:step"};
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    throw Failure{exit_usage, "bad --range '" + spec + "', expected start:stop:step with step > 0"};
  std::vector<double> grid;
  auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return grid;
}

int run_sweep(const SweepArgs& a) {
  EconomyPtr e = load(a.economy, {});
  std::vector<double> grid = a.grid;
  if (!a.range.empty()) {
    if (!grid.empty()) throw Failure{exit_usage, "use either --grid or --range, not both"};
    grid = expand_range(a.range);
  }
  qd_sweep_parameter param;
  if (a.param == "lambda")
    param = QD_SWEEP_LAMBDA;
  else if (a.param == "patience")
    param = QD_SWEEP_PATIENCE;
  else
    throw Failure{exit_usage, "--param must be lambda or patience"};
  std::vector<qd_mechanism> mechs;
  for (const auto& name : a.mechanisms) mechs.push_back(mechanism(name));
  char* csv = nullptr;
  check(qd_sweep_csv(e.get(), param, grid.data(), grid.size(), mechs.data(), mechs.size(),
                     a.partition.empty() ? nullptr : a.partition.c_str(), &csv));
  write_output(a.out, take(csv));
  return 0;
}

// ---- simulate

struct SimulateArgs {
  std::string economy;
  std::string mechanism = "direct";
  std::string partition;
  std::string out;
  std::string trace;
  std::string arrivals = "poisson";
  Overrides ov;
  qd_sim_config cfg{};
};

std::string rel_error(double emp, double ana) {
  if (std::isinf(ana) || std::isinf(emp)) return "";
  if (ana == 0.0) return "abs " + fmt(emp - ana);
  return fmt(100.0 * (emp - ana) / std::fabs(ana)) + "%";
}

int run_simulate(SimulateArgs a) {
  EconomyPtr e = load(a.economy, a.ov);
  qd_mechanism m = mechanism(a.mechanism);
  if (m == QD_FIRST_BEST) throw Failure{exit_usage, "first_best has no queue to simulate"};
  if (a.arrivals == "poisson")
    a.cfg.arrivals = QD_ARRIVALS_POISSON;
  else if (a.arrivals == "deterministic")
    a.cfg.arrivals = QD_ARRIVALS_DETERMINISTIC;
  else
    throw Failure{exit_usage, "--arrivals must be poisson or deterministic"};
  a.cfg.trace_path = a.trace.empty() ? nullptr : a.trace.c_str();

  bool defaulted = false;
  PartitionPtr p = partition_for(e.get(), m, a.partition, defaulted);
  if (p) {
    char* text = nullptr;
    check(qd_partition_to_text(p.get(), &text));
    std::cerr << "partition " << take(text) << (defaulted ? " (default partition)" : "") << '\n';
  }

  qd_outcome ana, emp;
  qd_sim_report rep{};
  check(qd_analyze(e.get(), m, p.get(), &ana));
  check(qd_simulate(e.get(), m, p.get(), &a.cfg, &emp, &rep));
  if (rep.no_completions) std::cerr << "warning: no trips completed after warmup\n";
  if (rep.censored) std::cerr << "warning: " << rep.censored << " drivers still queued at the end of the run\n";

  char* header = nullptr;
  check(qd_outcome_csv_header(&header));
  std::ostringstream csv;
  csv << take(header) << ",seed,scale,horizon\n";
  char* row = nullptr;
  check(qd_outcome_csv_row(&ana, e.get(), &row));
  csv << take(row) << ",,,\n";
  check(qd_outcome_csv_row(&emp, e.get(), &row));
  csv << take(row) << ',' << a.cfg.seed << ',' << a.cfg.scale << ',' << fmt(a.cfg.horizon) << '\n';
  write_output(a.out, csv.str());

  struct Line {
    const char* name;
    double ana, emp;
  } lines[] = {{"throughput", ana.throughput, emp.throughput},
               {"net revenue", ana.net_revenue, emp.net_revenue},
               {"queue length", ana.queue_length, emp.queue_length},
               {"wait avg (joined)", ana.wait_avg_joined, emp.wait_avg_joined},
               {"payoff mean", ana.payoff_mean, emp.payoff_mean},
               {"payoff variance", ana.payoff_variance, emp.payoff_variance}};
  std::fprintf(stderr, "%-18s %14s %14s %12s\n", "metric", "analyzer", "simulated", "error");
  for (const auto& l : lines)
    std::fprintf(stderr, "%-18s %14s %14s %12s\n", l.name, fmt(l.ana).c_str(), fmt(l.emp).c_str(),
                 rel_error(l.emp, l.ana).c_str());
  return 0;
}

// ---- ingest

struct IngestArgs {
  std::string trips;
  std::string out;
  std::string origin, from, until;
  bool ratio_of_means = false;
  qd_ingest_params params{};
};

int run_ingest(IngestArgs a) {
  a.params.origin = a.origin.c_str();
  a.params.from = a.from.c_str();
  a.params.until = a.until.c_str();
  a.params.ratio_of_means = a.ratio_of_means ? 1 : 0;
  qd_economy* raw = nullptr;
  qd_ingest_report rep{};
  char* problems = nullptr;
  qd_status s = qd_ingest(a.trips.c_str(), &a.params, &raw, &rep, &problems);
  std::string lines = take(problems);
  if (!lines.empty()) std::cerr << lines;
  check(s);
  EconomyPtr e(raw);
  std::cerr << rep.rows << " rows, " << rep.records << " trips kept, " << rep.filtered_out << " filtered, "
            << rep.missing_dropoff << " without dropoff tract, " << rep.malformed << " malformed; " << rep.tracts
            << " tracts, " << qd_economy_size(e.get()) << " destinations\n";
  char* text = nullptr;
  check(qd_economy_to_text(e.get(), &text));
  write_output(a.out, take(text));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium analysis and simulation of queue dispatch mechanisms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qd_version()));

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Closed-form steady state of a mechanism");
  an->add_option("economy", analyze.economy, "Economy file")->required();
  an->add_option("--mechanism", analyze.mechanisms, "first_best, strict, direct, random, randomized or all")
      ->delimiter(',');
  an->add_option("--partition", analyze.partition, "Ordered partition for randomized, e.g. {1},{2,3}");
  an->add_option("--lambda", analyze.ov.lambda, "Override the driver arrival rate");
  an->add_option("--patience", analyze.ov.patience, "Override rider patience");
  an->add_option("--out", analyze.out, "CSV output path (default stdout)");
  an->add_flag("--quiet", analyze.quiet, "Skip the readable report on stderr");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Evaluate mechanisms over a grid of lambda or patience");
  sw->add_option("economy", sweep.economy, "Economy template file")->required();
  sw->add_option("--param", sweep.param, "lambda or patience");
  sw->add_option("--grid", sweep.grid, "Comma-separated grid values")->delimiter(',');
  sw->add_option("--range", sweep.range, "start:stop:step (stop inclusive)");
  sw->add_option("--mechanism", sweep.mechanisms, "Mechanisms to include")->delimiter(',');
  sw->add_option("--partition", sweep.partition, "Fixed partition for randomized (default: rebuilt per point)");
  sw->add_option("--out", sweep.out, "CSV output path (default stdout)");

  SimulateArgs sim;
  qd_sim_config_default(&sim.cfg);
  auto* si = app.add_subcommand("simulate", "Monte Carlo run against the analyzer");
  si->add_option("economy", sim.economy, "Economy file")->required();
  si->add_option("--mechanism", sim.mechanism, "strict, direct, random or randomized");
  si->add_option("--partition", sim.partition, "Ordered partition for randomized");
  si->add_option("--lambda", sim.ov.lambda, "Override the driver arrival rate");
  si->add_option("--patience", sim.ov.patience, "Override rider patience");
  si->add_option("--seed", sim.cfg.seed, "Random seed");
  si->add_option("--scale", sim.cfg.scale, "Drivers per unit mass")->check(CLI::PositiveNumber);
  si->add_option("--horizon", sim.cfg.horizon, "Simulated time");
  si->add_option("--warmup", sim.cfg.warmup, "Time excluded from metrics");
  si->add_option("--latency", sim.cfg.offer_latency, "Time per dispatch attempt");
  si->add_option("--arrivals", sim.arrivals, "poisson or deterministic");
  si->add_option("--trace", sim.trace, "Write an event trace (NDJSON)");
  si->add_option("--out", sim.out, "Summary CSV path (default stdout)");

  IngestArgs ing;
  qd_ingest_params_default(&ing.params);
  auto* in = app.add_subcommand("ingest", "Build an economy from trip records");
  in->add_option("trips", ing.trips, "Trip CSV file")->required();
  in->add_option("--out", ing.out, "Economy output path (default stdout)");
  in->add_option("--origin", ing.origin, "Pickup census tract to keep");
  in->add_option("--from", ing.from, "Earliest trip start (inclusive)");
  in->add_option("--until", ing.until, "Latest trip start (exclusive)");
  in->add_option("--driver-cost", ing.params.driver_cost, "Driver waiting cost per minute");
  in->add_option("--platform-cost", ing.params.platform_cost, "Platform cost per unit queue mass");
  in->add_option("--t0", ing.params.min_relocation, "Minimum relocation time in minutes");
  in->add_option("--lambda", ing.params.lambda, "Driver arrival rate");
  in->add_option("--patience", ing.params.patience, "Rider patience");
  in->add_option("--total-demand", ing.params.total_demand_rate, "Total rider arrival rate");
  in->add_option("--min-trips", ing.params.min_trip_count, "Drop tracts with fewer trips");
  in->add_flag("--ratio-of-means", ing.ratio_of_means, "Fare per minute as total fare over total minutes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*an) return run_analyze(analyze);
    if (*sw) return run_sweep(sweep);
    if (*si) return run_simulate(sim);
    if (*in) return run_ingest(ing);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return exit_usage;
}
