// Acceptance gate: one PASS/FAIL line per criterion, details indented below it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "analyzers.hpp"
#include "economy.hpp"
#include "oracles.hpp"
#include "partition.hpp"
#include "simulator.hpp"
#include "strategy.hpp"
#include "sweep.hpp"

using namespace qdispatch;

namespace {

// Tolerances
constexpr double exact_abs = 1e-9;          // criterion 1
constexpr double formula_abs = 1e-6;        // criterion 2 variances
constexpr double equivalence_rel = 1e-9;    // criterion 3
constexpr double bins_rel = 1e-12;          // criterion 4, singleton bins vs thresholds
constexpr double quadrature_rel = 1e-8;     // criterion 5
constexpr double sim_rel = 0.02;            // criterion 6: T, Q*/k, u*
constexpr double sim_var_rel = 0.10;        // criterion 6: payoff variance
constexpr double sim_mean_floor = 0.02;     // criterion 6: absolute floor for u* as a fraction of w_1
constexpr double sim_var_floor = 0.10;      // criterion 6: absolute floor for the variance as a fraction of w_1
constexpr double curve_abs = 1e-9;          // criterion 8, scaled by w_1

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("fail: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool near_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool near_rel(double a, double b, double rel) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), 1.0});
}

void report(int id, const char* title, const Gate& g, double seconds) {
  std::printf("%s criterion %d: %s (%.1f s)\n", g.ok ? "PASS" : "FAIL", id, title, seconds);
  for (const auto& n : g.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
}

Economy example1() { return validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 5.0, 1.0 / 3, 1.0 / 3, 12}); }
Economy example2() { return validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 8.0, 1.0 / 3, 1.0 / 3, 2}); }

// Balanced consecutive groups of 1..J, larger groups first.
OrderedPartition balanced(std::size_t J, std::size_t m) {
  OrderedPartition p;
  std::size_t next = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t n = J / m + (k < J % m ? 1 : 0);
    std::vector<std::size_t> g;
    for (std::size_t t = 0; t < n; ++t) g.push_back(next++);
    p.groups.push_back(g);
  }
  return p;
}

std::vector<Economy> random_economies(std::size_t n, std::uint64_t seed) {
  oracle::Generator gen(seed);
  std::vector<Economy> out;
  for (std::size_t t = 0; t < n; ++t) out.push_back(gen.economy(8));
  return out;
}

Gate criterion1() {
  Gate g;
  Economy e = example1();
  auto eq = [&](double got, double want, const char* what) {
    g.check(near_abs(got, want, exact_abs), fmt("%s = %.12g, expected %.12g", what, got, want));
  };
  EquilibriumOutcome fb = first_best(e), s = strict_fifo(e), d = direct_fifo(e);
  eq(fb.throughput, 5, "first best T");
  eq(fb.net_revenue, 175, "first best R");
  eq(fb.payoff_mean, 35, "first best u*");
  eq(fb.payoff_variance, 400, "first best variance");
  eq(s.throughput, 1, "strict T");
  eq(s.queue_length, 225, "strict Q*");
  eq(s.net_revenue, 0, "strict R");
  eq(s.payoff_mean, 0, "strict u*");
  eq(d.queue_length, 150, "direct Q*");
  eq(d.throughput, 5, "direct T");
  eq(d.net_revenue, 125, "direct R");
  eq(d.payoff_mean, 25, "direct u*");
  eq(d.payoff_variance, 0, "direct variance");
  std::vector<double> n = thresholds(e);
  g.check(n.size() == 3, "three thresholds");
  if (n.size() == 3) {
    eq(n[0], 0, "n_1");
    eq(n[1], 150, "n_2");
    eq(n[2], 360, "n_3");
  }
  return g;
}

Gate criterion2() {
  Gate g;
  Economy e = example2();
  EquilibriumOutcome r = random_dispatch(e);
  auto eq = [&](double got, double want, double tol, const char* what) {
    g.check(near_abs(got, want, tol), fmt("%s = %.12g, expected %.12g", what, got, want));
  };
  eq(r.queue_length, 360, exact_abs, "random Q*");
  eq(r.throughput, 8, exact_abs, "random T");
  eq(r.net_revenue, 120, exact_abs, "random R");
  eq(r.wait_avg_joined, 45, exact_abs, "random average wait");
  eq(r.payoff_mean, 15, exact_abs, "random u*");
  eq(r.payoff_variance, 496.875, formula_abs, "random variance");
  BinLayout layout = bins(e, parse_partition("{1},{2,3}"));
  g.check(layout.bins.size() == 2, "two bins");
  if (layout.bins.size() == 2) {
    eq(layout.bins[0].lower, 0, exact_abs, "lb1");
    eq(layout.bins[0].upper, 0, exact_abs, "ub1");
    eq(layout.bins[1].lower, 180, exact_abs, "lb2");
    eq(layout.bins[1].upper, 360, exact_abs, "ub2");
  }
  eq(randomized_fifo(e, layout).payoff_variance, 75, formula_abs, "randomized variance");
  return g;
}

Gate criterion3(const std::vector<Economy>& economies) {
  Gate g;
  std::size_t layouts = 0, over = 0;
  for (std::size_t t = 0; t < economies.size(); ++t) {
    const Economy& e = economies[t];
    over += e.over_supplied();
    EquilibriumOutcome fb = first_best(e), d = direct_fifo(e), r = random_dispatch(e);
    std::vector<EquilibriumOutcome> others{r};
    std::size_t J = max_completed_index(e);
    std::size_t cap = std::min<std::size_t>(J, static_cast<std::size_t>(e.patience()));
    for (std::size_t m = 1; m <= cap; ++m) {
      others.push_back(randomized_fifo(e, bins(e, balanced(J, m))));
      ++layouts;
    }
    auto same = [&](const EquilibriumOutcome& o) {
      return near_rel(o.throughput, d.throughput, equivalence_rel) &&
             near_rel(o.net_revenue, d.net_revenue, equivalence_rel) &&
             near_rel(o.queue_length, d.queue_length, equivalence_rel) &&
             near_rel(o.payoff_mean, d.payoff_mean, equivalence_rel);
    };
    for (const auto& o : others) g.check(same(o), fmt("economy %zu: %s differs from direct FIFO", t, mechanism_name(o.mechanism)));
    g.check(near_rel(d.throughput, fb.throughput, equivalence_rel), fmt("economy %zu: T below first best", t));

    RawEconomy raw = e.to_raw();
    raw.platform_cost = 0;
    Economy free = validate_economy(raw);
    double fbr = first_best(free).net_revenue;
    g.check(near_rel(direct_fifo(free).net_revenue, fbr, equivalence_rel) &&
                near_rel(random_dispatch(free).net_revenue, fbr, equivalence_rel) &&
                near_rel(randomized_fifo(free, bins(free, default_partition(free))).net_revenue, fbr, equivalence_rel),
            fmt("economy %zu: with zero platform cost R differs from first best", t));
    if (g.notes.size() > 20) break;
  }
  g.note(fmt("%zu economies (%zu over-supplied), %zu randomized FIFO layouts", economies.size(), over, layouts));
  return g;
}

Gate criterion4(const std::vector<Economy>& economies) {
  Gate g;
  oracle::Generator gen(404);
  std::size_t layouts = 0;
  for (std::size_t t = 0; t < economies.size(); ++t) {
    const Economy& e = economies[t];
    std::size_t J = max_completed_index(e);
    std::size_t cap = std::min<std::size_t>(J, static_cast<std::size_t>(e.patience()));
    for (int rep = 0; rep < 3; ++rep) {
      std::size_t m = static_cast<std::size_t>(gen.integer(1, static_cast<long>(cap)));
      OrderedPartition p = gen.partition(J, m);
      BinLayout layout = bins(e, p);
      ++layouts;
      const auto& b = layout.bins;
      g.check(b.size() == m, fmt("economy %zu: bin count", t));
      g.check(b[0].lower == 0.0, fmt("economy %zu %s: first lower bound %.17g", t, to_string(p).c_str(), b[0].lower));
      for (std::size_t k = 0; k < b.size(); ++k) {
        g.check(b[k].lower <= b[k].upper, fmt("economy %zu %s: bin %zu inverted", t, to_string(p).c_str(), k + 1));
        if (k > 0)
          g.check(b[k - 1].upper < b[k].lower, fmt("economy %zu %s: bins %zu and %zu touch", t, to_string(p).c_str(), k, k + 1));
      }
      LayoutReport rep_ = validate_layout(e, layout);
      g.check(rep_.ok(), fmt("economy %zu %s: %s", t, to_string(p).c_str(), rep_.summary().c_str()));
    }
    OrderedPartition single;
    for (std::size_t i = 1; i <= J; ++i) single.groups.push_back({i});
    BinLayout sl = bins(e, single);
    std::vector<double> n = thresholds(e);
    for (std::size_t i = 0; i < J; ++i)
      g.check(near_rel(sl.bins[i].lower, n[i], bins_rel) && near_rel(sl.bins[i].upper, n[i], bins_rel),
              fmt("economy %zu: singleton bin %zu off its threshold", t, i + 1));
    if (g.notes.size() > 20) break;
  }

  Economy hz = validate_economy({{{1, 100}, {2, 40}, {5, 10}}, 2.0, 1.0, 1.0, 2});
  BinLayout wrong = bins(hz, parse_partition("{1},{2,3}"));
  LayoutReport r = validate_layout(hz, wrong);
  bool hazard = false;
  for (const auto& c : r.checks)
    if (c.name == hazard_check_name && !c.passed) hazard = true;
  double nj = thresholds(hz)[max_completed_index(hz) - 1];
  g.check(near_abs(wrong.bins[1].lower, 90, exact_abs), fmt("hazard lb2 = %.12g, expected 90", wrong.bins[1].lower));
  g.check(near_abs(nj, 60, exact_abs), fmt("hazard equilibrium queue = %.12g, expected 60", nj));
  g.check(hazard, "hazard check did not fire on the mis-partitioned layout");
  g.note(fmt("%zu random layouts; hazard example: lb2 = %g > Q* = %g", layouts, wrong.bins[1].lower, nj));
  return g;
}

Gate criterion5() {
  Gate g;
  oracle::Generator gen(505);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    double eta = std::exp(gen.uniform(std::log(1e-2), std::log(1e2)));
    double zeta = gen.uniform(1e-4, 1 - 1e-4);
    oracle::BinWait q = oracle::bin_wait_by_quadrature(eta, zeta);
    double m = bin_expected_wait(eta, zeta), v = bin_wait_variance(eta, zeta);
    double em = std::fabs(m - q.mean) / q.mean, ev = std::fabs(v - q.variance) / q.variance;
    worst = std::max({worst, em, ev});
    g.check(em <= quadrature_rel, fmt("eta %g zeta %g: expected wait %.15g vs %.15g", eta, zeta, m, q.mean));
    g.check(ev <= quadrature_rel, fmt("eta %g zeta %g: wait variance %.15g vs %.15g", eta, zeta, v, q.variance));
  }
  g.note(fmt("200 pairs, worst relative error %.2e", worst));
  return g;
}

struct SimCase {
  std::string label;
  Economy economy;
  Mechanism mechanism;
  std::optional<OrderedPartition> partition;
};

struct SimResult {
  double throughput = 0, queue = 0, mean = 0, variance = 0;
};

SimResult run_case(const SimCase& c, std::uint64_t seed) {
  SimConfig cfg;
  cfg.scale = 50;
  cfg.horizon = 20000;
  cfg.warmup = 5000;
  cfg.seed = seed;
  std::optional<BinLayout> layout;
  if (c.partition) layout = bins(c.economy, *c.partition);
  const BinLayout* lp = layout ? &*layout : nullptr;
  SimulationTrace t = simulate(c.economy, c.mechanism, equilibrium_strategy(c.mechanism, c.economy, lp), cfg, lp);
  EquilibriumOutcome o = empirical_outcome(t, c.economy, cfg).outcome;
  return {o.throughput, o.queue_length, o.payoff_mean, o.payoff_variance};
}

Gate criterion6() {
  Gate g;
  const int seeds = 10;
  std::vector<SimCase> cases;
  for (auto [name, e] : {std::pair{"example 1", example1()}, std::pair{"example 2", example2()}}) {
    for (Mechanism m : {Mechanism::strict_fifo, Mechanism::direct_fifo, Mechanism::random_dispatch})
      cases.push_back({fmt("%s %s", name, mechanism_name(m)), e, m, std::nullopt});
    OrderedPartition p = default_partition(e);
    cases.push_back({fmt("%s randomized %s", name, to_string(p).c_str()), e, Mechanism::randomized_fifo, p});
  }
  OrderedPartition canonical = parse_partition("{1},{2,3}");
  cases.push_back({"example 2 randomized {1},{2,3}", example2(), Mechanism::randomized_fifo, canonical});

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  struct Job {
    std::size_t c;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cases.size(); ++c)
    for (int s = 1; s <= seeds; ++s) jobs.push_back({c, static_cast<std::uint64_t>(s)});
  std::vector<SimResult> results(jobs.size());
  for (std::size_t first = 0; first < jobs.size(); first += workers) {
    std::vector<std::future<SimResult>> batch;
    std::size_t last = std::min(jobs.size(), first + workers);
    for (std::size_t j = first; j < last; ++j)
      batch.push_back(std::async(std::launch::async, run_case, std::cref(cases[jobs[j].c]), jobs[j].seed));
    for (std::size_t j = first; j < last; ++j) results[j] = batch[j - first].get();
  }

  for (std::size_t c = 0; c < cases.size(); ++c) {
    const SimCase& sc = cases[c];
    SimResult avg;
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (jobs[j].c == c) {
        avg.throughput += results[j].throughput / seeds;
        avg.queue += results[j].queue / seeds;
        avg.mean += results[j].mean / seeds;
        avg.variance += results[j].variance / seeds;
      }
    EquilibriumOutcome a = analyze(sc.economy, sc.mechanism, sc.partition ? &*sc.partition : nullptr);
    double w1 = sc.economy.w(1);
    auto within = [](double got, double want, double rel, double floor) {
      return std::fabs(got - want) <= std::max(rel * std::fabs(want), floor);
    };
    bool okT = within(avg.throughput, a.throughput, sim_rel, 0.0);
    bool okQ = within(avg.queue, a.queue_length, sim_rel, 0.0);
    bool okU = within(avg.mean, a.payoff_mean, sim_rel, sim_mean_floor * w1);
    bool okV = within(avg.variance, a.payoff_variance, sim_var_rel, sim_var_floor * w1);
    auto rel = [](double got, double want) { return want != 0 ? 100 * (got - want) / std::fabs(want) : got - want; };
    g.note(fmt("%-34s T %.4f/%.4f (%+.2f%%)  Q %.2f/%.2f (%+.2f%%)  u %.3f/%.3f (%+.2f%s)  var %.2f/%.2f (%+.2f%s)",
               sc.label.c_str(), avg.throughput, a.throughput, rel(avg.throughput, a.throughput), avg.queue,
               a.queue_length, rel(avg.queue, a.queue_length), avg.mean, a.payoff_mean, rel(avg.mean, a.payoff_mean),
               a.payoff_mean != 0 ? "%" : " abs", avg.variance, a.payoff_variance,
               rel(avg.variance, a.payoff_variance), a.payoff_variance != 0 ? "%" : " abs"));
    g.check(okT, sc.label + ": throughput");
    g.check(okQ, sc.label + ": queue length");
    g.check(okU, sc.label + ": payoff mean");
    g.check(okV, sc.label + ": payoff variance");
  }
  g.note(fmt("scale 50, horizon 20000, warmup 5000, %d seeds, %u worker threads", seeds, workers));
  return g;
}

Economy synthetic10() {
  RawEconomy raw;
  const double mu[] = {0.8, 1.0, 1.2, 1.0, 1.4, 1.1, 1.3, 1.5, 1.2, 1.5};
  const double w[] = {60, 52, 45, 39, 34, 29, 25, 21, 17, 13};
  for (int i = 0; i < 10; ++i) raw.destinations.push_back({mu[i], w[i]});
  raw.lambda = 8.0;
  raw.driver_cost = 1.0 / 3;
  raw.platform_cost = 1.0 / 3;
  raw.patience = 3;
  return validate_economy(raw);
}

const EquilibriumOutcome& pick(const std::vector<SweepRow>& rows, double x, Mechanism m) {
  for (const auto& r : rows)
    if (r.x == x && r.outcome.mechanism == m) return r.outcome;
  std::fprintf(stderr, "missing sweep row\n");
  std::abort();
}

Gate criterion7() {
  Gate g;
  Economy base = synthetic10();
  const double total = base.total_demand();
  std::vector<double> n = thresholds(base);

  // lambda sweep at fixed patience
  SweepSpec ls;
  ls.parameter = SweepParameter::lambda;
  for (double x = 0.5; x <= 20.0 + 1e-9; x += 0.5) ls.grid.push_back(x);
  ls.mechanisms = {Mechanism::strict_fifo, Mechanism::direct_fifo, Mechanism::random_dispatch, Mechanism::randomized_fifo};
  Economy patient = with_patience(base, 60);
  auto rows = run_sweep(patient, ls);
  std::size_t jp = 0;
  double plateau = 0.0;
  for (std::size_t i = 1; i <= base.size(); ++i)
    if (n[i - 1] <= static_cast<double>(patient.patience())) {
      jp = i;
      plateau += base.mu(i);
    }
  g.check(plateau < total, "plateau should sit below total demand for this economy");
  double last_strict = 0.0;
  for (double x : ls.grid) {
    double target = std::min(x, total);
    for (Mechanism m : {Mechanism::direct_fifo, Mechanism::random_dispatch, Mechanism::randomized_fifo})
      g.check(near_rel(pick(rows, x, m).throughput, target, 1e-9),
              fmt("lambda %g: %s T = %g, expected %g", x, mechanism_name(m), pick(rows, x, m).throughput, target));
    double ts = pick(rows, x, Mechanism::strict_fifo).throughput;
    g.check(ts <= target + 1e-9, fmt("lambda %g: strict T above first best", x));
    g.check(ts >= last_strict - 1e-9, fmt("lambda %g: strict T decreased", x));
    last_strict = ts;
    if (x >= plateau) g.check(near_rel(ts, plateau, 1e-9), fmt("lambda %g: strict T = %g, plateau %g", x, ts, plateau));
  }
  g.note(fmt("lambda sweep 0.5..20 at P = 60: strict FIFO plateaus at %g (destinations 1..%zu), total demand %g", plateau,
             jp, total));

  // patience sweep at fixed lambda
  std::size_t J = max_completed_index(base);
  double nj = n[J - 1];
  SweepSpec ps;
  ps.parameter = SweepParameter::patience;
  for (int p = 1; p <= 12; ++p) ps.grid.push_back(p);
  for (double p : {20.0, 50.0, 100.0, 200.0, std::floor(nj), std::ceil(nj), std::ceil(nj) + 1, 2 * std::ceil(nj)})
    if (p > ps.grid.back()) ps.grid.push_back(p);
  ps.mechanisms = {Mechanism::strict_fifo, Mechanism::randomized_fifo};
  auto prow = run_sweep(base, ps);
  double prev_sd = INFINITY, prev_t = 0.0;
  std::string sds;
  for (double p : ps.grid) {
    double sd = std::sqrt(pick(prow, p, Mechanism::randomized_fifo).payoff_variance);
    double ts = pick(prow, p, Mechanism::strict_fifo).throughput;
    double fb = pick(prow, p, Mechanism::first_best).throughput;
    g.check(sd <= prev_sd + 1e-9, fmt("P %g: randomized FIFO sd rose from %g to %g", p, prev_sd, sd));
    if (p >= static_cast<double>(J)) g.check(sd <= 1e-9 * base.w(1), fmt("P %g >= J: sd %g not zero", p, sd));
    else g.check(sd > 0, fmt("P %g < J: sd is zero", p));
    g.check(ts >= prev_t - 1e-12, fmt("P %g: strict T fell", p));
    if (p >= nj) g.check(ts == fb, fmt("P %g >= n_J: strict T %.17g differs from first best %.17g", p, ts, fb));
    else g.check(ts < fb, fmt("P %g < n_J: strict T already at first best", p));
    if (p <= 12) sds += fmt(" %.3g", sd);
    prev_sd = sd;
    prev_t = ts;
  }
  g.note(fmt("patience sweep: J = %zu, n_J = %g; randomized FIFO sd for P = 1..12:%s", J, nj, sds.c_str()));
  return g;
}

Gate criterion8(const std::vector<Economy>& economies) {
  Gate g;
  std::size_t curves = 0;
  oracle::Generator gen(808);
  for (std::size_t t = 0; t < economies.size(); ++t) {
    const Economy& e = economies[t];
    double tol = curve_abs * std::max(1.0, e.w(1));
    auto check_curve = [&](const ContinuationPayoffCurve& c, const char* what) {
      ++curves;
      const auto& bp = c.breakpoints();
      std::vector<double> qs;
      for (std::size_t k = 0; k < bp.size(); ++k) {
        qs.push_back(bp[k].q);
        if (k > 0) qs.push_back(0.5 * (bp[k - 1].q + bp[k].q));
      }
      std::sort(qs.begin(), qs.end());
      double prev = INFINITY;
      for (double q : qs) {
        double v = c(q);
        g.check(v >= -tol, fmt("economy %zu %s: negative payoff %g at %g", t, what, v, q));
        g.check(v <= prev + tol, fmt("economy %zu %s: payoff rises at %g", t, what, q));
        prev = v;
      }
    };
    check_curve(direct_fifo_continuation(e), "direct");
    std::size_t J = max_completed_index(e);
    std::size_t cap = std::min<std::size_t>(J, static_cast<std::size_t>(e.patience()));
    std::vector<OrderedPartition> parts{default_partition(e)};
    parts.push_back(gen.partition(J, static_cast<std::size_t>(gen.integer(1, static_cast<long>(cap)))));
    for (const auto& p : parts) {
      BinLayout layout = bins(e, p);
      ContinuationPayoffCurve c = randomized_fifo_continuation(e, layout);
      check_curve(c, "randomized");
      for (std::size_t k = 0; k < layout.bins.size(); ++k) {
        double floor_w = e.w(p.groups[k].back());
        const Bin& b = layout.bins[k];
        if (b.lower > c.end()) continue;
        double hi = std::min(b.upper, c.end());
        for (double q : {b.lower, 0.5 * (b.lower + hi), hi})
          g.check(std::fabs(c(q) - floor_w) <= tol,
                  fmt("economy %zu %s: payoff %g in bin %zu, group minimum %g", t, to_string(p).c_str(), c(q), k + 1,
                      floor_w));
      }
    }
    if (g.notes.size() > 20) break;
  }
  g.note(fmt("%zu economies, %zu curves", economies.size(), curves));
  return g;
}

template <class F>
void run(int id, const char* title, F f, int& failures) {
  auto t0 = std::chrono::steady_clock::now();
  Gate g;
  try {
    g = f();
  } catch (const std::exception& err) {
    g.ok = false;
    g.note(std::string("exception: ") + err.what());
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, title, g, s);
  if (!g.ok) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
  // --quick skips the long simulator criterion
  bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  int failures = 0;
  auto economies = random_economies(500, 2024);
  auto small = random_economies(200, 2025);
  run(1, "example 1 regression", criterion1, failures);
  run(2, "example 2 regression", criterion2, failures);
  run(3, "mechanism equivalence on 500 random economies", [&] { return criterion3(economies); }, failures);
  run(4, "bin structure on random economies and partitions", [&] { return criterion4(economies); }, failures);
  run(5, "in-bin wait closed forms against quadrature", criterion5, failures);
  if (quick) std::printf("SKIP criterion 6: simulator convergence (--quick)\n");
  else run(6, "simulator convergence to the analyzers", criterion6, failures);
  run(7, "lambda and patience sweeps on a 10-destination economy", criterion7, failures);
  run(8, "continuation payoffs individually rational and envy-free", [&] { return criterion8(small); }, failures);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
