#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "format.hpp"

namespace qdispatch {

void validate_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) fail(ErrorKind::invalid_argument, "sweep grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    double x = spec.grid[i];
    if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, "sweep grid values must be finite");
    if (i > 0 && !(x > spec.grid[i - 1]))
      fail(ErrorKind::invalid_argument, "sweep grid must be strictly increasing");
    if (spec.parameter == SweepParameter::patience && (x < 1 || x != std::floor(x)))
      fail(ErrorKind::invalid_argument, "patience grid values must be positive integers");
    if (spec.parameter == SweepParameter::lambda && !(x > 0))
      fail(ErrorKind::invalid_argument, "lambda grid values must be positive");
  }
}

std::vector<SweepRow> run_sweep(const Economy& base, const SweepSpec& spec) {
  validate_sweep(spec);
  std::vector<Mechanism> mechs{Mechanism::first_best};
  for (Mechanism m : spec.mechanisms)
    if (std::find(mechs.begin(), mechs.end(), m) == mechs.end()) mechs.push_back(m);

  auto point = [&](double x) {
    Economy e = spec.parameter == SweepParameter::lambda ? with_lambda(base, x)
                                                         : with_patience(base, static_cast<long>(x));
    std::vector<SweepRow> rows;
    for (Mechanism m : mechs) {
      const OrderedPartition* p = spec.partition ? &*spec.partition : nullptr;
      rows.push_back({x, e, analyze(e, m, p)});
    }
    return rows;
  };

  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
  for (std::size_t first = 0; first < spec.grid.size(); first += workers) {
    std::vector<std::future<std::vector<SweepRow>>> batch;
    std::size_t last = std::min(spec.grid.size(), first + workers);
    for (std::size_t i = first; i < last; ++i) batch.push_back(std::async(std::launch::async, point, spec.grid[i]));
    for (std::size_t i = first; i < last; ++i) per_point[i] = batch[i - first].get();
  }
  std::vector<SweepRow> rows;
  for (auto& v : per_point)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << outcome_csv_header() << '\n';
  for (const auto& r : rows) out << outcome_csv_row(r.outcome, r.economy) << '\n';
  return out.str();
}

}  // namespace qdispatch
