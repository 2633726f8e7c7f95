#include "economy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"
#include "format.hpp"
#include "numeric.hpp"

namespace qdispatch {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::invalid_argument, what);
}

}  // namespace

Economy validate_economy(const RawEconomy& raw) {
  require(!raw.destinations.empty(), "economy has no destinations");
  require(std::isfinite(raw.lambda) && raw.lambda > 0, "driver arrival rate must be positive");
  require(std::isfinite(raw.driver_cost) && raw.driver_cost > 0, "driver cost must be positive");
  require(std::isfinite(raw.platform_cost) && raw.platform_cost >= 0 &&
              raw.platform_cost <= raw.driver_cost,
          "platform cost must lie in [0, driver cost]");
  require(raw.patience >= 1, "patience must be at least 1");
  for (const auto& d : raw.destinations) {
    require(std::isfinite(d.mu) && d.mu > 0, "demand rates must be positive");
    require(std::isfinite(d.w), "net earnings must be finite");
  }

  std::vector<RawDestination> kept;
  for (const auto& d : raw.destinations)
    if (d.w >= 0) kept.push_back(d);
  require(!kept.empty(), "no destination has nonnegative net earnings");
  std::stable_sort(kept.begin(), kept.end(),
                   [](const RawDestination& a, const RawDestination& b) { return a.w > b.w; });

  Economy e;
  for (const auto& d : kept) {
    if (!e.dests_.empty() && nearly_equal(e.dests_.back().w, d.w)) {
      e.dests_.back().mu += d.mu;
      continue;
    }
    e.dests_.push_back({e.dests_.size() + 1, d.mu, d.w});
  }
  e.lambda_ = raw.lambda;
  e.c_ = raw.driver_cost;
  e.c0_ = raw.platform_cost;
  e.patience_ = raw.patience;

  double partial = 0.0;
  for (const auto& d : e.dests_) {
    partial += d.mu;
    if (nearly_equal(partial, e.lambda_)) e.degenerate_ = true;
  }
  e.total_mu_ = partial;
  e.over_supplied_ = definitely_greater(e.lambda_, e.total_mu_);
  return e;
}

RawEconomy Economy::to_raw() const {
  RawEconomy raw;
  for (const auto& d : dests_) raw.destinations.push_back({d.mu, d.w});
  raw.lambda = lambda_;
  raw.driver_cost = c_;
  raw.platform_cost = c0_;
  raw.patience = patience_;
  return raw;
}

bool operator==(const Economy& a, const Economy& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.dests_[i];
    const auto& y = b.dests_[i];
    if (x.index != y.index || x.mu != y.mu || x.w != y.w) return false;
  }
  return a.lambda_ == b.lambda_ && a.c_ == b.c_ && a.c0_ == b.c0_ && a.patience_ == b.patience_;
}

Economy with_lambda(const Economy& e, double lambda) {
  RawEconomy raw = e.to_raw();
  raw.lambda = lambda;
  return validate_economy(raw);
}

Economy with_patience(const Economy& e, long patience) {
  RawEconomy raw = e.to_raw();
  raw.patience = patience;
  return validate_economy(raw);
}

double net_earnings(const TripStats& stats, double c) {
  require(std::isfinite(stats.duration) && stats.duration > 0, "trip duration must be positive");
  require(std::isfinite(stats.earnings_rate) && stats.earnings_rate >= 0,
          "earnings rate must be nonnegative");
  require(std::isfinite(stats.min_relocation) && stats.min_relocation >= 0,
          "relocation time must be nonnegative");
  require(std::isfinite(c) && c > 0, "cost rate must be positive");
  return stats.duration * (stats.earnings_rate - c) + stats.min_relocation * c;
}

std::size_t max_completed_index(const Economy& e) {
  std::size_t j = 1;
  double before = 0.0;
  for (std::size_t i = 1; i <= e.size(); ++i) {
    if (i == 1 || definitely_greater(e.lambda(), before)) j = i;
    else break;
    before += e.mu(i);
  }
  return j;
}

double fulfilled_rate_at_J(const Economy& e) {
  std::size_t j = max_completed_index(e);
  double before = 0.0;
  for (std::size_t i = 1; i < j; ++i) before += e.mu(i);
  double rest = e.lambda() - before;
  if (nearly_equal(rest, e.mu(j)) || rest > e.mu(j)) return e.mu(j);
  return rest;
}

std::string to_text(const Economy& e) {
  std::ostringstream out;
  out << "lambda = " << format_exact(e.lambda()) << '\n';
  out << "driver_cost = " << format_exact(e.driver_cost()) << '\n';
  out << "platform_cost = " << format_exact(e.platform_cost()) << '\n';
  out << "patience = " << e.patience() << '\n';
  out << '\n' << "destinations\n" << "index,mu,w\n";
  for (const auto& d : e.destinations())
    out << d.index << ',' << format_exact(d.mu) << ',' << format_exact(d.w) << '\n';
  return out.str();
}

Economy parse_economy(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> keys;
  RawEconomy raw;
  enum { header, table_header, table } state = header;
  std::size_t lineno = 0;
  auto where = [&] { return "line " + std::to_string(lineno) + ": "; };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (state == header) {
      if (line == "destinations") {
        state = table_header;
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) fail(ErrorKind::parse, where() + "expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      if (keys.count(key)) fail(ErrorKind::parse, where() + "duplicate key '" + key + "'");
      keys[key] = trim(line.substr(eq + 1));
    } else if (state == table_header) {
      std::string compact;
      for (char ch : line)
        if (ch != ' ' && ch != '\t') compact += ch;
      if (compact != "index,mu,w")
        fail(ErrorKind::parse, where() + "destination table header must be 'index,mu,w'");
      state = table;
    } else {
      std::vector<std::string> cells;
      std::stringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(trim(cell));
      if (cells.size() != 3) fail(ErrorKind::parse, where() + "expected 3 columns");
      try {
        parse_number(cells[0]);
        raw.destinations.push_back({parse_number(cells[1]), parse_number(cells[2])});
      } catch (const Error& err) {
        fail(ErrorKind::parse, where() + err.what());
      }
    }
  }
  if (state != table) fail(ErrorKind::parse, "missing destinations table");

  auto take = [&](const char* key) {
    auto it = keys.find(key);
    if (it == keys.end()) fail(ErrorKind::parse, std::string("missing key '") + key + "'");
    std::string v = it->second;
    keys.erase(it);
    return v;
  };
  raw.lambda = parse_number(take("lambda"));
  raw.driver_cost = parse_number(take("driver_cost"));
  raw.platform_cost = parse_number(take("platform_cost"));
  std::string p = take("patience");
  double pv = parse_number(p);
  if (pv != std::floor(pv) || pv < 1 || pv > 1e12)
    fail(ErrorKind::invalid_argument, "patience must be a positive integer");
  raw.patience = static_cast<long>(pv);
  if (!keys.empty()) fail(ErrorKind::parse, "unknown key '" + keys.begin()->first + "'");
  return validate_economy(raw);
}

Economy load_economy(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open economy file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_economy(buf.str());
}

void save_economy(const Economy& e, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write economy file " + path);
  out << to_text(e);
  if (!out) fail(ErrorKind::io, "failed writing " + path);
}

}  // namespace qdispatch
