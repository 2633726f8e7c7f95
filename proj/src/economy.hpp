#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdispatch {

struct Destination {
  std::size_t index = 0;  // 1-based rank by earnings
  double mu = 0.0;        // rider arrival rate
  double w = 0.0;         // net earnings of one trip
};

struct RawDestination {
  double mu = 0.0;
  double w = 0.0;
};

struct RawEconomy {
  std::vector<RawDestination> destinations;
  double lambda = 0.0;
  double driver_cost = 0.0;
  double platform_cost = 0.0;
  long patience = 1;
};

struct TripStats {
  double duration = 0.0;       // t_i
  double earnings_rate = 0.0;  // p_i
  double min_relocation = 0.0; // t0
};

class Economy {
public:
  const std::vector<Destination>& destinations() const { return dests_; }
  std::size_t size() const { return dests_.size(); }
  // 1-based accessors
  double mu(std::size_t i) const { return dests_[i - 1].mu; }
  double w(std::size_t i) const { return dests_[i - 1].w; }

  double lambda() const { return lambda_; }
  double driver_cost() const { return c_; }
  double platform_cost() const { return c0_; }
  long patience() const { return patience_; }

  double total_demand() const { return total_mu_; }
  bool over_supplied() const { return over_supplied_; }
  // lambda coincides with a partial sum of demand rates
  bool degenerate() const { return degenerate_; }

  RawEconomy to_raw() const;

  friend Economy validate_economy(const RawEconomy& raw);
  friend bool operator==(const Economy& a, const Economy& b);

private:
  std::vector<Destination> dests_;
  double lambda_ = 0.0;
  double c_ = 0.0;
  double c0_ = 0.0;
  long patience_ = 1;
  double total_mu_ = 0.0;
  bool over_supplied_ = false;
  bool degenerate_ = false;
};

bool operator==(const Economy& a, const Economy& b);

Economy validate_economy(const RawEconomy& raw);

Economy with_lambda(const Economy& e, double lambda);
Economy with_patience(const Economy& e, long patience);

double net_earnings(const TripStats& stats, double c);

// J, 1-based
std::size_t max_completed_index(const Economy& e);
// mu tilde of J
double fulfilled_rate_at_J(const Economy& e);

// Text format: "key = value" lines followed by a destinations table.
std::string to_text(const Economy& e);
Economy parse_economy(const std::string& text);
Economy load_economy(const std::string& path);
void save_economy(const Economy& e, const std::string& path);

}  // namespace qdispatch
