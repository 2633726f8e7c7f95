#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "economy.hpp"

namespace qdispatch {

struct TripRecord {
  std::int64_t start_time = 0;  // seconds since 1970-01-01, no time zone
  std::int64_t end_time = 0;
  double duration_minutes = 0.0;
  double fare = 0.0;
  std::string pickup;
  std::string dropoff;
};

struct TripFilter {
  std::string origin;                 // empty: any pickup tract
  std::optional<std::int64_t> from;   // inclusive, on start time
  std::optional<std::int64_t> until;  // exclusive
};

struct ParseReport {
  std::vector<TripRecord> records;
  std::size_t rows = 0;
  std::size_t filtered_out = 0;
  std::size_t missing_dropoff = 0;
  std::size_t malformed = 0;
  std::vector<std::string> problems;  // "line N: reason", first 100 only
};

// Accepts "MM/DD/YYYY hh:mm:ss AM" and "YYYY-MM-DDThh:mm:ss" (space also allowed).
std::int64_t parse_timestamp(const std::string& text);

ParseReport parse_trips(std::istream& in, const TripFilter& filter);
ParseReport parse_trips_file(const std::string& path, const TripFilter& filter);

struct DestinationStats {
  std::string tract;
  std::size_t trip_count = 0;
  double mean_fare = 0.0;
  double mean_duration = 0.0;  // minutes
  double mean_fare_per_minute = 0.0;
};

enum class RateAverage { mean_of_ratios, ratio_of_means };

std::vector<DestinationStats> aggregate(const std::vector<TripRecord>& records,
                                        RateAverage mode = RateAverage::mean_of_ratios);

struct BuildParams {
  double driver_cost = 1.0 / 3.0;  // per minute
  double platform_cost = 1.0 / 3.0;
  double min_relocation = 10.0;  // t0, minutes
  double lambda = 10.0;
  long patience = 1;
  double total_demand_rate = 12.0;
  std::size_t min_trip_count = 30;
};

Economy build_economy(const std::vector<DestinationStats>& stats, const BuildParams& params);

}  // namespace qdispatch
