#include "ingest.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"
#include "format.hpp"

namespace qdispatch {

namespace {

const char* const col_start = "Trip Start Timestamp";
const char* const col_end = "Trip End Timestamp";
const char* const col_seconds = "Trip Seconds";
const char* const col_fare = "Fare";
const char* const col_pickup = "Pickup Census Tract";
const char* const col_dropoff = "Dropoff Census Tract";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quote");
  cells.push_back(cur);
  return cells;
}

int to_int(const std::string& s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw std::runtime_error("truncated timestamp");
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::runtime_error("bad digit in timestamp");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

std::int64_t to_epoch(int y, int mo, int d, int h, int mi, int se) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 60) throw std::runtime_error("invalid date or time");
  return sys_days{ymd}.time_since_epoch().count() * 86400LL + h * 3600LL + mi * 60LL + se;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& raw) {
  std::string s = trim(raw);
  try {
    if (s.size() >= 19 && s[4] == '-') {
      // 2019-01-01T00:15:00[.000]
      if (s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
        throw std::runtime_error("bad ISO timestamp");
      return to_epoch(to_int(s, 0, 4), to_int(s, 5, 2), to_int(s, 8, 2), to_int(s, 11, 2), to_int(s, 14, 2),
                      to_int(s, 17, 2));
    }
    if (s.size() == 22 && s[2] == '/' && s[5] == '/' && s[10] == ' ' && s[13] == ':' && s[16] == ':' &&
        s[19] == ' ') {
      // 01/01/2019 12:15:00 AM
      int h = to_int(s, 11, 2);
      std::string ampm = s.substr(20, 2);
      if (h < 1 || h > 12 || (ampm != "AM" && ampm != "PM")) throw std::runtime_error("bad 12-hour clock");
      h = h % 12 + (ampm == "PM" ? 12 : 0);
      return to_epoch(to_int(s, 6, 4), to_int(s, 0, 2), to_int(s, 3, 2), h, to_int(s, 14, 2), to_int(s, 17, 2));
    }
  } catch (const std::runtime_error& err) {
    fail(ErrorKind::parse, "timestamp '" + raw + "': " + err.what());
  }
  fail(ErrorKind::parse, "unrecognized timestamp '" + raw + "'");
}

ParseReport parse_trips(std::istream& in, const TripFilter& filter) {
  ParseReport rep;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::parse, "trip file is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::map<std::string, std::size_t> col;
  auto header = split_csv(line);
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* need : {col_start, col_end, col_fare, col_pickup, col_dropoff})
    if (!col.count(need)) fail(ErrorKind::parse, std::string("trip file header lacks column '") + need + "'");
  const std::size_t i_start = col[col_start], i_end = col[col_end], i_fare = col[col_fare],
                    i_pick = col[col_pickup], i_drop = col[col_dropoff];
  const bool has_seconds = col.count(col_seconds) > 0;
  const std::size_t i_sec = has_seconds ? col[col_seconds] : 0;

  std::size_t lineno = 1;
  auto problem = [&](const std::string& why) {
    ++rep.malformed;
    if (rep.problems.size() < 100) rep.problems.push_back("line " + std::to_string(lineno) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++rep.rows;
    std::vector<std::string> cells;
    try {
      cells = split_csv(line);
    } catch (const std::runtime_error& err) {
      problem(err.what());
      continue;
    }
    if (cells.size() != header.size()) {
      problem("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()));
      continue;
    }
    TripRecord r;
    r.pickup = trim(cells[i_pick]);
    r.dropoff = trim(cells[i_drop]);
    try {
      r.start_time = parse_timestamp(cells[i_start]);
      r.end_time = parse_timestamp(cells[i_end]);
      r.fare = parse_number(cells[i_fare]);
    } catch (const Error& err) {
      problem(err.what());
      continue;
    }
    if (!filter.origin.empty() && r.pickup != filter.origin) {
      ++rep.filtered_out;
      continue;
    }
    if ((filter.from && r.start_time < *filter.from) || (filter.until && r.start_time >= *filter.until)) {
      ++rep.filtered_out;
      continue;
    }
    if (r.end_time < r.start_time) {
      problem("trip ends before it starts");
      continue;
    }
    if (!std::isfinite(r.fare) || r.fare < 0) {
      problem("fare must be a nonnegative number");
      continue;
    }
    double seconds = static_cast<double>(r.end_time - r.start_time);
    if (has_seconds && !trim(cells[i_sec]).empty()) {
      try {
        double s = parse_number(cells[i_sec]);
        if (s > 0) seconds = s;
      } catch (const Error& err) {
        problem(err.what());
        continue;
      }
    }
    if (!(seconds > 0)) {
      problem("trip has no duration");
      continue;
    }
    r.duration_minutes = seconds / 60.0;
    if (r.dropoff.empty()) {
      ++rep.missing_dropoff;
      continue;
    }
    rep.records.push_back(std::move(r));
  }
  return rep;
}

ParseReport parse_trips_file(const std::string& path, const TripFilter& filter) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open trip file " + path);
  return parse_trips(in, filter);
}

std::vector<DestinationStats> aggregate(const std::vector<TripRecord>& records, RateAverage mode) {
  if (records.empty()) fail(ErrorKind::invalid_argument, "no trip records to aggregate");
  struct Acc {
    std::size_t n = 0;
    double fare = 0.0, minutes = 0.0, rate = 0.0;
  };
  std::map<std::string, Acc> by_tract;
  for (const auto& r : records) {
    auto& a = by_tract[r.dropoff];
    ++a.n;
    a.fare += r.fare;
    a.minutes += r.duration_minutes;
    a.rate += r.fare / r.duration_minutes;
  }
  std::vector<DestinationStats> out;
  for (const auto& [tract, a] : by_tract) {
    DestinationStats s;
    s.tract = tract;
    s.trip_count = a.n;
    double n = static_cast<double>(a.n);
    s.mean_fare = a.fare / n;
    s.mean_duration = a.minutes / n;
    s.mean_fare_per_minute = mode == RateAverage::mean_of_ratios ? a.rate / n : a.fare / a.minutes;
    out.push_back(s);
  }
  return out;
}

Economy build_economy(const std::vector<DestinationStats>& stats, const BuildParams& params) {
  if (stats.empty()) fail(ErrorKind::invalid_argument, "no destination statistics");
  if (!(params.total_demand_rate > 0)) fail(ErrorKind::invalid_argument, "total demand rate must be positive");
  std::size_t total = 0;
  for (const auto& s : stats)
    if (s.trip_count >= params.min_trip_count) total += s.trip_count;
  if (total == 0) fail(ErrorKind::invalid_argument, "all tracts filtered out");

  RawEconomy raw;
  raw.lambda = params.lambda;
  raw.driver_cost = params.driver_cost;
  raw.platform_cost = params.platform_cost;
  raw.patience = params.patience;
  for (const auto& s : stats) {
    if (s.trip_count < params.min_trip_count) continue;
    double mu = params.total_demand_rate * static_cast<double>(s.trip_count) / static_cast<double>(total);
    double w = net_earnings({s.mean_duration, s.mean_fare_per_minute, params.min_relocation}, params.driver_cost);
    raw.destinations.push_back({mu, w});
  }
  return validate_economy(raw);
}

}  // namespace qdispatch
