#include "meetrec/geo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace meetrec {
namespace {

constexpr double kPi = 3.14159265358979323846;

double radians(double deg) { return deg * kPi / 180.0; }

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = radians(a.lat);
  const double phi2 = radians(b.lat);
  const double dphi = radians(b.lat - a.lat);
  const double dlam = radians(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

// Howard Hinnant's algorithm; days since 1970-01-01 in the proleptic Gregorian
// calendar.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<int>(yy + (m <= 2));
}

std::optional<std::int64_t> parse_iso8601(const std::string& s) {
  // YYYY-MM-DDTHH:MM:SSZ, exactly 20 chars.
  if (s.size() != 20) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z')
    return std::nullopt;
  int year, month, day, hour, minute, second;
  if (!parse_fixed_uint(s, 0, 4, year) || !parse_fixed_uint(s, 5, 2, month) ||
      !parse_fixed_uint(s, 8, 2, day) || !parse_fixed_uint(s, 11, 2, hour) ||
      !parse_fixed_uint(s, 14, 2, minute) || !parse_fixed_uint(s, 17, 2, second))
    return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || hour > 23 || minute > 59 || second > 59)
    return std::nullopt;
  static constexpr int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = mdays[month - 1];
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) dim = 29;
  if (day > dim) return std::nullopt;
  return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
         hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(std::int64_t t) {
  const std::int64_t days = floor_div(t, 86400);
  std::int64_t rem = t - days * 86400;
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year, month, day,
                static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

DayClass day_class(std::int64_t t, int utc_offset_seconds) {
  const std::int64_t days = floor_div(t + utc_offset_seconds, 86400);
  // 1970-01-01 was a Thursday; weekday 0 = Monday.
  const int wd = static_cast<int>(((days + 3) % 7 + 7) % 7);
  return wd >= 5 ? DayClass::Weekend : DayClass::Weekday;
}

TraceParseReport parse_traces(std::istream& in) {
  TraceParseReport report;
  std::string line;
  std::size_t line_no = 0;

  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  if (!std::getline(in, line)) {
    report.errors.push_back({1, "missing header row"});
    return report;
  }
  ++line_no;
  strip_cr(line);
  if (line != "user_id,timestamp_iso8601,lat,lon") {
    report.errors.push_back({1, "unexpected header: " + line});
    return report;
  }

  struct Row {
    std::int64_t timestamp;
    GeoPoint point;
    std::size_t order;  // file order, for duplicate-timestamp resolution
  };
  std::map<std::string, std::vector<Row>> rows;
  std::size_t order = 0;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;

    std::string_view v(line);
    std::array<std::string_view, 4> field;
    std::size_t n_fields = 0;
    while (n_fields < 4) {
      const auto comma = v.find(',');
      field[n_fields++] = v.substr(0, comma);
      if (comma == std::string_view::npos) break;
      v.remove_prefix(comma + 1);
    }
    const bool trailing = n_fields == 4 && field[3].find(',') != std::string_view::npos;
    if (n_fields != 4 || trailing) {
      report.errors.push_back({line_no, "expected 4 fields"});
      ++report.rejected;
      continue;
    }
    if (field[0].empty()) {
      report.errors.push_back({line_no, "empty user_id"});
      ++report.rejected;
      continue;
    }
    const auto ts = parse_iso8601(std::string(field[1]));
    if (!ts) {
      report.errors.push_back({line_no, "bad timestamp: " + std::string(field[1])});
      ++report.rejected;
      continue;
    }
    GeoPoint p;
    if (!parse_double(field[2], p.lat) || !parse_double(field[3], p.lon) || !p.valid()) {
      report.errors.push_back({line_no, "bad coordinates"});
      ++report.rejected;
      continue;
    }
    rows[std::string(field[0])].push_back({*ts, p, order++});
    ++report.accepted;
  }

  for (auto& [user, user_rows] : rows) {
    std::sort(user_rows.begin(), user_rows.end(), [](const Row& a, const Row& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.order < b.order;
    });
    LocationTrace trace;
    trace.user_id = user;
    trace.points.reserve(user_rows.size());
    for (std::size_t i = 0; i < user_rows.size(); ++i) {
      // Last row in file order wins among equal timestamps.
      if (i + 1 < user_rows.size() && user_rows[i + 1].timestamp == user_rows[i].timestamp)
        continue;
      trace.points.push_back({user_rows[i].timestamp, user_rows[i].point});
    }
    report.traces.emplace(user, std::move(trace));
  }
  return report;
}

void serialize_traces(std::ostream& out, const std::map<std::string, LocationTrace>& traces) {
  out << "user_id,timestamp_iso8601,lat,lon\n";
  for (const auto& [user, trace] : traces) {
    for (const auto& tp : trace.points) {
      out << user << ',' << format_iso8601(tp.timestamp) << ',' << format_double(tp.point.lat)
          << ',' << format_double(tp.point.lon) << '\n';
    }
  }
}

double mobility_48h(const LocationTrace& trace, std::int64_t at) {
  const std::int64_t lo = at - 48 * 3600;
  double total = 0.0;
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    const auto& a = trace.points[i - 1];
    const auto& b = trace.points[i];
    if (a.timestamp >= lo && b.timestamp <= at)
      total += haversine(a.point, b.point);
  }
  return total;
}

std::pair<std::int64_t, std::int64_t> DensityGrid::bin(const GeoPoint& p) const {
  return {static_cast<std::int64_t>(std::floor(p.lat / cell_size_deg)),
          static_cast<std::int64_t>(std::floor(p.lon / cell_size_deg))};
}

DensityClass DensityGrid::at(const GeoPoint& p) const {
  const auto it = cells.find(bin(p));
  return it == cells.end() ? default_class : it->second;
}

}  // namespace meetrec
