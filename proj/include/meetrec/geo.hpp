#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace meetrec {

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool valid() const;
  bool operator==(const GeoPoint&) const = default;
};

/// Great-circle distance in meters (haversine, mean earth radius 6,371,000 m).
double haversine(const GeoPoint& a, const GeoPoint& b);

inline constexpr double kEarthRadiusM = 6'371'000.0;
/// Meters per degree of latitude (and of longitude at the equator).
inline constexpr double kMetersPerDegree = kEarthRadiusM * 3.14159265358979323846 / 180.0;

// ---- time ----------------------------------------------------------------

/// Parse strict "YYYY-MM-DDTHH:MM:SSZ" into a unix timestamp (UTC seconds).
std::optional<std::int64_t> parse_iso8601(const std::string& s);

/// Inverse of parse_iso8601.
std::string format_iso8601(std::int64_t unix_seconds);

enum class DayClass { Weekday, Weekend };

/// Weekday/weekend of `unix_seconds` shifted by `utc_offset_seconds`.
/// Saturday and Sunday are weekend.
DayClass day_class(std::int64_t unix_seconds, int utc_offset_seconds);

std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

// ---- traces ---------------------------------------------------------------

struct TracePoint {
  std::int64_t timestamp = 0;  // unix seconds (UTC)
  GeoPoint point;

  bool operator==(const TracePoint&) const = default;
};

struct LocationTrace {
  std::string user_id;
  std::vector<TracePoint> points;  // ascending timestamp, unique timestamps

  bool operator==(const LocationTrace&) const = default;
};

struct TraceParseError {
  std::size_t line = 0;  // 1-based line number in the input
  std::string message;
};

struct TraceParseReport {
  std::map<std::string, LocationTrace> traces;  // keyed and ordered by user_id
  std::vector<TraceParseError> errors;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Parse "user_id,timestamp_iso8601,lat,lon" CSV. The header row is required.
/// Malformed rows are reported and skipped, never fatal. Per-user points are
/// sorted by timestamp; rows duplicating a (user, timestamp) keep the last
/// occurrence in file order.
TraceParseReport parse_traces(std::istream& in);

/// Write traces in the same CSV format. Coordinates use shortest
/// round-trippable decimal form, so parse_traces(serialize_traces(t)) == t.
void serialize_traces(std::ostream& out, const std::map<std::string, LocationTrace>& traces);

/// Distance covered in the 48h window ending at `at`: sum of consecutive-point
/// distances where both endpoints fall inside [at - 48h, at].
double mobility_48h(const LocationTrace& trace, std::int64_t at);

// ---- density grid ---------------------------------------------------------

enum class DensityClass { Low, High };

/// Venue-density lookup on a fixed lat/lon grid. Cells are keyed by
/// (floor(lat/cell_size_deg), floor(lon/cell_size_deg)); unknown cells map to
/// default_class.
struct DensityGrid {
  double cell_size_deg = 0.01;
  DensityClass default_class = DensityClass::Low;
  std::map<std::pair<std::int64_t, std::int64_t>, DensityClass> cells;

  DensityClass at(const GeoPoint& p) const;
  std::pair<std::int64_t, std::int64_t> bin(const GeoPoint& p) const;
};

}  // namespace meetrec
