#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dwb/text.hpp"

namespace dwb {

struct Industry {
  int id = 0;
  std::string name;
  std::optional<std::string> remark;
  std::optional<std::string> type_label;
  bool enabled = true;
};

struct IndexDef {
  int id = 0;
  std::string name;
  std::optional<std::string> remark;
  std::optional<std::string> unit_label;
  bool enabled = true;
};

/// Year plus sub-annual period: 0 is annual, 1..4 are seasons.
struct TimeKey {
  int year = 0;
  int period = 0;

  auto operator<=>(const TimeKey&) const = default;

  /// Position on a continuous year axis (2004 Q3 -> 2004.5).
  double as_year() const { return year + (period == 0 ? 0.0 : (period - 1) / 4.0); }
  std::string to_string() const;
};

/// The period after `t`: next year for annual keys, next season otherwise.
TimeKey next_time_key(const TimeKey& t);

/// Parses "2004", "2004Q3", "2004-Q3" or "2004-3".
std::optional<TimeKey> parse_time_key(std::string_view cell);

struct Observation {
  std::int64_t record_id = 0;  // assigned by the store when 0
  int index_id = 0;
  int industry_id = 0;
  double value = 0.0;
  TimeKey time;
};

struct SeriesKey {
  int industry_id = 0;
  int index_id = 0;
  auto operator<=>(const SeriesKey&) const = default;
};

struct SeriesPoint {
  TimeKey time;
  double value = 0.0;
};

struct TimeSeries {
  SeriesKey key;
  std::vector<SeriesPoint> points;  // strictly ascending by time

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  std::vector<double> values() const;
};

struct TimeRange {
  std::optional<TimeKey> from;  // inclusive
  std::optional<TimeKey> to;    // inclusive
  bool contains(const TimeKey& t) const;
};

struct ConversionRule {
  int industry_id = 0;
  int index_id = 0;
  std::size_t source_column = 0;
  std::size_t time_column = 0;
};

/// `industry_id,index_id,source_column,time_column` per line, `#` comments.
std::vector<ConversionRule> parse_rules(std::string_view content);

struct ConversionOptions {
  std::size_t header_rows = 0;
  /// Register placeholder industry/index rows for ids the rules reference
  /// but the store does not know yet.
  bool create_missing = false;
};

struct ConversionResult {
  std::size_t written = 0;
  std::vector<std::string> warnings;
};

/// In-memory registry of industries, indices and observations, persisted as
/// three CSV files. Readers take immutable snapshots; writers serialize on a
/// single mutex and publish a new snapshot when done.
class HistoryStore {
 public:
  struct Snapshot {
    std::map<int, Industry> industries;
    std::map<int, IndexDef> indices;
    std::map<std::pair<SeriesKey, TimeKey>, Observation> observations;
    std::int64_t next_record_id = 1;
  };

  HistoryStore();
  explicit HistoryStore(std::shared_ptr<const Snapshot> initial);
  HistoryStore(const HistoryStore&) = delete;
  HistoryStore& operator=(const HistoryStore&) = delete;

  /// Loads `industries.csv`, `indices.csv`, `observations.csv` from `dir`.
  /// Missing files mean empty tables.
  static HistoryStore open(const std::string& dir);
  void save(const std::string& dir) const;

  std::shared_ptr<const Snapshot> snapshot() const;

  void put_industry(Industry industry);
  void put_index(IndexDef index);

  std::int64_t upsert_observation(Observation obs);

  TimeSeries get_series(int industry_id, int index_id,
                        const std::optional<TimeRange>& range = std::nullopt) const;

  std::vector<Industry> industries() const;
  std::vector<IndexDef> indices() const;
  std::vector<Observation> observations() const;

  ConversionResult convert_spreadsheet(const std::vector<text::CsvRow>& table,
                                       const std::vector<ConversionRule>& rules,
                                       const ConversionOptions& options = {});

 private:
  void publish(std::shared_ptr<Snapshot> next);
  std::shared_ptr<Snapshot> copy_for_write() const;

  mutable std::mutex read_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const Snapshot> current_;
};

std::string industries_csv(const std::vector<Industry>& rows);
std::string indices_csv(const std::vector<IndexDef>& rows);
std::string observations_csv(const std::vector<Observation>& rows);

}  // namespace dwb
