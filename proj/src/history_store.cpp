#include "dwb/history_store.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "dwb/error.hpp"

namespace dwb {

namespace {

const text::CsvRow kIndustryHeader = {"Industry_Id", "Industry_Name", "Industry_Remark",
                                      "Industry_Type", "Industry_Enabled"};
const text::CsvRow kIndexHeader = {"Index_Id", "Index_Name", "Index_Remark", "Index_Unit",
                                   "Index_Enabled"};
const text::CsvRow kObservationHeader = {"Idata_Id",   "Index_Id",   "Industry_Id",
                                         "Idata_Data", "Idata_Year", "Idata_Period"};

std::optional<std::string> optional_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

int require_int(const std::string& cell, const std::string& file, std::size_t line) {
  auto v = text::parse_int(cell);
  if (!v) {
    throw Error(ErrorCode::BadStoreFile,
                file + ":" + std::to_string(line) + ": expected integer, got '" + cell + "'");
  }
  return static_cast<int>(*v);
}

std::vector<text::CsvRow> load_table(const std::filesystem::path& path,
                                     const text::CsvRow& header) {
  if (!std::filesystem::exists(path)) return {};
  auto rows = text::parse_csv(text::read_file(path.string()));
  if (rows.empty()) return {};
  if (rows.front().size() < header.size() - (header.back() == "Idata_Period" ? 1 : 0)) {
    throw Error(ErrorCode::BadStoreFile, path.string() + ": header has too few columns");
  }
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Header row is line 1.
    if (rows[i].size() == 1 && rows[i][0].empty()) continue;
    if (rows[i].size() + 1 < header.size()) {
      throw Error(ErrorCode::BadStoreFile,
                  path.string() + ":" + std::to_string(i + 2) + ": too few columns");
    }
  }
  return rows;
}

void check_registry_row(int id, const std::string& name, const char* what) {
  if (id < 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + " id must be >= 0");
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " name is empty");
}

}  // namespace

std::string TimeKey::to_string() const {
  if (period == 0) return std::to_string(year);
  return std::to_string(year) + "Q" + std::to_string(period);
}

TimeKey next_time_key(const TimeKey& t) {
  if (t.period == 0) return {t.year + 1, 0};
  if (t.period == 4) return {t.year + 1, 1};
  return {t.year, t.period + 1};
}

std::optional<TimeKey> parse_time_key(std::string_view cell) {
  const std::string s = text::trim(cell);
  if (s.empty()) return std::nullopt;
  if (auto year = text::parse_int(s)) return TimeKey{static_cast<int>(*year), 0};

  std::size_t split = s.find_first_of("Qq-");
  if (split == std::string::npos || split == 0) return std::nullopt;
  auto year = text::parse_int(s.substr(0, split));
  std::string rest = s.substr(split);
  if (rest.rfind("-", 0) == 0) rest.erase(0, 1);
  if (!rest.empty() && (rest[0] == 'Q' || rest[0] == 'q')) rest.erase(0, 1);
  auto period = text::parse_int(rest);
  if (!year || !period || *period < 1 || *period > 4) return std::nullopt;
  return TimeKey{static_cast<int>(*year), static_cast<int>(*period)};
}

std::vector<double> TimeSeries::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

bool TimeRange::contains(const TimeKey& t) const {
  if (from && t < *from) return false;
  if (to && *to < t) return false;
  return true;
}

std::vector<ConversionRule> parse_rules(std::string_view content) {
  std::vector<ConversionRule> rules;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (text::trim(line).empty()) continue;
    auto cells = text::parse_csv(line);
    const auto& row = cells.front();
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::ParseError,
                   "rule line " + std::to_string(line_no) + ": " + why);
    };
    if (row.size() != 4) throw fail("expected industry_id,index_id,source_column,time_column");
    long long v[4];
    for (int i = 0; i < 4; ++i) {
      auto parsed = text::parse_int(row[static_cast<std::size_t>(i)]);
      if (!parsed || *parsed < 0) throw fail("field " + std::to_string(i + 1) + " is not a non-negative integer");
      v[i] = *parsed;
    }
    ConversionRule rule{static_cast<int>(v[0]), static_cast<int>(v[1]),
                        static_cast<std::size_t>(v[2]), static_cast<std::size_t>(v[3])};
    if (rule.source_column == rule.time_column) throw fail("source_column equals time_column");
    rules.push_back(rule);
  }
  return rules;
}

HistoryStore::HistoryStore() : current_(std::make_shared<const Snapshot>()) {}

HistoryStore::HistoryStore(std::shared_ptr<const Snapshot> initial)
    : current_(std::move(initial)) {}

std::shared_ptr<const HistoryStore::Snapshot> HistoryStore::snapshot() const {
  std::lock_guard lock(read_mutex_);
  return current_;
}

std::shared_ptr<HistoryStore::Snapshot> HistoryStore::copy_for_write() const {
  return std::make_shared<Snapshot>(*snapshot());
}

void HistoryStore::publish(std::shared_ptr<Snapshot> next) {
  std::lock_guard lock(read_mutex_);
  current_ = std::move(next);
}

void HistoryStore::put_industry(Industry industry) {
  check_registry_row(industry.id, industry.name, "industry");
  std::lock_guard writer(write_mutex_);
  auto next = copy_for_write();
  next->industries[industry.id] = std::move(industry);
  publish(std::move(next));
}

void HistoryStore::put_index(IndexDef index) {
  check_registry_row(index.id, index.name, "index");
  std::lock_guard writer(write_mutex_);
  auto next = copy_for_write();
  next->indices[index.id] = std::move(index);
  publish(std::move(next));
}

namespace {

std::int64_t upsert_into(HistoryStore::Snapshot& snap, Observation obs) {
  if (!snap.industries.contains(obs.industry_id)) {
    throw Error(ErrorCode::UnknownIndustry, "unknown industry " + std::to_string(obs.industry_id));
  }
  if (!snap.indices.contains(obs.index_id)) {
    throw Error(ErrorCode::UnknownIndex, "unknown index " + std::to_string(obs.index_id));
  }
  if (!std::isfinite(obs.value)) {
    throw Error(ErrorCode::NonFiniteValue, "observation value is not finite");
  }
  if (obs.time.period < 0 || obs.time.period > 4) {
    throw Error(ErrorCode::InvalidArgument, "period must be 0..4");
  }
  const auto key = std::make_pair(SeriesKey{obs.industry_id, obs.index_id}, obs.time);
  auto it = snap.observations.find(key);
  if (it != snap.observations.end()) {
    it->second.value = obs.value;
    return it->second.record_id;
  }
  obs.record_id = snap.next_record_id++;
  snap.observations.emplace(key, obs);
  return obs.record_id;
}

}  // namespace

std::int64_t HistoryStore::upsert_observation(Observation obs) {
  std::lock_guard writer(write_mutex_);
  auto next = copy_for_write();
  const auto id = upsert_into(*next, obs);
  publish(std::move(next));
  return id;
}

TimeSeries HistoryStore::get_series(int industry_id, int index_id,
                                    const std::optional<TimeRange>& range) const {
  auto snap = snapshot();
  TimeSeries series;
  series.key = {industry_id, index_id};
  const SeriesKey key{industry_id, index_id};
  auto it = snap->observations.lower_bound({key, TimeKey{std::numeric_limits<int>::min(), 0}});
  for (; it != snap->observations.end() && it->first.first == key; ++it) {
    if (range && !range->contains(it->first.second)) continue;
    series.points.push_back({it->first.second, it->second.value});
  }
  return series;
}

std::vector<Industry> HistoryStore::industries() const {
  auto snap = snapshot();
  std::vector<Industry> out;
  for (const auto& [id, row] : snap->industries) out.push_back(row);
  return out;
}

std::vector<IndexDef> HistoryStore::indices() const {
  auto snap = snapshot();
  std::vector<IndexDef> out;
  for (const auto& [id, row] : snap->indices) out.push_back(row);
  return out;
}

std::vector<Observation> HistoryStore::observations() const {
  auto snap = snapshot();
  std::vector<Observation> out;
  for (const auto& [key, row] : snap->observations) out.push_back(row);
  std::sort(out.begin(), out.end(),
            [](const Observation& a, const Observation& b) { return a.record_id < b.record_id; });
  return out;
}

ConversionResult HistoryStore::convert_spreadsheet(const std::vector<text::CsvRow>& table,
                                                   const std::vector<ConversionRule>& rules,
                                                   const ConversionOptions& options) {
  ConversionResult result;
  if (rules.empty()) return result;

  std::size_t width = 0;
  for (const auto& row : table) width = std::max(width, row.size());
  for (const auto& rule : rules) {
    if (rule.source_column >= width || rule.time_column >= width) {
      throw Error(ErrorCode::BadRuleColumn,
                  "rule for industry " + std::to_string(rule.industry_id) + " index " +
                      std::to_string(rule.index_id) + " references column " +
                      std::to_string(std::max(rule.source_column, rule.time_column)) +
                      " but the table has " + std::to_string(width));
    }
    if (rule.source_column == rule.time_column) {
      throw Error(ErrorCode::BadRuleColumn, "source_column equals time_column");
    }
  }

  // Validate everything before touching the store.
  std::vector<Observation> pending;
  for (std::size_t r = options.header_rows; r < table.size(); ++r) {
    const auto& row = table[r];
    if (std::all_of(row.begin(), row.end(), [](const std::string& c) { return text::trim(c).empty(); })) {
      continue;
    }
    for (const auto& rule : rules) {
      const std::string cell = rule.source_column < row.size() ? text::trim(row[rule.source_column]) : "";
      if (cell.empty()) continue;
      const std::string time_cell = rule.time_column < row.size() ? row[rule.time_column] : "";
      auto time = parse_time_key(time_cell);
      if (!time) {
        throw Error(ErrorCode::UnparseableTime,
                    "row " + std::to_string(r + 1) + ": cannot parse time '" + time_cell + "'");
      }
      auto value = text::parse_double(cell);
      if (!value || !std::isfinite(*value)) {
        result.warnings.push_back("row " + std::to_string(r + 1) + " column " +
                                  std::to_string(rule.source_column) + ": skipped non-numeric '" +
                                  cell + "'");
        continue;
      }
      pending.push_back({0, rule.index_id, rule.industry_id, *value, *time});
    }
  }

  std::lock_guard writer(write_mutex_);
  auto next = copy_for_write();
  for (const auto& rule : rules) {
    if (!next->industries.contains(rule.industry_id)) {
      if (!options.create_missing) {
        throw Error(ErrorCode::UnknownIndustry, "unknown industry " + std::to_string(rule.industry_id));
      }
      next->industries[rule.industry_id] =
          Industry{rule.industry_id, "Industry " + std::to_string(rule.industry_id), {}, {}, true};
    }
    if (!next->indices.contains(rule.index_id)) {
      if (!options.create_missing) {
        throw Error(ErrorCode::UnknownIndex, "unknown index " + std::to_string(rule.index_id));
      }
      next->indices[rule.index_id] =
          IndexDef{rule.index_id, "Index " + std::to_string(rule.index_id), {}, {}, true};
    }
  }
  for (const auto& obs : pending) upsert_into(*next, obs);
  result.written = pending.size();
  publish(std::move(next));
  return result;
}

std::string industries_csv(const std::vector<Industry>& rows) {
  std::string out = text::csv_line(kIndustryHeader) + "\n";
  for (const auto& r : rows) {
    out += text::csv_line({std::to_string(r.id), r.name, r.remark.value_or(""),
                           r.type_label.value_or(""), r.enabled ? "1" : "0"}) +
           "\n";
  }
  return out;
}

std::string indices_csv(const std::vector<IndexDef>& rows) {
  std::string out = text::csv_line(kIndexHeader) + "\n";
  for (const auto& r : rows) {
    out += text::csv_line({std::to_string(r.id), r.name, r.remark.value_or(""),
                           r.unit_label.value_or(""), r.enabled ? "1" : "0"}) +
           "\n";
  }
  return out;
}

std::string observations_csv(const std::vector<Observation>& rows) {
  std::string out = text::csv_line(kObservationHeader) + "\n";
  for (const auto& r : rows) {
    out += text::csv_line({std::to_string(r.record_id), std::to_string(r.index_id),
                           std::to_string(r.industry_id), text::format_shortest(r.value),
                           std::to_string(r.time.year), std::to_string(r.time.period)}) +
           "\n";
  }
  return out;
}

HistoryStore HistoryStore::open(const std::string& dir) {
  namespace fs = std::filesystem;
  auto snap = std::make_shared<Snapshot>();
  const fs::path base(dir);

  const auto industries_path = base / "industries.csv";
  std::size_t line = 1;
  for (const auto& row : load_table(industries_path, kIndustryHeader)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    Industry ind{require_int(row[0], industries_path.string(), line), row[1],
                 optional_cell(row[2]), optional_cell(row[3]),
                 row.size() < 5 || text::trim(row[4]) != "0"};
    check_registry_row(ind.id, ind.name, "industry");
    snap->industries[ind.id] = std::move(ind);
  }

  const auto indices_path = base / "indices.csv";
  line = 1;
  for (const auto& row : load_table(indices_path, kIndexHeader)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    IndexDef idx{require_int(row[0], indices_path.string(), line), row[1],
                 optional_cell(row[2]), optional_cell(row[3]),
                 row.size() < 5 || text::trim(row[4]) != "0"};
    check_registry_row(idx.id, idx.name, "index");
    snap->indices[idx.id] = std::move(idx);
  }

  const auto obs_path = base / "observations.csv";
  line = 1;
  for (const auto& row : load_table(obs_path, kObservationHeader)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    const std::string where = obs_path.string();
    Observation obs;
    obs.record_id = require_int(row[0], where, line);
    obs.index_id = require_int(row[1], where, line);
    obs.industry_id = require_int(row[2], where, line);
    auto value = text::parse_double(row[3]);
    if (!value) throw Error(ErrorCode::BadStoreFile, where + ":" + std::to_string(line) + ": bad value");
    obs.value = *value;
    obs.time.year = require_int(row[4], where, line);
    obs.time.period = row.size() > 5 && !text::trim(row[5]).empty() ? require_int(row[5], where, line) : 0;
    if (!snap->industries.contains(obs.industry_id)) {
      throw Error(ErrorCode::UnknownIndustry,
                  where + ":" + std::to_string(line) + ": unknown industry " + std::to_string(obs.industry_id));
    }
    if (!snap->indices.contains(obs.index_id)) {
      throw Error(ErrorCode::UnknownIndex,
                  where + ":" + std::to_string(line) + ": unknown index " + std::to_string(obs.index_id));
    }
    snap->next_record_id = std::max(snap->next_record_id, obs.record_id + 1);
    snap->observations[{SeriesKey{obs.industry_id, obs.index_id}, obs.time}] = obs;
  }
  return HistoryStore(std::move(snap));
}

void HistoryStore::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  auto snap = snapshot();
  std::vector<Industry> industries;
  for (const auto& [id, row] : snap->industries) industries.push_back(row);
  std::vector<IndexDef> indices;
  for (const auto& [id, row] : snap->indices) indices.push_back(row);
  std::vector<Observation> observations;
  for (const auto& [key, row] : snap->observations) observations.push_back(row);
  std::sort(observations.begin(), observations.end(),
            [](const Observation& a, const Observation& b) { return a.record_id < b.record_id; });
  text::write_file((base / "industries.csv").string(), industries_csv(industries));
  text::write_file((base / "indices.csv").string(), indices_csv(indices));
  text::write_file((base / "observations.csv").string(), observations_csv(observations));
}

}  // namespace dwb
