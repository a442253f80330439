#include "dwb/api.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <set>

#include "dwb/leveling.hpp"
#include "dwb/linear_gaussian.hpp"
#include "dwb/markov_chain.hpp"
#include "dwb/mdp.hpp"
#include "dwb/template_graph.hpp"
#include "dwb/text.hpp"

namespace dwb::api {

namespace {

Error bad_request(const std::string& message) { return Error(ErrorCode::ParseError, message); }

const json& require(const json& request, const char* field) {
  if (!request.is_object() || !request.contains(field)) {
    throw bad_request(std::string("missing field '") + field + "'");
  }
  return request[field];
}

int require_int(const json& request, const char* field) {
  const auto& v = require(request, field);
  if (!v.is_number_integer()) throw bad_request(std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

std::string require_string(const json& request, const char* field) {
  const auto& v = require(request, field);
  if (!v.is_string()) throw bad_request(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

template <typename T>
T optional_field(const json& request, const char* field, T fallback) {
  if (!request.is_object() || !request.contains(field) || request[field].is_null()) return fallback;
  try {
    return request[field].get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string("field '") + field + "' has the wrong type");
  }
}

std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

json coefficient_json(const correlation::Coefficient& c) {
  if (!c.value) return nullptr;
  return correlation::report_digits(*c.value);
}

json series_points(const TimeSeries& s) {
  json points = json::array();
  for (const auto& p : s.points) {
    points.push_back({{"time", p.time.to_string()}, {"year", p.time.year}, {"period", p.time.period},
                      {"value", p.value}});
  }
  return points;
}

}  // namespace

Workbench::Workbench(std::string store_dir) : store_dir_(std::move(store_dir)) {
  if (store_dir_.empty()) {
    store_ = std::make_unique<HistoryStore>();
    return;
  }
  store_ = std::make_unique<HistoryStore>(HistoryStore::open(store_dir_).snapshot());
  const auto dir = std::filesystem::path(store_dir_) / "templates";
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      const auto id = entry.path().stem().string();
      if (valid_template_id(id)) templates_[id] = text::read_file(entry.path().string());
    }
  }
}

json Workbench::industries() const {
  json out = json::array();
  for (const auto& r : store_->industries()) {
    out.push_back({{"id", r.id},
                   {"name", r.name},
                   {"remark", r.remark ? json(*r.remark) : json(nullptr)},
                   {"type_label", r.type_label ? json(*r.type_label) : json(nullptr)},
                   {"enabled", r.enabled}});
  }
  return out;
}

json Workbench::indices() const {
  json out = json::array();
  for (const auto& r : store_->indices()) {
    out.push_back({{"id", r.id},
                   {"name", r.name},
                   {"remark", r.remark ? json(*r.remark) : json(nullptr)},
                   {"unit_label", r.unit_label ? json(*r.unit_label) : json(nullptr)},
                   {"enabled", r.enabled}});
  }
  return out;
}

json Workbench::series(int industry_id, int index_id, const std::optional<TimeRange>& range) const {
  const auto s = store_->get_series(industry_id, index_id, range);
  if (s.empty()) {
    throw Error(ErrorCode::NotFound, "no observations for industry " + std::to_string(industry_id) +
                                         " index " + std::to_string(index_id));
  }
  return {{"industry", industry_id}, {"index", index_id}, {"points", series_points(s)}};
}

json Workbench::ingest(const json& request) {
  const auto table = text::parse_csv(require_string(request, "csv"));
  const auto rules = parse_rules(require_string(request, "rules"));
  ConversionOptions options;
  options.header_rows = optional_field<std::size_t>(request, "header_rows", 1);
  options.create_missing = optional_field<bool>(request, "create_missing", true);
  const auto result = store_->convert_spreadsheet(table, rules, options);
  if (!store_dir_.empty()) {
    std::lock_guard lock(save_mutex_);
    store_->save(store_dir_);
  }
  return {{"written", result.written}, {"warnings", result.warnings}};
}

std::vector<std::vector<double>> Workbench::resolve_aligned(const std::vector<json>& selectors) const {
  std::vector<std::vector<double>> columns;
  const bool inline_values = std::all_of(selectors.begin(), selectors.end(),
                                         [](const json& s) { return s.is_array(); });
  if (inline_values) {
    for (const auto& s : selectors) {
      std::vector<double> values;
      for (const auto& v : s) {
        if (!v.is_number()) throw bad_request("inline values must be numbers");
        values.push_back(v.get<double>());
      }
      columns.push_back(std::move(values));
    }
    return columns;
  }
  if (!std::all_of(selectors.begin(), selectors.end(), [](const json& s) { return s.is_object(); })) {
    throw bad_request("selectors must all be value arrays or all be {industry, index} keys");
  }

  std::vector<TimeSeries> series;
  for (const auto& s : selectors) {
    auto ts = store_->get_series(require_int(s, "industry"), require_int(s, "index"));
    if (ts.empty()) {
      throw Error(ErrorCode::NotFound, "no observations for industry " + std::to_string(ts.key.industry_id) +
                                           " index " + std::to_string(ts.key.index_id));
    }
    series.push_back(std::move(ts));
  }
  std::set<TimeKey> common;
  for (const auto& p : series.front().points) common.insert(p.time);
  for (std::size_t i = 1; i < series.size(); ++i) {
    std::set<TimeKey> here;
    for (const auto& p : series[i].points) {
      if (common.contains(p.time)) here.insert(p.time);
    }
    common.swap(here);
  }
  for (const auto& s : series) {
    std::vector<double> values;
    for (const auto& p : s.points) {
      if (common.contains(p.time)) values.push_back(p.value);
    }
    columns.push_back(std::move(values));
  }
  return columns;
}

json Workbench::correlate(const json& request) const {
  std::vector<json> selectors;
  selectors.push_back(require(request, "x"));
  selectors.push_back(require(request, "y"));
  const bool with_partial = request.contains("z") && !request["z"].is_null();
  if (with_partial) selectors.push_back(request["z"]);
  const auto columns = resolve_aligned(selectors);

  correlation::PairedSample sample{columns[0], columns[1]};
  auto report = correlation::basic_report(sample);
  const auto bins = optional_field<std::size_t>(request, "bins", 3);

  auto guarded = [](auto&& fn) -> correlation::Coefficient {
    try {
      return {fn(), ""};
    } catch (const Error& e) {
      return {std::nullopt, std::string(error_code_name(e.code()))};
    }
  };
  if (optional_field<bool>(request, "ratio", false)) {
    report.correlation_ratio = guarded([&] {
      const auto labels = leveling::level_sequence(
          {{{0, leveling::even_breakpoints(sample.x, bins), 1.0}}}, {sample.x});
      return correlation::correlation_ratio(correlation::group_by_label(labels, sample.y));
    });
  }
  if (optional_field<bool>(request, "total", false)) {
    report.total_correlation = guarded([&] {
      const auto lx = leveling::level_sequence({{{0, leveling::even_breakpoints(sample.x, bins), 1.0}}}, {sample.x});
      const auto ly = leveling::level_sequence({{{0, leveling::even_breakpoints(sample.y, bins), 1.0}}}, {sample.y});
      return correlation::total_correlation({lx, ly});
    });
  }
  if (with_partial) {
    report.partial = guarded([&] {
      return correlation::partial_correlation(sample, {columns[0], columns[2]}, {columns[1], columns[2]});
    });
  }

  json out;
  out["n"] = sample.size();
  out["x"] = sample.x;
  out["y"] = sample.y;
  out["pearson"] = coefficient_json(report.pearson);
  out["kendall"] = coefficient_json(report.kendall);
  out["spearman"] = coefficient_json(report.spearman);
  if (report.correlation_ratio) out["correlation_ratio"] = coefficient_json(*report.correlation_ratio);
  if (report.total_correlation) out["total_correlation"] = coefficient_json(*report.total_correlation);
  if (report.partial) out["partial"] = coefficient_json(*report.partial);
  json undefined = json::object();
  auto note = [&](const char* name, const correlation::Coefficient& c) {
    if (!c.value) undefined[name] = c.reason;
  };
  note("pearson", report.pearson);
  note("kendall", report.kendall);
  note("spearman", report.spearman);
  if (report.correlation_ratio) note("correlation_ratio", *report.correlation_ratio);
  if (report.total_correlation) note("total_correlation", *report.total_correlation);
  if (report.partial) note("partial", *report.partial);
  if (!undefined.empty()) out["undefined"] = undefined;
  return out;
}

json Workbench::predict(const json& request) const {
  const auto method = require_string(request, "method");
  const int industry = require_int(request, "industry");
  const auto horizon = optional_field<std::size_t>(request, "horizon", 5);
  if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");

  if (method == "gaussian") {
    const int index = require_int(request, "index");
    const auto history = store_->get_series(industry, index);
    if (history.empty()) {
      throw Error(ErrorCode::NotFound, "no observations for industry " + std::to_string(industry) +
                                           " index " + std::to_string(index));
    }
    const auto values = history.values();
    const auto model = gaussian::fit_mle(values);
    const auto beliefs = gaussian::predict_horizon(values.back(), model, horizon);
    json predictions = json::array();
    TimeKey t = history.points.back().time;
    for (const auto& b : beliefs) {
      t = next_time_key(t);
      predictions.push_back({{"time", t.to_string()}, {"year", t.year}, {"period", t.period},
                             {"mean", b.mean}, {"std", b.stddev}});
    }
    return {{"method", "gaussian"},
            {"industry", industry},
            {"index", index},
            {"model", {{"a", model.a}, {"b", model.b}, {"sigma", model.sigma}}},
            {"history", series_points(history)},
            {"predictions", predictions}};
  }

  if (method == "markov") {
    const auto scheme = leveling::parse_scheme(require_string(request, "scheme"));
    std::vector<json> selectors;
    for (const auto& idx : scheme.indices) selectors.push_back({{"industry", industry}, {"index", idx.index_id}});
    const auto columns = resolve_aligned(selectors);
    const auto labels = leveling::level_sequence(scheme, columns);
    const auto n = scheme.level_count();
    const auto matrix = markov::learn_transition_matrix(labels, n, optional_field<bool>(request, "laplace", false));
    const auto start = markov::definite_state(static_cast<std::size_t>(labels.back()), n);

    // Times of the aligned entries, for labelling the forecast steps.
    TimeKey last{};
    {
      const auto first = store_->get_series(industry, scheme.indices.front().index_id);
      std::set<TimeKey> common;
      for (const auto& p : first.points) common.insert(p.time);
      for (std::size_t i = 1; i < scheme.indices.size(); ++i) {
        std::set<TimeKey> here;
        for (const auto& p : store_->get_series(industry, scheme.indices[i].index_id).points) {
          if (common.contains(p.time)) here.insert(p.time);
        }
        common.swap(here);
      }
      last = *common.rbegin();
    }

    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) rows.push_back(std::vector<double>(matrix.row(i).begin(), matrix.row(i).end()));
    json predictions = json::array();
    TimeKey t = last;
    for (std::size_t k = 1; k <= horizon; ++k) {
      t = next_time_key(t);
      predictions.push_back({{"time", t.to_string()}, {"year", t.year}, {"period", t.period},
                             {"distribution", markov::predict_distribution(start, matrix, k)}});
    }
    return {{"method", "markov"}, {"industry", industry}, {"states", n},      {"labels", labels},
            {"matrix", rows},     {"start_state", labels.back()}, {"predictions", predictions}};
  }
  throw bad_request("method must be 'gaussian' or 'markov'");
}

json Workbench::mdp_solve(const json& request) const {
  const auto model = mdp::parse_spec(require_string(request, "spec"));
  const double epsilon = optional_field<double>(request, "epsilon", 1e-8);
  const auto result = mdp::value_iteration(model, epsilon);
  const auto policy = mdp::extract_policy(model, result.utilities);
  json states = json::array();
  for (std::size_t s = 0; s < model.states(); ++s) {
    states.push_back({{"state", model.state_names[s]},
                      {"utility", result.utilities[s]},
                      {"action", model.action_names[policy[s]]},
                      {"action_index", policy[s]}});
  }
  return {{"gamma", model.gamma()},
          {"epsilon", epsilon},
          {"iterations", result.iterations},
          {"utilities", result.utilities},
          {"policy", policy},
          {"states", states}};
}

bool valid_template_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, pattern);
}

std::optional<std::string> Workbench::get_template(const std::string& id) const {
  std::shared_lock lock(templates_mutex_);
  auto it = templates_.find(id);
  if (it == templates_.end()) return std::nullopt;
  return it->second;
}

void Workbench::put_template(const std::string& id, const std::string& body) {
  if (!valid_template_id(id)) throw bad_request("template id must match [A-Za-z0-9_-]{1,64}");
  geometry::from_json_text(body);
  std::unique_lock lock(templates_mutex_);
  if (!store_dir_.empty()) {
    const auto dir = std::filesystem::path(store_dir_) / "templates";
    std::filesystem::create_directories(dir);
    text::write_file((dir / (id + ".json")).string(), body);
  }
  templates_[id] = body;
}

std::string render_correlation(const json& response) {
  correlation::CorrelationReport report;
  report.x = response["x"].get<std::vector<double>>();
  report.y = response["y"].get<std::vector<double>>();
  auto coefficient = [&](const char* name) {
    correlation::Coefficient c;
    if (response.contains(name) && !response[name].is_null()) {
      c.value = response[name].get<double>();
    } else if (response.contains("undefined") && response["undefined"].contains(name)) {
      c.reason = response["undefined"][name].get<std::string>();
    }
    return c;
  };
  report.pearson = coefficient("pearson");
  report.kendall = coefficient("kendall");
  report.spearman = coefficient("spearman");
  if (response.contains("correlation_ratio")) report.correlation_ratio = coefficient("correlation_ratio");
  if (response.contains("total_correlation")) report.total_correlation = coefficient("total_correlation");
  if (response.contains("partial")) report.partial = coefficient("partial");
  return correlation::format_report(report);
}

std::string render_prediction(const json& response) {
  std::string out;
  if (response["method"] == "gaussian") {
    const auto& m = response["model"];
    out += "model a=" + text::format_shortest(m["a"].get<double>()) +
           " b=" + text::format_shortest(m["b"].get<double>()) +
           " sigma=" + text::format_shortest(m["sigma"].get<double>()) + "\n";
    out += "time mean std\n";
    for (const auto& p : response["predictions"]) {
      out += p["time"].get<std::string>() + " " + fixed(p["mean"].get<double>()) + " " +
             fixed(p["std"].get<double>()) + "\n";
    }
    return out;
  }
  out += "states " + std::to_string(response["states"].get<std::size_t>()) + ", start state " +
         std::to_string(response["start_state"].get<int>()) + "\n";
  out += "transition matrix\n";
  for (const auto& row : response["matrix"]) {
    std::string line;
    for (const auto& v : row) line += (line.empty() ? "" : " ") + fixed(v.get<double>());
    out += line + "\n";
  }
  out += "time distribution\n";
  for (const auto& p : response["predictions"]) {
    std::string line = p["time"].get<std::string>();
    for (const auto& v : p["distribution"]) line += " " + fixed(v.get<double>());
    out += line + "\n";
  }
  return out;
}

std::string render_mdp(const json& response) {
  std::string out;
  for (const auto& s : response["states"]) {
    out += s["state"].get<std::string>() + " U=" + fixed(s["utility"].get<double>()) +
           " action=" + s["action"].get<std::string>() + "\n";
  }
  out += "iterations " + std::to_string(response["iterations"].get<std::size_t>()) + "\n";
  return out;
}

std::string render_series(const json& response) {
  std::string out;
  for (const auto& p : response["points"]) {
    out += p["time"].get<std::string>() + " " + text::format_shortest(p["value"].get<double>()) + "\n";
  }
  return out;
}

json error_body(const Error& e) {
  return {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownIndustry:
    case ErrorCode::UnknownIndex:
      return 404;
    case ErrorCode::ParseError:
      return 400;
    default:
      return 422;
  }
}

}  // namespace dwb::api
