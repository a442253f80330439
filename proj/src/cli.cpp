#include "dwb/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "dwb/api.hpp"
#include "dwb/http_service.hpp"
#include "dwb/svg.hpp"
#include "dwb/text.hpp"

namespace dwb::cli {

namespace {

using api::json;

struct Options {
  std::string store_dir;
  std::string format = "text";

  std::string csv_path;
  std::string rules_path;
  std::size_t header_rows = 1;
  bool no_create = false;

  int industry = 0;
  int index = 0;
  std::optional<int> from_year;
  std::optional<int> to_year;

  std::size_t horizon = 5;
  std::string scheme_path;
  bool laplace = false;

  std::string pair_spec;
  bool ratio = false;
  bool total = false;
  bool partial = false;
  std::size_t bins = 3;

  std::string mdp_path;
  double epsilon = 1e-8;

  std::string plot_path;

  int port = 8080;
  std::string host = "127.0.0.1";
};

/// "6:3" -> {"industry": 6, "index": 3}
std::optional<json> parse_key(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return std::nullopt;
  auto industry = text::parse_int(s.substr(0, colon));
  auto index = text::parse_int(s.substr(colon + 1));
  if (!industry || !index) return std::nullopt;
  return json{{"industry", *industry}, {"index", *index}};
}

/// Pair spec: a CSV file of x,y[,z] columns (a non-numeric first row is a
/// header) or comma-separated store keys "I:X,I:X[,I:X]".
std::vector<json> parse_pair_spec(const std::string& spec) {
  std::vector<json> selectors;
  if (std::filesystem::is_regular_file(spec)) {
    auto rows = text::parse_csv(text::read_file(spec));
    std::size_t first = 0;
    if (!rows.empty() && !rows.front().empty() && !text::parse_double(rows.front().front())) first = 1;
    std::size_t width = 0;
    for (std::size_t r = first; r < rows.size(); ++r) {
      if (rows[r].size() == 1 && text::trim(rows[r][0]).empty()) continue;
      width = width == 0 ? rows[r].size() : width;
      if (rows[r].size() != width) throw Error(ErrorCode::ParseError, spec + ": ragged rows");
    }
    if (width < 2) throw Error(ErrorCode::ParseError, spec + ": need at least two columns");
    for (std::size_t c = 0; c < width; ++c) {
      json column = json::array();
      for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() == 1 && text::trim(rows[r][0]).empty()) continue;
        auto v = text::parse_double(rows[r][c]);
        if (!v) throw Error(ErrorCode::ParseError, spec + ": non-numeric cell '" + rows[r][c] + "'");
        column.push_back(*v);
      }
      selectors.push_back(std::move(column));
    }
    return selectors;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto part = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    auto key = parse_key(text::trim(part));
    if (!key) throw Error(ErrorCode::ParseError, "pair spec must be a CSV file or 'industry:index,industry:index'");
    selectors.push_back(*key);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (selectors.size() < 2) throw Error(ErrorCode::ParseError, "pair spec needs two series");
  return selectors;
}

void emit(std::ostream& out, const Options& opt, const json& response, std::string (*render)(const json&)) {
  if (opt.format == "json") {
    out << response.dump(2) << "\n";
  } else {
    out << render(response);
  }
}


svg::PlotLabels labels_from(const json& spec) {
  return {spec.value("title", ""), spec.value("x_label", ""), spec.value("y_label", "")};
}

TimeSeries history_from(const json& prediction) {
  TimeSeries ts;
  for (const auto& p : prediction["history"]) {
    ts.points.push_back({TimeKey{p["year"].get<int>(), p["period"].get<int>()}, p["value"].get<double>()});
  }
  return ts;
}

std::string run_plot(api::Workbench& wb, const json& spec) {
  const std::string kind = spec.value("kind", "");
  if (kind == "scatter") {
    if (!spec.contains("x") || !spec.contains("y")) throw Error(ErrorCode::ParseError, "scatter plot needs x and y");
    const auto columns = wb.resolve_aligned({spec["x"], spec["y"]});
    return svg::emit_scatter_svg({columns[0], columns[1]}, labels_from(spec));
  }
  if (kind == "distribution" && spec.contains("belief")) {
    return svg::emit_distribution_svg({spec["belief"].at("mean").get<double>(), spec["belief"].at("std").get<double>()},
                                      labels_from(spec));
  }
  if (kind != "distribution" && kind != "trend") {
    throw Error(ErrorCode::ParseError, "plot kind must be distribution, trend or scatter");
  }
  json request = {{"method", "gaussian"},
                  {"industry", spec.at("industry")},
                  {"index", spec.at("index")},
                  {"horizon", spec.value("horizon", 5)}};
  const auto prediction = wb.predict(request);
  std::vector<gaussian::GaussianBelief> beliefs;
  for (const auto& p : prediction["predictions"]) beliefs.push_back({p["mean"].get<double>(), p["std"].get<double>()});
  if (kind == "trend") return svg::emit_trend_svg(history_from(prediction), beliefs, labels_from(spec));

  std::size_t pick = 0;
  if (spec.contains("time")) {
    const auto wanted = spec["time"].is_string() ? spec["time"].get<std::string>() : std::to_string(spec["time"].get<int>());
    const auto& preds = prediction["predictions"];
    auto it = std::find_if(preds.begin(), preds.end(), [&](const json& p) { return p["time"] == wanted; });
    if (it == preds.end()) throw Error(ErrorCode::NotFound, "time " + wanted + " is outside the prediction horizon");
    pick = static_cast<std::size_t>(it - preds.begin());
  }
  return svg::emit_distribution_svg(beliefs[pick], labels_from(spec));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  if (const char* env = std::getenv(api::kStoreEnv)) opt.store_dir = env;

  CLI::App app{"Decision analytics workbench: history store, predictors, correlation and MDP solving"};
  app.require_subcommand(1);
  app.add_option("--store", opt.store_dir, std::string("Store directory (default: $") + api::kStoreEnv + " or ./store)");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* ingest = app.add_subcommand("ingest", "Convert a CSV table into observations using a rule file");
  ingest->add_option("csv", opt.csv_path, "CSV table")->required()->check(CLI::ExistingFile);
  ingest->add_option("rules", opt.rules_path, "Rule file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--header-rows", opt.header_rows, "Rows to skip before data")->capture_default_str();
  ingest->add_flag("--no-create", opt.no_create, "Fail on industry/index ids missing from the store");

  auto* series = app.add_subcommand("series", "Print the observations of one industry/index pair");
  series->add_option("industry", opt.industry)->required();
  series->add_option("index", opt.index)->required();
  series->add_option("--from", opt.from_year, "First year (inclusive)");
  series->add_option("--to", opt.to_year, "Last year (inclusive)");

  auto* predict = app.add_subcommand("predict", "Forecast a series");
  predict->require_subcommand(1);
  auto* gaussian_cmd = predict->add_subcommand("gaussian", "Linear-Gaussian forecast");
  gaussian_cmd->add_option("industry", opt.industry)->required();
  gaussian_cmd->add_option("index", opt.index)->required();
  gaussian_cmd->add_option("--horizon", opt.horizon)->capture_default_str()->check(CLI::PositiveNumber);
  auto* markov_cmd = predict->add_subcommand("markov", "Discrete Markov-chain forecast over leveled indices");
  markov_cmd->add_option("industry", opt.industry)->required();
  markov_cmd->add_option("--scheme", opt.scheme_path, "Leveling scheme file")->required()->check(CLI::ExistingFile);
  markov_cmd->add_option("--horizon", opt.horizon)->capture_default_str()->check(CLI::PositiveNumber);
  markov_cmd->add_flag("--laplace", opt.laplace, "Add one to every transition count");

  auto* correlate = app.add_subcommand("correlate", "Correlation report for two series");
  correlate->add_option("pairs", opt.pair_spec, "CSV file of x,y[,z] columns or 'I:X,I:X[,I:X]'")->required();
  correlate->add_flag("--ratio", opt.ratio, "Also report the correlation ratio of y on leveled x");
  correlate->add_flag("--total", opt.total, "Also report total correlation of the leveled pair");
  correlate->add_flag("--partial", opt.partial, "Also report partial correlation controlling for the third series");
  correlate->add_option("--bins", opt.bins, "Levels used by --ratio/--total")->capture_default_str()->check(CLI::Range(2, 1000));

  auto* mdp_cmd = app.add_subcommand("mdp", "Markov decision processes");
  mdp_cmd->require_subcommand(1);
  auto* solve = mdp_cmd->add_subcommand("solve", "Value iteration and optimal policy");
  solve->add_option("spec", opt.mdp_path, "MDP spec file")->required()->check(CLI::ExistingFile);
  solve->add_option("--epsilon", opt.epsilon)->capture_default_str()->check(CLI::PositiveNumber);

  auto* plot = app.add_subcommand("plot", "Render an SVG plot described by a JSON plot spec");
  plot->add_option("plotspec", opt.plot_path)->required()->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("port", opt.port)->required()->check(CLI::Range(0, 65535));
  serve->add_option("--host", opt.host)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (opt.store_dir.empty()) opt.store_dir = "store";

  try {
    // Commands that never touch the store run without opening it.
    if (*solve) {
      const auto response = api::Workbench().mdp_solve({{"spec", text::read_file(opt.mdp_path)}, {"epsilon", opt.epsilon}});
      emit(out, opt, response, api::render_mdp);
      return kExitOk;
    }

    api::Workbench wb(opt.store_dir);

    if (*ingest) {
      json request = {{"csv", text::read_file(opt.csv_path)},
                      {"rules", text::read_file(opt.rules_path)},
                      {"header_rows", opt.header_rows},
                      {"create_missing", !opt.no_create}};
      const auto response = wb.ingest(request);
      for (const auto& w : response["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
      if (opt.format == "json") {
        out << response.dump(2) << "\n";
      } else {
        out << "wrote " << response["written"].get<std::size_t>() << " observations\n";
      }
      return kExitOk;
    }
    if (*series) {
      std::optional<TimeRange> range;
      if (opt.from_year || opt.to_year) {
        range.emplace();
        if (opt.from_year) range->from = TimeKey{*opt.from_year, 0};
        if (opt.to_year) range->to = TimeKey{*opt.to_year, 4};
      }
      emit(out, opt, wb.series(opt.industry, opt.index, range), api::render_series);
      return kExitOk;
    }
    if (*gaussian_cmd) {
      json request = {{"method", "gaussian"}, {"industry", opt.industry}, {"index", opt.index}, {"horizon", opt.horizon}};
      emit(out, opt, wb.predict(request), api::render_prediction);
      return kExitOk;
    }
    if (*markov_cmd) {
      json request = {{"method", "markov"},
                      {"industry", opt.industry},
                      {"scheme", text::read_file(opt.scheme_path)},
                      {"horizon", opt.horizon},
                      {"laplace", opt.laplace}};
      emit(out, opt, wb.predict(request), api::render_prediction);
      return kExitOk;
    }
    if (*correlate) {
      const auto selectors = parse_pair_spec(opt.pair_spec);
      if (opt.partial && selectors.size() < 3) {
        err << "error: --partial needs a third series in the pair spec\n";
        return kExitUsage;
      }
      json request = {{"x", selectors[0]}, {"y", selectors[1]}, {"ratio", opt.ratio}, {"total", opt.total}, {"bins", opt.bins}};
      if (opt.partial) request["z"] = selectors[2];
      emit(out, opt, wb.correlate(request), api::render_correlation);
      return kExitOk;
    }
    if (*plot) {
      json spec;
      try {
        spec = json::parse(text::read_file(opt.plot_path));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("plot spec is not valid JSON: ") + e.what());
      }
      const std::string svg_text = run_plot(wb, spec);
      if (spec.contains("output") && spec["output"].is_string()) {
        text::write_file(spec["output"].get<std::string>(), svg_text);
        if (opt.format == "json") {
          out << json{{"output", spec["output"]}, {"bytes", svg_text.size()}}.dump() << "\n";
        } else {
          out << "wrote " << spec["output"].get<std::string>() << "\n";
        }
      } else {
        out << svg_text;
      }
      return kExitOk;
    }
    if (*serve) {
      http::Service service(wb);
      if (!service.bind(opt.host, opt.port)) {
        err << "error: cannot bind " << opt.host << ":" << opt.port << "\n";
        return kExitDataError;
      }
      out << "listening on " << opt.host << ":" << opt.port << std::endl;
      return service.listen_after_bind() ? kExitOk : kExitDataError;
    }
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kExitDataError;
  } catch (const json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace dwb::cli
