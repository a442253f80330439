#pragma once

// JSON-level operations shared by the CLI and the HTTP service, so both
// surfaces run the same module calls and produce the same numbers.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "dwb/correlation.hpp"
#include "dwb/error.hpp"
#include "dwb/history_store.hpp"

namespace dwb::api {

using json = nlohmann::ordered_json;

/// Environment variable naming the store directory.
inline constexpr const char* kStoreEnv = "DWB_STORE_DIR";

class Workbench {
 public:
  /// Opens (or starts empty at) `store_dir`. An empty dir keeps everything
  /// in memory.
  explicit Workbench(std::string store_dir = {});

  HistoryStore& store() { return *store_; }
  const std::string& store_dir() const { return store_dir_; }

  json industries() const;
  json indices() const;
  /// Throws NotFound when the key has no observations.
  json series(int industry_id, int index_id, const std::optional<TimeRange>& range = std::nullopt) const;

  /// {"csv": text, "rules": text, "header_rows": n, "create_missing": bool}
  json ingest(const json& request);
  /// {"method": "gaussian"|"markov", "industry", "index", "horizon",
  ///  "scheme": text (markov), "laplace": bool}
  json predict(const json& request) const;
  /// {"x": [..] | {"industry","index"}, "y": same, "z": optional,
  ///  "ratio": bool, "total": bool, "bins": n}
  json correlate(const json& request) const;
  /// {"spec": text, "epsilon": e}
  json mdp_solve(const json& request) const;

  std::optional<std::string> get_template(const std::string& id) const;
  /// Validates, stores the body verbatim and persists it under the store
  /// directory when one is set.
  void put_template(const std::string& id, const std::string& body);

  /// Resolves value selectors (inline arrays, or {"industry", "index"}
  /// store keys aligned on their common times) into equal-length columns.
  std::vector<std::vector<double>> resolve_aligned(const std::vector<json>& selectors) const;

 private:

  std::string store_dir_;
  std::unique_ptr<HistoryStore> store_;
  std::mutex save_mutex_;
  mutable std::shared_mutex templates_mutex_;
  std::map<std::string, std::string> templates_;
};

/// Text renderers used by the CLI for non-JSON output.
std::string render_correlation(const json& response);
std::string render_prediction(const json& response);
std::string render_mdp(const json& response);
std::string render_series(const json& response);

json error_body(const Error& e);
/// 404 for missing keys, 400 for malformed input, 422 for domain errors.
int http_status(ErrorCode code);

bool valid_template_id(const std::string& id);

}  // namespace dwb::api
