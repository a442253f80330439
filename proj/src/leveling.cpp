#include "dwb/leveling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dwb/error.hpp"
#include "dwb/text.hpp"

namespace dwb::leveling {

namespace {

void check_breakpoints(std::span<const double> breakpoints) {
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "a leveling needs at least 2 breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) {
      throw Error(ErrorCode::NonFiniteValue, "breakpoint is not finite");
    }
    if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    }
  }
}

void check_weights(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");
  }
}

}  // namespace

std::size_t LevelingScheme::level_count() const {
  return indices.empty() ? 0 : indices.front().breakpoints.size();
}

std::vector<double> LevelingScheme::weights() const {
  std::vector<double> w;
  for (const auto& idx : indices) w.push_back(idx.weight);
  return w;
}

void LevelingScheme::validate() const {
  if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "leveling scheme has no indices");
  for (const auto& idx : indices) {
    check_breakpoints(idx.breakpoints);
    if (idx.breakpoints.size() != level_count()) {
      throw Error(ErrorCode::DimensionMismatch, "all indices must use the same number of levels");
    }
  }
  check_weights(weights());
}

LevelingScheme parse_scheme(std::string_view content) {
  LevelingScheme scheme;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::ParseError, "scheme line " + std::to_string(line_no) + ": " + why);
    };
    if (tokens.size() < 4) throw fail("expected <index_id> <weight> <b0> <b1> ...");
    IndexLevels levels;
    auto id = text::parse_int(tokens[0]);
    auto weight = text::parse_double(tokens[1]);
    if (!id || !weight) throw fail("bad index id or weight");
    levels.index_id = static_cast<int>(*id);
    levels.weight = *weight;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      auto b = text::parse_double(tokens[i]);
      if (!b) throw fail("bad breakpoint '" + tokens[i] + "'");
      levels.breakpoints.push_back(*b);
    }
    scheme.indices.push_back(std::move(levels));
  }
  scheme.validate();
  return scheme;
}

MembershipMatrix::MembershipMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != cols()) throw Error(ErrorCode::DimensionMismatch, "ragged membership matrix");
  }
}

std::vector<double> membership_vector(double value, std::span<const double> breakpoints) {
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, "value is not finite");
  check_breakpoints(breakpoints);

  std::vector<double> m(breakpoints.size(), 0.0);
  if (value <= breakpoints.front()) {
    m.front() = 1.0;
    return m;
  }
  if (value >= breakpoints.back()) {
    m.back() = 1.0;
    return m;
  }
  // First breakpoint strictly greater than value; value sits in [hi-1, hi).
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), value) - breakpoints.begin());
  const std::size_t lo = hi - 1;
  const double upper = (value - breakpoints[lo]) / (breakpoints[hi] - breakpoints[lo]);
  m[hi] = upper;
  m[lo] = 1.0 - upper;
  return m;
}

std::vector<double> synthesize(const MembershipMatrix& memberships, std::span<const double> weights) {
  if (weights.size() != memberships.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "one weight per membership row required");
  }
  check_weights(weights);
  std::vector<double> out(memberships.cols(), 0.0);
  for (std::size_t i = 0; i < memberships.rows(); ++i) {
    const auto row = memberships.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * row[j];
  }
  return out;
}

std::size_t assign_level(std::span<const double> synth) {
  if (synth.empty()) throw Error(ErrorCode::EmptyVector, "cannot assign a level from an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < synth.size(); ++i) {
    if (synth[i] > synth[best]) best = i;
  }
  return best;
}

std::vector<int> level_sequence(const LevelingScheme& scheme,
                                const std::vector<std::vector<double>>& values) {
  scheme.validate();
  if (values.size() != scheme.indices.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one value row per scheme index required");
  }
  const std::size_t steps = values.empty() ? 0 : values.front().size();
  for (const auto& row : values) {
    if (row.size() != steps) throw Error(ErrorCode::DimensionMismatch, "value rows differ in length");
  }
  const auto weights = scheme.weights();
  std::vector<int> labels;
  labels.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
      rows.push_back(membership_vector(values[i][t], scheme.indices[i].breakpoints));
    }
    labels.push_back(static_cast<int>(assign_level(synthesize(MembershipMatrix(std::move(rows)), weights))));
  }
  return labels;
}

std::vector<double> even_breakpoints(std::span<const double> values, std::size_t levels) {
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 levels");
  if (values.empty()) throw Error(ErrorCode::EmptySample, "no values to level");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> b(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(levels - 1);
  }
  b.back() = hi;
  return b;
}

}  // namespace dwb::leveling
