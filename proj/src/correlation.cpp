#include "dwb/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dwb/error.hpp"
#include "dwb/text.hpp"

namespace dwb::correlation {

namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void PairedSample::validate() const {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
  if (x.size() < 2) throw Error(ErrorCode::EmptySample, "need at least 2 paired observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorCode::NonFiniteValue, "sample contains a non-finite value");
    }
  }
}

double pearson(const PairedSample& sample) {
  sample.validate();
  const double n = static_cast<double>(sample.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = sample.x[i];
    const double y = sample.y[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  // n*Sxx - Sx^2 = n^2 var_x, so this is cov / (sigma_x sigma_y) with
  // population deviations.
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  const bool x_constant = std::all_of(sample.x.begin(), sample.x.end(),
                                      [&](double v) { return v == sample.x.front(); });
  const bool y_constant = std::all_of(sample.y.begin(), sample.y.end(),
                                      [&](double v) { return v == sample.y.front(); });
  if (x_constant || y_constant || !(vx > 0.0) || !(vy > 0.0)) {
    throw Error(ErrorCode::ZeroVariance, "a margin has zero variance");
  }
  return clamp_unit((n * sxy - sx * sy) / std::sqrt(vx * vy));
}

std::vector<double> average_ranks(std::span<const double> values, bool descending) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

bool has_ties(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

double spearman_rank_pearson(const PairedSample& sample) {
  sample.validate();
  return pearson({average_ranks(sample.x), average_ranks(sample.y)});
}

double spearman_rank_difference(const PairedSample& sample) {
  sample.validate();
  if (has_ties(sample.x) || has_ties(sample.y)) {
    throw Error(ErrorCode::InvalidArgument, "rank-difference form requires tie-free data");
  }
  const auto rx = average_ranks(sample.x);
  const auto ry = average_ranks(sample.y);
  double d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double n = static_cast<double>(sample.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double spearman(const PairedSample& sample) {
  sample.validate();
  if (has_ties(sample.x) || has_ties(sample.y)) return spearman_rank_pearson(sample);
  return spearman_rank_difference(sample);
}

double kendall_tau(const PairedSample& sample) {
  sample.validate();
  const std::size_t n = sample.size();
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int s = sign(sample.x[i] - sample.x[j]) * sign(sample.y[i] - sample.y[j]);
      if (s > 0) ++concordant;
      if (s < 0) ++discordant;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(concordant - discordant) / pairs;
}

double correlation_ratio(const std::vector<std::vector<double>>& groups) {
  std::size_t non_empty = 0;
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& g : groups) {
    if (!g.empty()) ++non_empty;
    for (double v : g) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "group value is not finite");
      total += v;
      ++count;
    }
  }
  if (non_empty < 2) throw Error(ErrorCode::TooFewGroups, "need at least 2 non-empty groups");
  const double grand = total / static_cast<double>(count);

  double between = 0.0;
  double overall = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) overall += (v - grand) * (v - grand);
  }
  if (!(overall > 0.0)) throw Error(ErrorCode::ZeroVariance, "total variance is zero");
  return std::clamp(between / overall, 0.0, 1.0);
}

std::vector<std::vector<double>> group_by_label(std::span<const int> labels, std::span<const double> y) {
  if (labels.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "labels and values differ in length");
  std::map<int, std::vector<double>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(y[i]);
  std::vector<std::vector<double>> out;
  for (auto& [label, values] : groups) out.push_back(std::move(values));
  return out;
}

namespace {

template <typename Key>
double entropy_of_counts(const std::map<Key, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [key, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double entropy_bits(std::span<const int> labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptySample, "entropy of an empty sample");
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  return entropy_of_counts(counts, labels.size());
}

double total_correlation(const std::vector<std::vector<int>>& series) {
  if (series.empty() || series.front().empty()) {
    throw Error(ErrorCode::EmptySample, "total correlation needs non-empty series");
  }
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw Error(ErrorCode::DimensionMismatch, "series differ in length");
  }
  double marginal = 0.0;
  for (const auto& s : series) marginal += entropy_bits(s);

  std::map<std::vector<int>, std::size_t> joint;
  for (std::size_t t = 0; t < len; ++t) {
    std::vector<int> key;
    key.reserve(series.size());
    for (const auto& s : series) key.push_back(s[t]);
    ++joint[key];
  }
  return std::max(0.0, marginal - entropy_of_counts(joint, len));
}

double partial_correlation(double r_xy, double r_xz, double r_yz) {
  const double dx = 1.0 - r_xz * r_xz;
  const double dy = 1.0 - r_yz * r_yz;
  if (std::abs(r_xz) >= 1.0 || std::abs(r_yz) >= 1.0 || !(dx > 0.0) || !(dy > 0.0)) {
    throw Error(ErrorCode::DegenerateControl, "control variable is perfectly correlated");
  }
  return clamp_unit((r_xy - r_xz * r_yz) / std::sqrt(dx * dy));
}

double partial_correlation(const PairedSample& xy, const PairedSample& xz, const PairedSample& yz) {
  return partial_correlation(pearson(xy), pearson(xz), pearson(yz));
}

namespace {

template <typename Fn>
Coefficient guarded(Fn&& fn) {
  try {
    return {fn(), ""};
  } catch (const Error& e) {
    return {std::nullopt, std::string(error_code_name(e.code()))};
  }
}

void append_wrapped(std::string& out, const std::vector<double>& values, std::size_t width) {
  std::string line;
  for (double v : values) {
    const std::string item = text::format_significant(v, 15);
    if (!line.empty() && line.size() + 1 + item.size() > width) {
      out += line + "\n";
      line.clear();
    }
    if (!line.empty()) line.push_back(' ');
    line += item;
  }
  out += line + "\n";
}

std::string coefficient_text(const Coefficient& c) {
  return c.value ? text::format_significant(*c.value, 15) : "undefined (" + c.reason + ")";
}

}  // namespace

CorrelationReport basic_report(const PairedSample& sample) {
  sample.validate();
  CorrelationReport report;
  report.x = sample.x;
  report.y = sample.y;
  report.pearson = guarded([&] { return pearson(sample); });
  report.kendall = guarded([&] { return kendall_tau(sample); });
  report.spearman = guarded([&] { return spearman(sample); });
  return report;
}

std::string format_report(const CorrelationReport& report, std::size_t wrap_width) {
  std::string out = "X Values:\n";
  append_wrapped(out, report.x, wrap_width);
  out += "\nY Values:\n";
  append_wrapped(out, report.y, wrap_width);
  out += "\n";
  out += "Pearson Correlation Coefficient: " + coefficient_text(report.pearson) + "\n";
  out += "Kendall's Tau Correlation Coefficient: " + coefficient_text(report.kendall) + "\n";
  out += "Spearman Rank Correlation: " + coefficient_text(report.spearman) + "\n";
  if (report.correlation_ratio) {
    out += "Correlation Ratio: " + coefficient_text(*report.correlation_ratio) + "\n";
  }
  if (report.total_correlation) {
    out += "Total Correlation (bits): " + coefficient_text(*report.total_correlation) + "\n";
  }
  if (report.partial) {
    out += "Partial Correlation: " + coefficient_text(*report.partial) + "\n";
  }
  return out;
}

double report_digits(double value) {
  return *text::parse_double(text::format_significant(value, 15));
}

}  // namespace dwb::correlation
