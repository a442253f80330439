#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwb::correlation {

/// Aligned x/y observations.
struct PairedSample {
  std::vector<double> x;
  std::vector<double> y;

  /// Throws DimensionMismatch / EmptySample / NonFiniteValue.
  void validate() const;
  std::size_t size() const { return x.size(); }
};

/// Population-divisor Pearson coefficient, clamped to [-1, 1].
double pearson(const PairedSample& sample);

/// Average ranks, 1 = smallest. `descending` ranks largest = 1.
std::vector<double> average_ranks(std::span<const double> values, bool descending = false);

bool has_ties(std::span<const double> values);

/// Pearson on average-rank vectors; valid with ties.
double spearman_rank_pearson(const PairedSample& sample);

/// 1 - 6 sum d^2 / (n (n^2 - 1)); only defined for tie-free samples.
double spearman_rank_difference(const PairedSample& sample);

/// Rank-difference form when tie-free, rank-Pearson otherwise.
double spearman(const PairedSample& sample);

/// Tau-a; pairs tied in x or y count as neither concordant nor discordant.
double kendall_tau(const PairedSample& sample);

/// Between-group over total sum of squares.
double correlation_ratio(const std::vector<std::vector<double>>& groups);

/// Groups y by the discrete x label it is paired with.
std::vector<std::vector<double>> group_by_label(std::span<const int> labels, std::span<const double> y);

/// Shannon entropy in bits of the empirical distribution of `labels`.
double entropy_bits(std::span<const int> labels);

/// Sum of marginal entropies minus joint entropy, in bits.
double total_correlation(const std::vector<std::vector<int>>& series);

/// First-order partial correlation of x and y controlling for z.
double partial_correlation(double r_xy, double r_xz, double r_yz);
double partial_correlation(const PairedSample& xy, const PairedSample& xz, const PairedSample& yz);

struct Coefficient {
  std::optional<double> value;  // empty when undefined for this sample
  std::string reason;           // error name when undefined
};

struct CorrelationReport {
  std::vector<double> x;
  std::vector<double> y;
  Coefficient pearson;
  Coefficient kendall;
  Coefficient spearman;
  std::optional<Coefficient> correlation_ratio;
  std::optional<Coefficient> total_correlation;
  std::optional<Coefficient> partial;
};

/// Pearson, Kendall and Spearman; undefined coefficients are flagged
/// rather than thrown.
CorrelationReport basic_report(const PairedSample& sample);

/// Text layout: X values, Y values, then the three labelled coefficients at
/// 15 significant digits. Value lines wrap at `wrap_width` characters.
std::string format_report(const CorrelationReport& report, std::size_t wrap_width = 60);

/// Value rounded to 15 significant digits, as printed in reports.
double report_digits(double value);

}  // namespace dwb::correlation
