#pragma once

// Fuzzy discretization of continuous indices into levels, and synthesis of
// several indices into a single discrete state label.

#include <span>
#include <string_view>
#include <vector>

namespace dwb::leveling {

/// Level centers and weight for one index.
struct IndexLevels {
  int index_id = 0;
  std::vector<double> breakpoints;  // strictly increasing, size >= 2
  double weight = 1.0;
};

/// All indices share the same number of levels so their membership rows can
/// be stacked into one matrix.
struct LevelingScheme {
  std::vector<IndexLevels> indices;

  std::size_t level_count() const;
  std::vector<double> weights() const;
  /// Throws InvalidArgument on any broken invariant.
  void validate() const;
};

/// Text form, one index per line: `<index_id> <weight> <b0> <b1> ...`.
/// Blank lines and `#` comments are ignored.
LevelingScheme parse_scheme(std::string_view content);

/// Rows are indices, columns are levels.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  explicit MembershipMatrix(std::vector<std::vector<double>> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return rows_.empty() ? 0 : rows_.front().size(); }
  std::span<const double> row(std::size_t i) const { return rows_[i]; }

 private:
  std::vector<std::vector<double>> rows_;
};

/// Triangular partition-of-unity membership over the level centers. Values
/// outside the range clamp to the nearest extreme level.
std::vector<double> membership_vector(double value, std::span<const double> breakpoints);

/// Weighted column sums of the membership matrix.
std::vector<double> synthesize(const MembershipMatrix& memberships, std::span<const double> weights);

/// Maximum-membership level; ties go to the lowest index.
std::size_t assign_level(std::span<const double> synth);

/// Runs the three steps for each time entry. `values[i][t]` is index i of
/// the scheme at time t; all rows must have equal length.
std::vector<int> level_sequence(const LevelingScheme& scheme,
                                const std::vector<std::vector<double>>& values);

/// Evenly spaced centers from min to max of `values`, for callers that need
/// a quick default discretization.
std::vector<double> even_breakpoints(std::span<const double> values, std::size_t levels);

}  // namespace dwb::leveling
