#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dwb::markov {

/// Row-stochastic n x n matrix; cell (i, j) is P(next = j | current = i).
class TransitionMatrix {
 public:
  /// Validates shape, non-negativity and row sums (1e-9).
  TransitionMatrix(std::size_t n, std::vector<double> cells);

  static TransitionMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {cells_.data() + i * n_, n_}; }
  const std::vector<double>& cells() const { return cells_; }

 private:
  std::size_t n_;
  std::vector<double> cells_;
};

using StateDistribution = std::vector<double>;

/// One-hot start vector, e.g. state 2 of 3 -> (0, 0, 1).
StateDistribution definite_state(std::size_t state, std::size_t n);

/// Counting estimator. With `laplace`, every transition count starts at 1.
/// Without it, a state never left gets a uniform row.
TransitionMatrix learn_transition_matrix(std::span<const int> labels, std::size_t n, bool laplace);

/// start * P^k, by k successive vector-matrix products.
StateDistribution predict_distribution(std::span<const double> start, const TransitionMatrix& p,
                                       std::size_t k);

/// CSV text: first line n, then n comma-separated rows.
std::string to_csv(const TransitionMatrix& p);
TransitionMatrix from_csv(std::string_view content);

}  // namespace dwb::markov
