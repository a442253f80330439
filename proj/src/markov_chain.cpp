#include "dwb/markov_chain.hpp"

#include <cmath>
#include <numeric>

#include "dwb/error.hpp"
#include "dwb/text.hpp"

namespace dwb::markov {

TransitionMatrix::TransitionMatrix(std::size_t n, std::vector<double> cells)
    : n_(n), cells_(std::move(cells)) {
  if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "transition matrix needs at least one state");
  if (cells_.size() != n_ * n_) {
    throw Error(ErrorCode::DimensionMismatch, "transition matrix must have n*n cells");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (double c : row(i)) {
      if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
        throw Error(ErrorCode::NotStochastic, "transition probabilities must lie in [0, 1]");
      }
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::NotStochastic, "row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cells[i * n + i] = 1.0;
  return TransitionMatrix(n, std::move(cells));
}

StateDistribution definite_state(std::size_t state, std::size_t n) {
  if (state >= n) throw Error(ErrorCode::LabelOutOfRange, "state out of range");
  StateDistribution d(n, 0.0);
  d[state] = 1.0;
  return d;
}

TransitionMatrix learn_transition_matrix(std::span<const int> labels, std::size_t n, bool laplace) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "state count must be positive");
  if (labels.size() < 2) {
    throw Error(ErrorCode::SequenceTooShort, "need at least two labels to observe a transition");
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= n) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(label) + " outside [0, n)");
    }
  }

  std::vector<double> counts(n * n, laplace ? 1.0 : 0.0);
  for (std::size_t t = 0; t + 1 < labels.size(); ++t) {
    counts[static_cast<std::size_t>(labels[t]) * n + static_cast<std::size_t>(labels[t + 1])] += 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double* row = counts.data() + i * n;
    const double total = std::accumulate(row, row + n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = total > 0.0 ? row[j] / total : 1.0 / static_cast<double>(n);
    }
  }
  return TransitionMatrix(n, std::move(counts));
}

StateDistribution predict_distribution(std::span<const double> start, const TransitionMatrix& p,
                                       std::size_t k) {
  const std::size_t n = p.size();
  if (start.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "start distribution length differs from state count");
  }
  StateDistribution current(start.begin(), start.end());
  StateDistribution next(n);
  for (std::size_t step = 0; step < k; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (current[i] == 0.0) continue;
      const auto row = p.row(i);
      for (std::size_t j = 0; j < n; ++j) next[j] += current[i] * row[j];
    }
    current.swap(next);
  }
  return current;
}

std::string to_csv(const TransitionMatrix& p) {
  std::string out = std::to_string(p.size()) + "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    text::CsvRow row;
    for (double c : p.row(i)) row.push_back(text::format_shortest(c));
    out += text::csv_line(row) + "\n";
  }
  return out;
}

TransitionMatrix from_csv(std::string_view content) {
  const auto rows = text::parse_csv(content);
  if (rows.empty() || rows.front().size() != 1) {
    throw Error(ErrorCode::ParseError, "transition matrix CSV must start with the state count");
  }
  const auto n = text::parse_int(rows.front().front());
  if (!n || *n <= 0) throw Error(ErrorCode::ParseError, "bad state count");
  const auto size = static_cast<std::size_t>(*n);
  if (rows.size() < size + 1) throw Error(ErrorCode::ParseError, "missing matrix rows");
  std::vector<double> cells;
  for (std::size_t i = 1; i <= size; ++i) {
    if (rows[i].size() != size) throw Error(ErrorCode::ParseError, "matrix row has wrong width");
    for (const auto& cell : rows[i]) {
      auto v = text::parse_double(cell);
      if (!v) throw Error(ErrorCode::ParseError, "bad matrix cell '" + cell + "'");
      cells.push_back(*v);
    }
  }
  return TransitionMatrix(size, std::move(cells));
}

}  // namespace dwb::markov
