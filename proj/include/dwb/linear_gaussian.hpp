#pragma once

// Linear-Gaussian transition model x_{t+1} ~ N(a*x_t + b, sigma^2): maximum
// likelihood fitting over consecutive pairs and forward belief propagation.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dwb::gaussian {

inline constexpr double kSigmaFloor = 1e-9;

struct LinearGaussianModel {
  double a = 1.0;
  double b = 0.0;
  double sigma = kSigmaFloor;
};

/// sigma == 0 encodes a definite value.
struct GaussianBelief {
  double mean = 0.0;
  double stddev = 0.0;

  double variance() const { return stddev * stddev; }
};

/// Closed-form MLE over the n-1 pairs (x_t, x_{t+1}). sigma is the root mean
/// squared residual (divisor: pair count), clamped to kSigmaFloor.
LinearGaussianModel fit_mle(std::span<const double> series);

/// Log-likelihood of the consecutive pairs under `model` (natural log).
double log_likelihood(std::span<const double> series, const LinearGaussianModel& model);

/// Transition density N(a*x + b, sigma^2) evaluated at `next`.
double transition_density(double next, double current, const LinearGaussianModel& model);

GaussianBelief predict_one(const GaussianBelief& belief, const LinearGaussianModel& model);

/// Chains predict_one from the definite value `last`; element i is the
/// belief i+1 steps ahead.
std::vector<GaussianBelief> predict_horizon(double last, const LinearGaussianModel& model,
                                            std::size_t steps);

double normal_pdf(double x, double mean, double stddev);

/// Text record "a b sigma" with round-trip precision.
std::string to_text(const LinearGaussianModel& model);
LinearGaussianModel from_text(std::string_view record);

}  // namespace dwb::gaussian
