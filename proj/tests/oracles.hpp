#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

/// Log-likelihood of consecutive pairs, written directly from the density.
inline double pair_log_likelihood(const std::vector<double>& x, double a, double b, double sigma) {
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    const double z = (x[t + 1] - a * x[t] - b) / sigma;
    total += std::log(std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi)));
  }
  return total;
}

/// Central differences of the log-likelihood with respect to (a, b, sigma),
/// each step scaled to the parameter and data magnitude.
inline std::vector<double> likelihood_gradient(const std::vector<double>& x, double a, double b,
                                               double sigma) {
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double ha = 1e-6 * std::max(1.0, std::abs(a));
  const double hb = 1e-6 * std::max(scale, std::abs(b));
  const double hs = 1e-6 * sigma;
  return {
      (pair_log_likelihood(x, a + ha, b, sigma) - pair_log_likelihood(x, a - ha, b, sigma)) / (2 * ha),
      (pair_log_likelihood(x, a, b + hb, sigma) - pair_log_likelihood(x, a, b - hb, sigma)) / (2 * hb),
      (pair_log_likelihood(x, a, b, sigma + hs) - pair_log_likelihood(x, a, b, sigma - hs)) / (2 * hs),
  };
}

/// Composite Simpson rule on [lo, hi] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double gauss_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of x' where x ~ N(mu, s^2) and x' | x ~ N(a x + b, sigma^2),
/// by integrating the predictive density numerically on a grid.
inline Moments propagate_by_quadrature(double mu, double s, double a, double b, double sigma) {
  const double out_mean_guess = a * mu + b;
  const double out_sd_guess = std::sqrt(a * a * s * s + sigma * sigma);
  auto predictive = [&](double xp) {
    return simpson([&](double x) { return gauss_pdf(x, mu, s) * gauss_pdf(xp, a * x + b, sigma); },
                   mu - 12 * s, mu + 12 * s, 2000);
  };
  const double lo = out_mean_guess - 12 * out_sd_guess;
  const double hi = out_mean_guess + 12 * out_sd_guess;
  const double mass = simpson(predictive, lo, hi, 800);
  const double mean = simpson([&](double v) { return v * predictive(v); }, lo, hi, 800) / mass;
  const double second =
      simpson([&](double v) { return (v - mean) * (v - mean) * predictive(v); }, lo, hi, 800) / mass;
  return {mean, second};
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Exact utilities of a fixed policy: (I - gamma T_pi) U = R.
inline std::vector<double> policy_utilities(const std::vector<std::vector<std::vector<double>>>& t,
                                            const std::vector<double>& r, double gamma,
                                            const std::vector<std::size_t>& policy) {
  const std::size_t n = r.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    m[s][s] = 1.0;
    for (std::size_t sp = 0; sp < n; ++sp) m[s][sp] -= gamma * t[s][policy[s]][sp];
  }
  return solve_linear(m, r);
}

/// Best utilities over every deterministic policy (m^n of them), state by state.
struct Enumeration {
  std::vector<double> best;               // per-state maximum over policies
  std::vector<std::size_t> best_policy;   // a policy attaining the maximum in sum
};

inline Enumeration enumerate_policies(const std::vector<std::vector<std::vector<double>>>& t,
                                      const std::vector<double>& r, double gamma) {
  const std::size_t n = r.size();
  const std::size_t m = t[0].size();
  Enumeration out;
  out.best.assign(n, -std::numeric_limits<double>::infinity());
  double best_sum = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> policy(n, 0);
  while (true) {
    const auto u = policy_utilities(t, r, gamma, policy);
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      out.best[s] = std::max(out.best[s], u[s]);
      sum += u[s];
    }
    if (sum > best_sum) {
      best_sum = sum;
      out.best_policy = policy;
    }
    std::size_t i = 0;
    while (i < n && ++policy[i] == m) policy[i++] = 0;
    if (i == n) break;
  }
  return out;
}

struct Pt {
  double x = 0.0;
  double y = 0.0;
};

/// Cubic Bezier in power form, independent of de Casteljau.
inline Pt cubic_point(const Pt (&p)[4], double t) {
  const double u = 1.0 - t;
  const double w0 = u * u * u, w1 = 3 * u * u * t, w2 = 3 * u * t * t, w3 = t * t * t;
  return {w0 * p[0].x + w1 * p[1].x + w2 * p[2].x + w3 * p[3].x,
          w0 * p[0].y + w1 * p[1].y + w2 * p[2].y + w3 * p[3].y};
}

/// Minimum distance from q to the curve over `samples` evenly spaced parameters.
inline double brute_force_distance(const Pt (&p)[4], Pt q, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Pt c = cubic_point(p, static_cast<double>(i) / (samples - 1));
    best = std::min(best, std::hypot(c.x - q.x, c.y - q.y));
  }
  return best;
}

/// Pearson correlation of residuals after regressing x and y on z.
inline double residual_partial(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& z) {
  const std::size_t n = x.size();
  auto residuals = [&](const std::vector<double>& v) {
    double mz = 0, mv = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mz += z[i];
      mv += v[i];
    }
    mz /= n;
    mv /= n;
    double szz = 0, szv = 0;
    for (std::size_t i = 0; i < n; ++i) {
      szz += (z[i] - mz) * (z[i] - mz);
      szv += (z[i] - mz) * (v[i] - mv);
    }
    const double slope = szv / szz;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i] - mv - slope * (z[i] - mz);
    return out;
  };
  const auto rx = residuals(x);
  const auto ry = residuals(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += rx[i] * ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
