#include "dwb/linear_gaussian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dwb/error.hpp"
#include "dwb/text.hpp"

namespace dwb::gaussian {

namespace {

void check_finite(std::span<const double> series) {
  for (double x : series) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "series value is not finite");
  }
}

void check_model(const LinearGaussianModel& m) {
  if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.sigma) || m.sigma < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "model parameters must be finite with sigma >= 0");
  }
}

}  // namespace

LinearGaussianModel fit_mle(std::span<const double> series) {
  if (series.size() < 3) {
    throw Error(ErrorCode::SeriesTooShort, "fitting needs at least 3 points");
  }
  check_finite(series);

  const std::size_t pairs = series.size() - 1;
  const auto current = series.first(pairs);
  const auto next = series.subspan(1);
  const double n = static_cast<double>(pairs);

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    mean_x += current[t];
    mean_y += next[t];
  }
  mean_x /= n;
  mean_y /= n;

  // Centered sums; algebraically the same as the raw-sum closed form but
  // without its cancellation on large index values.
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const double dx = current[t] - mean_x;
    sxx += dx * dx;
    sxy += dx * (next[t] - mean_y);
  }
  bool all_equal = true;
  for (std::size_t t = 1; t < pairs; ++t) all_equal = all_equal && current[t] == current[0];
  if (all_equal || sxx == 0.0) {
    throw Error(ErrorCode::DegenerateVariance, "all x_t are equal; slope is undefined");
  }

  LinearGaussianModel model;
  model.a = sxy / sxx;
  model.b = mean_y - model.a * mean_x;
  double ss = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const double r = next[t] - (model.a * current[t] + model.b);
    ss += r * r;
  }
  model.sigma = std::max(std::sqrt(ss / n), kSigmaFloor);
  return model;
}

double log_likelihood(std::span<const double> series, const LinearGaussianModel& model) {
  check_model(model);
  if (model.sigma <= 0.0) throw Error(ErrorCode::ZeroSigma, "log-likelihood needs sigma > 0");
  if (series.size() < 2) throw Error(ErrorCode::SeriesTooShort, "need at least one pair");
  check_finite(series);

  const double pairs = static_cast<double>(series.size() - 1);
  double ss = 0.0;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double r = series[t + 1] - (model.a * series[t] + model.b);
    ss += r * r;
  }
  return pairs * (-std::log(std::sqrt(2.0 * std::numbers::pi)) - std::log(model.sigma)) -
         ss / (2.0 * model.sigma * model.sigma);
}

double normal_pdf(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

double transition_density(double next, double current, const LinearGaussianModel& model) {
  check_model(model);
  if (model.sigma <= 0.0) throw Error(ErrorCode::ZeroSigma, "density needs sigma > 0");
  return normal_pdf(next, model.a * current + model.b, model.sigma);
}

GaussianBelief predict_one(const GaussianBelief& belief, const LinearGaussianModel& model) {
  check_model(model);
  if (!std::isfinite(belief.mean) || !std::isfinite(belief.stddev) || belief.stddev < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "belief must be finite with stddev >= 0");
  }
  // Convolving N(mu, s^2) through x' = a x + b + noise(sigma^2).
  const double variance = model.a * model.a * belief.variance() + model.sigma * model.sigma;
  return {model.a * belief.mean + model.b, std::sqrt(variance)};
}

std::vector<GaussianBelief> predict_horizon(double last, const LinearGaussianModel& model,
                                            std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
  std::vector<GaussianBelief> out;
  out.reserve(steps);
  GaussianBelief belief{last, 0.0};
  for (std::size_t i = 0; i < steps; ++i) {
    belief = predict_one(belief, model);
    out.push_back(belief);
  }
  return out;
}

std::string to_text(const LinearGaussianModel& model) {
  return text::format_shortest(model.a) + " " + text::format_shortest(model.b) + " " +
         text::format_shortest(model.sigma);
}

LinearGaussianModel from_text(std::string_view record) {
  std::istringstream in{std::string(record)};
  std::string fields[3];
  if (!(in >> fields[0] >> fields[1] >> fields[2])) {
    throw Error(ErrorCode::ParseError, "expected 'a b sigma'");
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::ParseError, "trailing data after 'a b sigma'");
  LinearGaussianModel m;
  double* dst[3] = {&m.a, &m.b, &m.sigma};
  for (int i = 0; i < 3; ++i) {
    auto v = text::parse_double(fields[i]);
    if (!v) throw Error(ErrorCode::ParseError, "bad model field '" + fields[i] + "'");
    *dst[i] = *v;
  }
  check_model(m);
  return m;
}

}  // namespace dwb::gaussian
