#pragma once

// SVG 1.1 plots for predictions and correlations. Output is deterministic:
// fixed-precision coordinates, no timestamps, stable element order.

#include <string>
#include <vector>

#include "dwb/bezier.hpp"
#include "dwb/correlation.hpp"
#include "dwb/history_store.hpp"
#include "dwb/linear_gaussian.hpp"

namespace dwb::svg {

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

inline constexpr std::size_t kDensitySamples = 401;

/// (x, density) pairs evenly spaced over [mean - 4 sd, mean + 4 sd].
std::vector<geometry::Point> distribution_samples(const gaussian::GaussianBelief& belief,
                                                  std::size_t count = kDensitySamples);

std::string emit_distribution_svg(const gaussian::GaussianBelief& belief, const PlotLabels& labels);

/// One prediction bar in data units.
struct TrendBar {
  double time = 0.0;
  double mean = 0.0;
  double low = 0.0;   // mean - 3 sd
  double high = 0.0;  // mean + 3 sd
};

/// Bars for `beliefs`, placed at the periods following the last history point.
std::vector<TrendBar> trend_bars(const TimeSeries& history,
                                 const std::vector<gaussian::GaussianBelief>& beliefs);

std::string emit_trend_svg(const TimeSeries& history,
                           const std::vector<gaussian::GaussianBelief>& beliefs,
                           const PlotLabels& labels);

std::string emit_scatter_svg(const correlation::PairedSample& sample, const PlotLabels& labels);

}  // namespace dwb::svg
