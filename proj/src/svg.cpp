#include "dwb/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dwb/error.hpp"

namespace dwb::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", v);
  std::string s = buf.data();
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string tick_text(double v) {
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Maps data coordinates into the plot frame.
struct Frame {
  double x_min, x_max, y_min, y_max;

  static Frame around(double x_min, double x_max, double y_min, double y_max) {
    if (!(x_min < x_max)) {
      x_min -= 0.5;
      x_max += 0.5;
    }
    if (!(y_min < y_max)) {
      const double pad = y_min == 0.0 ? 1.0 : std::abs(y_min) * 0.05;
      y_min -= pad;
      y_max += pad;
    }
    const double pad_y = (y_max - y_min) * 0.05;
    return {x_min, x_max, y_min - pad_y, y_max + pad_y};
  }

  double px(double x) const { return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom); }
};

std::string header(const PlotLabels& labels) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) +
      "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  if (!labels.title.empty()) {
    out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24.000\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(labels.title) + "</text>\n";
  }
  return out;
}

std::string axes(const Frame& f, const PlotLabels& labels) {
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  std::string out = "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
  out += "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = f.x_min + (f.x_max - f.x_min) * i / kTicks;
    const double yv = f.y_min + (f.y_max - f.y_min) * i / kTicks;
    out += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" +
           tick_text(xv) + "</text>\n";
    out += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" +
           tick_text(yv) + "</text>\n";
  }
  out += "</g>\n";
  out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(labels.x_label) + "</text>\n";
  out += "<text x=\"16.000\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 16.000 " + num((y0 + y1) / 2) + ")\">" + escape(labels.y_label) + "</text>\n";
  return out;
}

}  // namespace

std::vector<geometry::Point> distribution_samples(const gaussian::GaussianBelief& belief,
                                                  std::size_t count) {
  if (!(belief.stddev > 0.0)) throw Error(ErrorCode::ZeroStd, "density plot needs a positive std");
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
  std::vector<geometry::Point> out;
  out.reserve(count);
  const double lo = belief.mean - 4.0 * belief.stddev;
  const double step = 8.0 * belief.stddev / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = lo + step * static_cast<double>(i);
    out.push_back({x, gaussian::normal_pdf(x, belief.mean, belief.stddev)});
  }
  return out;
}

std::string emit_distribution_svg(const gaussian::GaussianBelief& belief, const PlotLabels& labels) {
  const auto samples = distribution_samples(belief);
  const double peak = gaussian::normal_pdf(belief.mean, belief.mean, belief.stddev);
  Frame f = Frame::around(samples.front().x, samples.back().x, 0.0, peak);
  f.y_min = 0.0;
  std::string out = header(labels);
  out += axes(f, labels);
  out += "<polyline class=\"density\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += (i ? " " : "") + num(f.px(samples[i].x)) + "," + num(f.py(samples[i].y));
  }
  out += "\"/>\n";
  out += "<line class=\"mean\" x1=\"" + num(f.px(belief.mean)) + "\" y1=\"" + num(f.py(0.0)) + "\" x2=\"" +
         num(f.px(belief.mean)) + "\" y2=\"" + num(f.py(peak)) + "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  out += "</svg>\n";
  return out;
}

std::vector<TrendBar> trend_bars(const TimeSeries& history,
                                 const std::vector<gaussian::GaussianBelief>& beliefs) {
  std::vector<TrendBar> bars;
  if (beliefs.empty()) return bars;
  if (history.empty()) throw Error(ErrorCode::EmptySample, "predictions need a history to follow");
  TimeKey t = history.points.back().time;
  for (const auto& b : beliefs) {
    t = next_time_key(t);
    bars.push_back({t.as_year(), b.mean, b.mean - 3.0 * b.stddev, b.mean + 3.0 * b.stddev});
  }
  return bars;
}

std::string emit_trend_svg(const TimeSeries& history,
                           const std::vector<gaussian::GaussianBelief>& beliefs,
                           const PlotLabels& labels) {
  const auto bars = trend_bars(history, beliefs);
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const auto& p : history.points) {
    x_min = std::min(x_min, p.time.as_year());
    x_max = std::max(x_max, p.time.as_year());
    y_min = std::min(y_min, p.value);
    y_max = std::max(y_max, p.value);
  }
  for (const auto& b : bars) {
    x_min = std::min(x_min, b.time);
    x_max = std::max(x_max, b.time);
    y_min = std::min(y_min, b.low);
    y_max = std::max(y_max, b.high);
  }
  if (history.empty() && bars.empty()) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  const Frame f = Frame::around(x_min, x_max, y_min, y_max);

  std::string out = header(labels);
  out +=
      "<defs>\n<linearGradient id=\"bar-gradient\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"1\">\n"
      "<stop offset=\"0\" stop-color=\"#d9480f\" stop-opacity=\"0.05\"/>\n"
      "<stop offset=\"0.5\" stop-color=\"#d9480f\" stop-opacity=\"0.9\"/>\n"
      "<stop offset=\"1\" stop-color=\"#d9480f\" stop-opacity=\"0.05\"/>\n"
      "</linearGradient>\n</defs>\n";
  out += axes(f, labels);
  if (!history.empty()) {
    out += "<polyline class=\"history\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < history.points.size(); ++i) {
      const auto& p = history.points[i];
      out += (i ? " " : "") + num(f.px(p.time.as_year())) + "," + num(f.py(p.value));
    }
    out += "\"/>\n";
    for (const auto& p : history.points) {
      out += "<circle class=\"observation\" cx=\"" + num(f.px(p.time.as_year())) + "\" cy=\"" +
             num(f.py(p.value)) + "\" r=\"3\" fill=\"#1f4e9c\"/>\n";
    }
  }
  constexpr double kBarWidth = 10.0;
  for (const auto& b : bars) {
    const double x = f.px(b.time);
    out += "<rect class=\"prediction\" x=\"" + num(x - kBarWidth / 2) + "\" y=\"" + num(f.py(b.high)) +
           "\" width=\"" + num(kBarWidth) + "\" height=\"" + num(f.py(b.low) - f.py(b.high)) +
           "\" fill=\"url(#bar-gradient)\"/>\n";
    out += "<circle class=\"expectation\" cx=\"" + num(x) + "\" cy=\"" + num(f.py(b.mean)) +
           "\" r=\"3\" fill=\"#d9480f\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string emit_scatter_svg(const correlation::PairedSample& sample, const PlotLabels& labels) {
  sample.validate();
  const auto [x_lo, x_hi] = std::minmax_element(sample.x.begin(), sample.x.end());
  const auto [y_lo, y_hi] = std::minmax_element(sample.y.begin(), sample.y.end());
  const Frame f = Frame::around(*x_lo, *x_hi, *y_lo, *y_hi);
  std::string out = header(labels);
  out += axes(f, labels);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out += "<circle class=\"point\" cx=\"" + num(f.px(sample.x[i])) + "\" cy=\"" + num(f.py(sample.y[i])) +
           "\" r=\"3.5\" fill=\"#1f4e9c\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dwb::svg
