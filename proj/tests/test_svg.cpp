#include <doctest.h>

#include <cmath>
#include <numbers>
#include <regex>

#include "dwb/error.hpp"
#include "dwb/svg.hpp"

using namespace dwb;
using namespace dwb::svg;

namespace {

TimeSeries employment_history() {
  TimeSeries s{{6, 3}, {}};
  const double values[] = {42.0, 37.7, 36.1, 35.3, 29.5, 24.0, 24.6};
  for (int i = 0; i < 7; ++i) s.points.push_back({{2002 + i, 0}, values[i]});
  return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("standard normal density samples") {
  const auto s = distribution_samples({0, 1});
  REQUIRE(s.size() == kDensitySamples);
  CHECK(s.front().x == doctest::Approx(-4.0));
  CHECK(s.back().x == doctest::Approx(4.0));
  CHECK(s[200].x == doctest::Approx(0.0));
  CHECK(s[200].y == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].y == doctest::Approx(s[s.size() - 1 - i].y));
  try {
    distribution_samples({0, 0});
    FAIL("expected ZeroStd");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroStd);
  }
}

TEST_CASE("distribution plot is well formed and deterministic") {
  const PlotLabels labels{"Employment <2009>", "persons", "density"};
  const auto a = emit_distribution_svg({23.05, 2.29}, labels);
  CHECK(a == emit_distribution_svg({23.05, 2.29}, labels));
  CHECK(a.rfind("<?xml", 0) == 0);
  CHECK(a.find("Employment &lt;2009&gt;") != std::string::npos);
  CHECK(count(a, "<polyline class=\"density\"") == 1);
  CHECK(a.substr(a.size() - 7) == "</svg>\n");
}

TEST_CASE("trend bars span three standard deviations") {
  const auto history = employment_history();
  const std::vector<gaussian::GaussianBelief> beliefs = {{23.0, 2.0}, {21.5, 3.0}};
  const auto bars = trend_bars(history, beliefs);
  REQUIRE(bars.size() == 2);
  CHECK(bars[0].time == 2009);
  CHECK(bars[1].time == 2010);
  CHECK(bars[0].high - bars[0].low == doctest::Approx(12.0));
  CHECK(bars[1].high - bars[1].low == doctest::Approx(18.0));
  CHECK(bars[1].mean == 21.5);
}

TEST_CASE("trend plot elements") {
  const auto history = employment_history();
  const std::vector<gaussian::GaussianBelief> beliefs = {{23.0, 2.0}, {21.5, 3.0}, {20.5, 3.4}};
  const auto svg = emit_trend_svg(history, beliefs, {"Trend", "year", "value"});
  CHECK(svg.find("id=\"bar-gradient\"") != std::string::npos);
  CHECK(count(svg, "class=\"observation\"") == 7);
  CHECK(count(svg, "class=\"prediction\"") == 3);
  CHECK(count(svg, "class=\"expectation\"") == 3);
  CHECK(count(svg, "class=\"history\"") == 1);
  CHECK(svg == emit_trend_svg(history, beliefs, {"Trend", "year", "value"}));

  // Bar heights are proportional to the standard deviations.
  std::regex height_re("class=\"prediction\"[^>]*height=\"([0-9.]+)\"");
  std::vector<double> heights;
  for (std::sregex_iterator it(svg.begin(), svg.end(), height_re), end; it != end; ++it) {
    heights.push_back(std::stod((*it)[1]));
  }
  REQUIRE(heights.size() == 3);
  CHECK(heights[1] / heights[0] == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("scatter plot has one marker per pair") {
  const correlation::PairedSample s{{1, 2, 3, 4}, {2, 1, 4, 3}};
  const auto svg = emit_scatter_svg(s, {"", "x", "y"});
  CHECK(count(svg, "class=\"point\"") == 4);
  CHECK_THROWS_AS(emit_scatter_svg({{1, 2}, {1}}, {}), Error);
}
