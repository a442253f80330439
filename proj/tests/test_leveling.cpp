#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dwb/error.hpp"
#include "dwb/leveling.hpp"

using namespace dwb;
using namespace dwb::leveling;

TEST_CASE("membership at a level center is one-hot") {
  const std::vector<double> b = {20, 30, 40, 50};
  CHECK(membership_vector(30, b) == std::vector<double>{0, 1, 0, 0});
}

TEST_CASE("membership midway between centers splits evenly") {
  const std::vector<double> b = {20, 30, 40};
  const auto m = membership_vector(25, b);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
  CHECK(m[2] == 0.0);
}

TEST_CASE("membership interpolates linearly") {
  // (27 - 20) / 10 = 0.7 toward level 1
  const auto m = membership_vector(27, std::vector<double>{20, 30, 40});
  CHECK(m[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(m[2] == 0.0);
}

TEST_CASE("membership clamps outside the range") {
  const std::vector<double> b = {20, 30, 40};
  CHECK(membership_vector(-1e9, b) == std::vector<double>{1, 0, 0});
  CHECK(membership_vector(41, b) == std::vector<double>{0, 0, 1});
}

TEST_CASE("membership error paths") {
  CHECK_THROWS_AS(membership_vector(NAN, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(membership_vector(1, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(membership_vector(1, std::vector<double>{2, 1}), Error);
  CHECK_THROWS_AS(membership_vector(1, std::vector<double>{1, 1}), Error);
}

TEST_CASE("synthesize") {
  SUBCASE("single index with weight 1 is the identity") {
    const MembershipMatrix m({{0.2, 0.8, 0.0}});
    CHECK(synthesize(m, std::vector<double>{1.0}) == std::vector<double>{0.2, 0.8, 0.0});
  }
  SUBCASE("identical rows are a fixed point of convex weights") {
    const MembershipMatrix m({{0.25, 0.75}, {0.25, 0.75}});
    const auto s = synthesize(m, std::vector<double>{0.5, 0.5});
    CHECK(s[0] == doctest::Approx(0.25));
    CHECK(s[1] == doctest::Approx(0.75));
  }
  SUBCASE("hand product") {
    const MembershipMatrix m({{1, 0}, {0, 1}});
    const auto s = synthesize(m, std::vector<double>{0.3, 0.7});
    CHECK(s[0] == doctest::Approx(0.3));
    CHECK(s[1] == doctest::Approx(0.7));
  }
  SUBCASE("dimension mismatch") {
    const MembershipMatrix m({{1, 0}, {0, 1}});
    try {
      synthesize(m, std::vector<double>{1.0});
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK_THROWS_AS(synthesize(m, std::vector<double>{0.5, 0.6}), Error);
  }
}

TEST_CASE("assign_level picks the maximum, ties to the lowest level") {
  CHECK(assign_level(std::vector<double>{0.3, 0.7}) == 1);
  CHECK(assign_level(std::vector<double>{0.5, 0.5}) == 0);
  CHECK(assign_level(std::vector<double>{0.2, 0.4, 0.4}) == 1);
  try {
    assign_level(std::vector<double>{});
    FAIL("expected EmptyVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyVector);
  }
}

TEST_CASE("manufacturing employment leveled by hand") {
  // Breakpoints (24, 33, 42). By hand: 42 -> center 2; 37.7 -> (0, .478, .522);
  // 36.1 -> (0, .656, .344); 35.3 -> (0, .744, .256); 29.5 -> (.389, .611, 0);
  // 24.0 -> center 0; 24.6 -> (.933, .067, 0).
  LevelingScheme scheme{{{3, {24, 33, 42}, 1.0}}};
  const auto labels = level_sequence(scheme, {{42.0, 37.7, 36.1, 35.3, 29.5, 24.0, 24.6}});
  CHECK(labels == std::vector<int>{2, 2, 1, 1, 1, 0, 0});
}

TEST_CASE("scheme text parsing") {
  const auto scheme = parse_scheme("# two indices\n3 0.25 24 33 42\n6 0.75 1e4 3e4 6e4\n");
  REQUIRE(scheme.indices.size() == 2);
  CHECK(scheme.level_count() == 3);
  CHECK(scheme.indices[1].breakpoints[2] == 6e4);
  CHECK_THROWS_AS(parse_scheme("3 0.5 1 2 3\n"), Error);         // weights sum to 0.5
  CHECK_THROWS_AS(parse_scheme("3 0.5 1 2 3\n4 0.5 1 2\n"), Error);  // level counts differ
  CHECK_THROWS_AS(parse_scheme("3 1 1\n"), Error);
}

TEST_CASE("property: partition of unity and monotone localization") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> b(2 + rng() % 6);
    double x = u(rng);
    for (auto& v : b) {
      x += 0.1 + std::abs(u(rng)) / 10;
      v = x;
    }
    double prev_value = -1e300;
    std::size_t prev_level = 0;
    std::vector<double> values(50);
    for (auto& v : values) v = u(rng) + b[b.size() / 2];
    std::sort(values.begin(), values.end());
    for (double v : values) {
      const auto m = membership_vector(v, b);
      CHECK(std::abs(std::accumulate(m.begin(), m.end(), 0.0) - 1.0) <= 1e-12);
      for (double c : m) CHECK((c >= 0.0 && c <= 1.0));
      const auto level = assign_level(m);
      if (v >= prev_value) CHECK(level >= prev_level);
      prev_value = v;
      prev_level = level;
    }
  }
}

TEST_CASE("property: synthesize is linear in the weights") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng() % 4;
    std::vector<std::vector<double>> m;
    for (std::size_t i = 0; i < rows; ++i) m.push_back(membership_vector(u(rng), std::vector<double>{0, 0.3, 0.6, 1}));
    const MembershipMatrix mm(m);
    auto random_weights = [&] {
      std::vector<double> w(rows);
      for (auto& v : w) v = u(rng);
      const double s = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& v : w) v /= s;
      // Exact unit sum for the 1e-12 check.
      w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
      return w;
    };
    const auto w1 = random_weights();
    const auto w2 = random_weights();
    const double lambda = u(rng);
    std::vector<double> mix(rows);
    for (std::size_t i = 0; i < rows; ++i) mix[i] = lambda * w1[i] + (1 - lambda) * w2[i];
    mix.back() = 1.0 - std::accumulate(mix.begin(), mix.end() - 1, 0.0);
    const auto s1 = synthesize(mm, w1);
    const auto s2 = synthesize(mm, w2);
    const auto sm = synthesize(mm, mix);
    double total = 0;
    for (std::size_t j = 0; j < sm.size(); ++j) {
      CHECK(sm[j] == doctest::Approx(lambda * s1[j] + (1 - lambda) * s2[j]).epsilon(1e-9));
      total += sm[j];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("even breakpoints span the data") {
  const auto b = even_breakpoints(std::vector<double>{3, 1, 5}, 3);
  CHECK(b == std::vector<double>{1, 3, 5});
  const auto flat = even_breakpoints(std::vector<double>{2, 2}, 2);
  CHECK(flat[0] < flat[1]);
}
