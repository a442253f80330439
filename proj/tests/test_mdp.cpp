#include <functional>
#include <doctest.h>

#include <cmath>
#include <random>

#include "dwb/error.hpp"
#include "dwb/mdp.hpp"
#include "oracles.hpp"

using namespace dwb;
using namespace dwb::mdp;

namespace {

using Transitions = std::vector<std::vector<std::vector<double>>>;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NotFound;
}

Transitions random_transitions(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Transitions t(n, std::vector<std::vector<double>>(m, std::vector<double>(n)));
  for (auto& per_state : t) {
    for (auto& row : per_state) {
      double sum = 0;
      for (auto& p : row) sum += p = u(rng) < 0.3 ? 0.0 : u(rng);
      if (sum == 0) {
        row[0] = sum = 1;
      }
      for (auto& p : row) p /= sum;
    }
  }
  return t;
}

}  // namespace

TEST_CASE("single state geometric series") {
  const MdpModel m({{{1.0}}}, {1.0}, 0.9);
  const auto r = value_iteration(m, 1e-10);
  CHECK(std::abs(r.utilities[0] - 10.0) <= 1e-10);
  CHECK(bellman_update(m, {0.0}) == std::vector<double>{1.0});
  CHECK(bellman_update(m, {10.0})[0] == doctest::Approx(10.0));
}

TEST_CASE("zero rewards give zero utilities") {
  std::mt19937_64 rng(1);
  const MdpModel m(random_transitions(3, 2, rng), {0, 0, 0}, 0.9);
  const auto r = value_iteration(m, 1e-8);
  CHECK(r.utilities == std::vector<double>{0, 0, 0});
}

TEST_CASE("two-state hand example") {
  // State 0: action 0 stays, action 1 moves to the rewarding state 1 which is absorbing.
  const Transitions t = {{{1, 0}, {0, 1}}, {{0, 1}, {0, 1}}};
  const MdpModel m(t, {0, 1}, 0.5);
  const auto r = value_iteration(m, 1e-12);
  CHECK(r.utilities[1] == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(r.utilities[0] == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(extract_policy(m, r.utilities) == Policy{1, 0});
}

TEST_CASE("policy ties go to the lowest action") {
  const Transitions t = {{{1}, {1}, {1}}};
  const MdpModel m(t, {2}, 0.5);
  CHECK(extract_policy(m, value_iteration(m, 1e-8).utilities) == Policy{0});
}

TEST_CASE("model validation") {
  CHECK(code_of([] { MdpModel({{{0.5, 0.4}}, {{1, 0}}}, {0, 0}, 0.9); }) == ErrorCode::NotStochastic);
  CHECK(code_of([] { MdpModel({{{1.2, -0.2}}, {{1, 0}}}, {0, 0}, 0.9); }) == ErrorCode::NotStochastic);
  CHECK(code_of([] { MdpModel({{{1}}}, {0}, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MdpModel({{{1}}}, {0}, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MdpModel({{{1}}}, {0, 1}, 0.5); }) == ErrorCode::DimensionMismatch);
  const MdpModel ok({{{1}}}, {1}, 0.5);
  CHECK(code_of([&] { value_iteration(ok, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: value iteration matches exhaustive policy enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> reward(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t a = 1 + rng() % 3;
    const double gamma = std::vector<double>{0.5, 0.9, 0.99}[trial % 3];
    auto t = random_transitions(n, a, rng);
    std::vector<double> r(n);
    for (auto& v : r) v = reward(rng);
    const MdpModel m(t, r, gamma);
    const auto vi = value_iteration(m, 1e-8);
    const auto best = oracle::enumerate_policies(t, r, gamma);
    const auto policy = extract_policy(m, vi.utilities);
    const auto achieved = oracle::policy_utilities(t, r, gamma, policy);
    for (std::size_t s = 0; s < n; ++s) {
      CHECK(std::abs(vi.utilities[s] - best.best[s]) <= 1e-8);
      CHECK(std::abs(achieved[s] - best.best[s]) <= 1e-8);
    }
    // Bellman residual bound.
    const auto next = bellman_update(m, vi.utilities);
    CHECK(max_norm_distance(next, vi.utilities) <= 1e-8);

    const auto evaluated = evaluate_policy(m, policy);
    for (std::size_t s = 0; s < n; ++s) CHECK(std::abs(evaluated[s] - achieved[s]) <= 1e-8);
  }
}

TEST_CASE("property: bellman update is a gamma contraction") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const double gamma = 0.05 + (rng() % 90) / 100.0;
    std::vector<double> r(n);
    for (auto& v : r) v = u(rng);
    const MdpModel m(random_transitions(n, 1 + rng() % 3, rng), r, gamma);
    UtilityVector a(n), b(n);
    for (std::size_t s = 0; s < n; ++s) {
      a[s] = u(rng);
      b[s] = u(rng);
    }
    CHECK(max_norm_distance(bellman_update(m, a), bellman_update(m, b)) <=
          gamma * max_norm_distance(a, b) + 1e-12);
  }
}

TEST_CASE("property: reward shift moves utilities by c / (1 - gamma)") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const double gamma = 0.9;
    const auto t = random_transitions(n, 2, rng);
    std::vector<double> r(n), shifted(n);
    for (std::size_t s = 0; s < n; ++s) {
      r[s] = static_cast<double>(rng() % 10);
      shifted[s] = r[s] + 3.0;
    }
    const auto u = value_iteration(MdpModel(t, r, gamma), 1e-9).utilities;
    const auto v = value_iteration(MdpModel(t, shifted, gamma), 1e-9).utilities;
    for (std::size_t s = 0; s < n; ++s) CHECK(std::abs(v[s] - u[s] - 30.0) <= 2e-9);
  }
}

TEST_CASE("spec parsing") {
  SUBCASE("named, labelled rows") {
    const auto m = parse_spec(
        "# weather\nSTATES\nsun rain\nACTIONS\nwait go\nGAMMA\n0.9\nREWARDS\n1 -1\n"
        "TRANSITION\nsun wait: 0.8 0.2\nsun go: 0.5 0.5\nrain wait: 0.3 0.7\nrain go: 1 0\n");
    CHECK(m.states() == 2);
    CHECK(m.actions() == 2);
    CHECK(m.state_names == std::vector<std::string>{"sun", "rain"});
    CHECK(m.transition(1, 0) == std::vector<double>{0.3, 0.7});
    const auto again = parse_spec(to_spec(m));
    CHECK(again.transition(0, 1) == m.transition(0, 1));
    CHECK(again.rewards() == m.rewards());
    CHECK(again.gamma() == m.gamma());
  }
  SUBCASE("counts and state-major rows") {
    const auto m = parse_spec("STATES\n2\nACTIONS\n1\nGAMMA\n0.5\nREWARDS\n0 1\nTRANSITION\n0 1\n0 1\n");
    CHECK(m.state_names == std::vector<std::string>{"s0", "s1"});
    CHECK(m.action_names == std::vector<std::string>{"a0"});
    CHECK(value_iteration(m, 1e-10).utilities[1] == doctest::Approx(2.0));
  }
  SUBCASE("errors") {
    CHECK(code_of([] { parse_spec("STATES\n1\nACTIONS\n1\nGAMMA\n0.5\nREWARDS\n1\n"); }) ==
          ErrorCode::ParseError);
    CHECK(code_of([] { parse_spec("STATES\n1\nACTIONS\n1\nGAMMA\nx\nREWARDS\n1\nTRANSITION\n1\n"); }) ==
          ErrorCode::ParseError);
    CHECK(code_of([] {
            parse_spec("STATES\n1\nACTIONS\n1\nGAMMA\n0.5\nREWARDS\n1\nTRANSITION\n0.5\n");
          }) == ErrorCode::NotStochastic);
  }
}
