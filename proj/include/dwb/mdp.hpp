#pragma once

// Finite Markov decision processes solved by value iteration.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dwb::mdp {

using UtilityVector = std::vector<double>;
using Policy = std::vector<std::size_t>;

class MdpModel {
 public:
  /// `transitions` is indexed [s][a][s']. Validates stochastic rows (1e-9),
  /// non-negative entries and 0 < gamma < 1.
  MdpModel(std::vector<std::vector<std::vector<double>>> transitions, std::vector<double> rewards,
           double gamma);

  std::size_t states() const { return rewards_.size(); }
  std::size_t actions() const { return actions_; }
  double gamma() const { return gamma_; }
  double reward(std::size_t s) const { return rewards_[s]; }
  const std::vector<double>& rewards() const { return rewards_; }
  const std::vector<double>& transition(std::size_t s, std::size_t a) const { return transitions_[s][a]; }

  /// Sum over s' of T(s, a, s') U(s').
  double expected_utility(std::size_t s, std::size_t a, const UtilityVector& u) const;

  std::vector<std::string> state_names;
  std::vector<std::string> action_names;

 private:
  std::vector<std::vector<std::vector<double>>> transitions_;
  std::vector<double> rewards_;
  std::size_t actions_ = 0;
  double gamma_ = 0.0;
};

inline constexpr std::size_t kIterationCap = 1'000'000;

/// U'(s) = R(s) + gamma max_a sum_s' T(s, a, s') U(s').
UtilityVector bellman_update(const MdpModel& model, const UtilityVector& u);

struct ValueIterationResult {
  UtilityVector utilities;
  std::size_t iterations = 0;
};

/// Starts from U = 0 and stops once the max-norm change drops below
/// epsilon (1 - gamma) / gamma, which bounds the error against U* by epsilon.
ValueIterationResult value_iteration(const MdpModel& model, double epsilon);

/// Greedy action per state; ties go to the lowest action index.
Policy extract_policy(const MdpModel& model, const UtilityVector& u);

/// Iterates U = R + gamma T_pi U under the same stopping rule.
UtilityVector evaluate_policy(const MdpModel& model, const Policy& policy, double epsilon = 1e-8);

double max_norm_distance(const UtilityVector& a, const UtilityVector& b);

/// Plain-text model file with sections STATES, ACTIONS, GAMMA, REWARDS and
/// TRANSITION. TRANSITION rows come one per (state, action) pair, either in
/// state-major order or labelled `<state> <action>: p0 p1 ...`.
MdpModel parse_spec(std::string_view content);
std::string to_spec(const MdpModel& model);

}  // namespace dwb::mdp
