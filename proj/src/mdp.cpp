#include "dwb/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "dwb/error.hpp"
#include "dwb/text.hpp"

namespace dwb::mdp {

MdpModel::MdpModel(std::vector<std::vector<std::vector<double>>> transitions,
                   std::vector<double> rewards, double gamma)
    : transitions_(std::move(transitions)), rewards_(std::move(rewards)), gamma_(gamma) {
  const std::size_t n = rewards_.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "model needs at least one state");
  if (!(gamma_ > 0.0 && gamma_ < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "discount must lie strictly inside (0, 1)");
  }
  if (transitions_.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "one transition block per state required");
  }
  actions_ = transitions_.front().size();
  if (actions_ == 0) throw Error(ErrorCode::InvalidArgument, "model needs at least one action");
  for (double r : rewards_) {
    if (!std::isfinite(r)) throw Error(ErrorCode::NonFiniteValue, "reward is not finite");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (transitions_[s].size() != actions_) {
      throw Error(ErrorCode::DimensionMismatch, "every state needs the same number of actions");
    }
    for (std::size_t a = 0; a < actions_; ++a) {
      const auto& row = transitions_[s][a];
      if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "transition row has wrong length");
      double sum = 0.0;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0) {
          throw Error(ErrorCode::NotStochastic, "transition probabilities must be non-negative");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::NotStochastic, "T(" + std::to_string(s) + ", " + std::to_string(a) +
                                                  ", .) does not sum to 1");
      }
    }
  }
}

double MdpModel::expected_utility(std::size_t s, std::size_t a, const UtilityVector& u) const {
  const auto& row = transitions_[s][a];
  double sum = 0.0;
  for (std::size_t next = 0; next < row.size(); ++next) sum += row[next] * u[next];
  return sum;
}

namespace {

void check_utilities(const MdpModel& model, const UtilityVector& u) {
  if (u.size() != model.states()) {
    throw Error(ErrorCode::DimensionMismatch, "utility vector length differs from state count");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
}

}  // namespace

UtilityVector bellman_update(const MdpModel& model, const UtilityVector& u) {
  check_utilities(model, u);
  UtilityVector next(model.states());
  for (std::size_t s = 0; s < model.states(); ++s) {
    double best = model.expected_utility(s, 0, u);
    for (std::size_t a = 1; a < model.actions(); ++a) best = std::max(best, model.expected_utility(s, a, u));
    next[s] = model.reward(s) + model.gamma() * best;
  }
  return next;
}

double max_norm_distance(const UtilityVector& a, const UtilityVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ValueIterationResult value_iteration(const MdpModel& model, double epsilon) {
  check_epsilon(epsilon);
  const double threshold = epsilon * (1.0 - model.gamma()) / model.gamma();
  ValueIterationResult result;
  result.utilities.assign(model.states(), 0.0);
  while (result.iterations < kIterationCap) {
    UtilityVector next = bellman_update(model, result.utilities);
    ++result.iterations;
    const double delta = max_norm_distance(next, result.utilities);
    result.utilities = std::move(next);
    if (delta < threshold) return result;
  }
  throw Error(ErrorCode::NonConvergence, "value iteration hit the iteration cap");
}

Policy extract_policy(const MdpModel& model, const UtilityVector& u) {
  check_utilities(model, u);
  Policy policy(model.states(), 0);
  for (std::size_t s = 0; s < model.states(); ++s) {
    double best = model.expected_utility(s, 0, u);
    for (std::size_t a = 1; a < model.actions(); ++a) {
      const double value = model.expected_utility(s, a, u);
      if (value > best) {
        best = value;
        policy[s] = a;
      }
    }
  }
  return policy;
}

UtilityVector evaluate_policy(const MdpModel& model, const Policy& policy, double epsilon) {
  check_epsilon(epsilon);
  if (policy.size() != model.states()) {
    throw Error(ErrorCode::DimensionMismatch, "policy length differs from state count");
  }
  for (std::size_t a : policy) {
    if (a >= model.actions()) throw Error(ErrorCode::InvalidArgument, "policy action out of range");
  }
  const double threshold = epsilon * (1.0 - model.gamma()) / model.gamma();
  UtilityVector u(model.states(), 0.0);
  for (std::size_t iter = 0; iter < kIterationCap; ++iter) {
    UtilityVector next(model.states());
    for (std::size_t s = 0; s < model.states(); ++s) {
      next[s] = model.reward(s) + model.gamma() * model.expected_utility(s, policy[s], u);
    }
    const double delta = max_norm_distance(next, u);
    u = std::move(next);
    if (delta < threshold) return u;
  }
  throw Error(ErrorCode::NonConvergence, "policy evaluation hit the iteration cap");
}

namespace {

const char* const kSections[] = {"STATES", "ACTIONS", "GAMMA", "REWARDS", "TRANSITION"};

bool is_section(const std::string& line) {
  return std::find(std::begin(kSections), std::end(kSections), line) != std::end(kSections);
}

std::vector<std::string> tokens_of(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  for (const auto& line : lines) {
    std::istringstream in(line);
    for (std::string tok; in >> tok;) out.push_back(tok);
  }
  return out;
}

double number(const std::string& tok, const char* what) {
  auto v = text::parse_double(tok);
  if (!v) throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + tok + "'");
  return *v;
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorCode::ParseError, std::string("unknown ") + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

MdpModel parse_spec(std::string_view content) {
  std::map<std::string, std::vector<std::string>> sections;
  std::string current;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (is_section(trimmed)) {
      current = trimmed;
      if (sections.contains(current)) throw Error(ErrorCode::ParseError, "duplicate section " + current);
      sections[current];
      continue;
    }
    if (current.empty()) throw Error(ErrorCode::ParseError, "content before the first section");
    sections[current].push_back(trimmed);
  }
  for (const char* name : kSections) {
    if (!sections.contains(name)) throw Error(ErrorCode::ParseError, std::string("missing section ") + name);
  }

  auto names_from = [](const std::vector<std::string>& tokens, const char* prefix) {
    // A single integer means "that many unnamed entries".
    if (tokens.size() == 1) {
      if (auto count = text::parse_int(tokens.front()); count && *count > 0) {
        std::vector<std::string> names;
        for (long long i = 0; i < *count; ++i) names.push_back(prefix + std::to_string(i));
        return names;
      }
    }
    return tokens;
  };
  const auto states = names_from(tokens_of(sections["STATES"]), "s");
  const auto actions = names_from(tokens_of(sections["ACTIONS"]), "a");
  const std::size_t n = states.size();
  const std::size_t m = actions.size();
  if (n == 0 || m == 0) throw Error(ErrorCode::ParseError, "STATES and ACTIONS must be non-empty");

  const auto gamma_tokens = tokens_of(sections["GAMMA"]);
  if (gamma_tokens.size() != 1) throw Error(ErrorCode::ParseError, "GAMMA takes exactly one number");
  const double gamma = number(gamma_tokens.front(), "gamma");

  const auto reward_tokens = tokens_of(sections["REWARDS"]);
  if (reward_tokens.size() != n) throw Error(ErrorCode::ParseError, "REWARDS needs one value per state");
  std::vector<double> rewards;
  for (const auto& tok : reward_tokens) rewards.push_back(number(tok, "reward"));

  std::vector<std::vector<std::vector<double>>> t(n, std::vector<std::vector<double>>(m));
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(m, false));
  std::size_t ordinal = 0;
  for (const auto& row_line : sections["TRANSITION"]) {
    std::string probs = row_line;
    std::size_t s = ordinal / m;
    std::size_t a = ordinal % m;
    if (auto colon = row_line.find(':'); colon != std::string::npos) {
      std::istringstream label(row_line.substr(0, colon));
      std::string state_name, action_name, extra;
      if (!(label >> state_name >> action_name) || (label >> extra)) {
        throw Error(ErrorCode::ParseError, "transition label must be '<state> <action>:'");
      }
      s = index_of(states, state_name, "state");
      a = index_of(actions, action_name, "action");
      probs = row_line.substr(colon + 1);
    } else if (ordinal >= n * m) {
      throw Error(ErrorCode::ParseError, "too many TRANSITION rows");
    }
    if (seen[s][a]) throw Error(ErrorCode::ParseError, "duplicate transition row for " + states[s] + " " + actions[a]);
    seen[s][a] = true;
    for (const auto& tok : tokens_of({probs})) t[s][a].push_back(number(tok, "probability"));
    if (t[s][a].size() != n) {
      throw Error(ErrorCode::ParseError, "transition row " + states[s] + " " + actions[a] + " needs " +
                                             std::to_string(n) + " probabilities");
    }
    ++ordinal;
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < m; ++a) {
      if (!seen[s][a]) throw Error(ErrorCode::ParseError, "missing transition row for " + states[s] + " " + actions[a]);
    }
  }

  MdpModel model(std::move(t), std::move(rewards), gamma);
  model.state_names = states;
  model.action_names = actions;
  return model;
}

std::string to_spec(const MdpModel& model) {
  auto name = [](const std::vector<std::string>& names, std::size_t i, const char* prefix) {
    return i < names.size() ? names[i] : prefix + std::to_string(i);
  };
  std::string out = "STATES\n";
  for (std::size_t s = 0; s < model.states(); ++s) out += (s ? " " : "") + name(model.state_names, s, "s");
  out += "\nACTIONS\n";
  for (std::size_t a = 0; a < model.actions(); ++a) out += (a ? " " : "") + name(model.action_names, a, "a");
  out += "\nGAMMA\n" + text::format_shortest(model.gamma()) + "\nREWARDS\n";
  for (std::size_t s = 0; s < model.states(); ++s) out += (s ? " " : "") + text::format_shortest(model.reward(s));
  out += "\nTRANSITION\n";
  for (std::size_t s = 0; s < model.states(); ++s) {
    for (std::size_t a = 0; a < model.actions(); ++a) {
      out += name(model.state_names, s, "s") + " " + name(model.action_names, a, "a") + ":";
      for (double p : model.transition(s, a)) out += " " + text::format_shortest(p);
      out += "\n";
    }
  }
  return out;
}

}  // namespace dwb::mdp
