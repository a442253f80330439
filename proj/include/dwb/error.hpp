#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dwb {

enum class ErrorCode {
  // history-store
  UnknownIndustry,
  UnknownIndex,
  NonFiniteValue,
  BadRuleColumn,
  UnparseableTime,
  BadStoreFile,
  // shared numeric preconditions
  DimensionMismatch,
  InvalidArgument,
  EmptyVector,
  // markov-chain
  SequenceTooShort,
  LabelOutOfRange,
  NotStochastic,
  // linear-gaussian
  SeriesTooShort,
  DegenerateVariance,
  ZeroSigma,
  // correlation
  ZeroVariance,
  TooFewGroups,
  EmptySample,
  DegenerateControl,
  // mdp
  NonConvergence,
  // geometry / templates
  ParameterOutOfRange,
  InvalidTemplate,
  // interface
  ZeroStd,
  ParseError,
  NotFound,
};

/// Stable machine-readable name, e.g. "DegenerateVariance".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dwb
