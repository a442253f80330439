#include "dwb/error.hpp"

namespace dwb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownIndustry: return "UnknownIndustry";
    case ErrorCode::UnknownIndex: return "UnknownIndex";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::BadRuleColumn: return "BadRuleColumn";
    case ErrorCode::UnparseableTime: return "UnparseableTime";
    case ErrorCode::BadStoreFile: return "BadStoreFile";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ZeroSigma: return "ZeroSigma";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateControl: return "DegenerateControl";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::InvalidTemplate: return "InvalidTemplate";
    case ErrorCode::ZeroStd: return "ZeroStd";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace dwb
