#include "qnet/error.hpp"

namespace qnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TrivialNetwork: return "TrivialNetwork";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidPacking: return "InvalidPacking";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ExactModeLimit: return "ExactModeLimit";
    case ErrorCode::OracleLimit: return "OracleLimit";
    case ErrorCode::SolverLimit: return "SolverLimit";
    case ErrorCode::HeuristicFailed: return "HeuristicFailed";
    case ErrorCode::MergeFailed: return "MergeFailed";
    case ErrorCode::KeyDepleted: return "KeyDepleted";
    case ErrorCode::IncompleteTranscript: return "IncompleteTranscript";
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::ExactModeLimit:
    case ErrorCode::OracleLimit:
    case ErrorCode::Overflow:
      return ErrorClass::ResourceLimit;
    case ErrorCode::SolverLimit:
    case ErrorCode::HeuristicFailed:
    case ErrorCode::MergeFailed:
      return ErrorClass::Internal;
    default:
      return ErrorClass::Validation;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace qnet
