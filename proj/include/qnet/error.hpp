#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnet {

enum class ErrorCode {
  MalformedInput,
  SelfLoop,
  DuplicateEdge,
  NegativeValue,
  UnknownNode,
  DuplicateNode,
  Disconnected,
  TrivialNetwork,
  InvalidSubset,
  InvalidPartition,
  InvalidPacking,
  InvalidEdge,
  PreconditionFailed,
  ExactModeLimit,
  OracleLimit,
  SolverLimit,
  HeuristicFailed,
  MergeFailed,
  KeyDepleted,
  IncompleteTranscript,
  EmptyPlan,
  Overflow,
};

std::string_view to_string(ErrorCode code);

/// Coarse classification used by the CLI exit-code contract.
enum class ErrorClass { Validation, ResourceLimit, Internal };

ErrorClass classify(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  /// `detail` is an optional JSON document with partial state.
  Error(ErrorCode code, const std::string& message, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace qnet
