#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace homex {

enum class ErrorCode {
  InvalidQuiver,
  NonHomogeneous,
  NonAdmissible,
  InvalidAlgebra,
  NotElementary,
  FieldMismatch,
  DimensionMismatch,
  AlgebraMismatch,
  InvalidModule,
  NotUnital,
  NotMultiplicative,
  NotInjective,
  NotBimoduleMorphism,
  NotAssociative,
  ArrowInRelations,
  NotSplit,
  TestsetNotCertified,
  PreconditionFailed,
  ParseError,
  UnresolvedName,
};

std::string to_string(ErrorCode code);

/// Every contract violation raised by the library. `detail` carries the
/// violating data (basis pair, relation index, ...) for reports.
class HomexError : public std::runtime_error {
 public:
  HomexError(ErrorCode code, const std::string& message, nlohmann::json detail = {})
      : std::runtime_error(to_string(code) + ": " + message), code_(code), message_(message), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  /// The message without the code prefix.
  const std::string& message() const { return message_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string message_;
  nlohmann::json detail_;
};

}  // namespace homex
