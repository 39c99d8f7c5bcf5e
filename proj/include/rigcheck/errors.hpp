#pragma once

#include <stdexcept>
#include <string>

namespace rig {

enum class ErrorCode {
  Ok = 0,
  LengthMismatch,
  TypeMismatch,
  BadParams,
  NamedGeneratorPresent,
  NotParallel,
  UnsupportedGenerator,
  NonUnitaryFunctor,
  UnassignedGenerator,
  DimensionMismatch,
  CoefficientMismatch,
  LegsNotRotationRelated,
  UnknownDiagram,
  WitnessMissing,
  SignatureMismatch,
  NoInversionAvailable,
  ParseError,
  TypeError,
  IOError,
  InvalidArgument,
};

const char* errorName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace rig
