#include "rigcheck/errors.hpp"

namespace rig {

const char* errorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NamedGeneratorPresent: return "NamedGeneratorPresent";
    case ErrorCode::NotParallel: return "NotParallel";
    case ErrorCode::UnsupportedGenerator: return "UnsupportedGenerator";
    case ErrorCode::NonUnitaryFunctor: return "NonUnitaryFunctor";
    case ErrorCode::UnassignedGenerator: return "UnassignedGenerator";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CoefficientMismatch: return "CoefficientMismatch";
    case ErrorCode::LegsNotRotationRelated: return "LegsNotRotationRelated";
    case ErrorCode::UnknownDiagram: return "UnknownDiagram";
    case ErrorCode::WitnessMissing: return "WitnessMissing";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::NoInversionAvailable: return "NoInversionAvailable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(errorName(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace rig
