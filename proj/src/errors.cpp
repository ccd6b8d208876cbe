#include "bootpls/errors.h"

namespace bootpls {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::TooManyComponents: return "TooManyComponents";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooFewReplicates: return "TooFewReplicates";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::NoValidEta: return "NoValidEta";
    case ErrorKind::SeparationDivergence: return "SeparationDivergence";
    case ErrorKind::NonBinaryResponse: return "NonBinaryResponse";
    case ErrorKind::BoundaryNotIntegral: return "BoundaryNotIntegral";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace bootpls
