#include "congest/error.hpp"

namespace congest {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kEmptyDomain: return "EmptyDomain";
    case ErrorKind::kDisconnectedDomain: return "DisconnectedDomain";
    case ErrorKind::kOutsideDomain: return "OutsideDomain";
    case ErrorKind::kZeroMass: return "ZeroMass";
    case ErrorKind::kNegativeDensity: return "NegativeDensity";
    case ErrorKind::kNegativeMetric: return "NegativeMetric";
    case ErrorKind::kInvalidPath: return "InvalidPath";
    case ErrorKind::kUnbalancedMarginals: return "UnbalancedMarginals";
    case ErrorKind::kInconsistentMarginals: return "InconsistentMarginals";
    case ErrorKind::kInfiniteCost: return "InfiniteCost";
    case ErrorKind::kUnreachableNode: return "UnreachableNode";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIO: return "IOError";
    case ErrorKind::kInternal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace congest
