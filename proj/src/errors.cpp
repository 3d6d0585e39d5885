#include "presym/errors.hpp"

namespace presym {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedDegeneracy: return "UnsupportedDegeneracy";
    case ErrorKind::NoBranches: return "NoBranches";
    case ErrorKind::ContactMismatch: return "ContactMismatch";
    case ErrorKind::UmbilicPoint: return "UmbilicPoint";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::UnrealizableSpec: return "UnrealizableSpec";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::StationarityFailure: return "StationarityFailure";
    case ErrorKind::TrivialBranch: return "TrivialBranch";
    case ErrorKind::ExceptionalRidgeDirection: return "ExceptionalRidgeDirection";
    case ErrorKind::SingularRidge: return "SingularRidge";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace presym
