#ifndef PRESYM_ERRORS_HPP
#define PRESYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace presym {

enum class ErrorKind {
  UnsupportedDegeneracy,
  NoBranches,
  ContactMismatch,
  UmbilicPoint,
  NotTangent,
  Degenerate,
  UnrealizableSpec,
  NoConvergence,
  SingularJacobian,
  StationarityFailure,
  TrivialBranch,
  ExceptionalRidgeDirection,
  SingularRidge,
  IllConditioned,
  ParseError,
};

const char* to_string(ErrorKind kind);

/// Every failure surfaced by the library carries a kind so the CLI can map it
/// onto exit codes and reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace presym

#endif  // PRESYM_ERRORS_HPP
