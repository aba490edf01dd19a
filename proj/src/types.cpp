#include "dilute/types.hpp"

#include <algorithm>

namespace dilute {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularLambda: return "SingularLambda";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::MalformedDiagram: return "MalformedDiagram";
    case ErrorKind::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorKind::UnknownIdentity: return "UnknownIdentity";
    case ErrorKind::NearSingularU: return "NearSingularU";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::EigenvalueMismatch: return "EigenvalueMismatch";
    case ErrorKind::DegenerateBracket: return "DegenerateBracket";
    case ErrorKind::UnsupportedLabel: return "UnsupportedLabel";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& msg)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}

real norm(const Matrix& m) { return m.size() == 0 ? real(0) : m.norm(); }

real relative_residual(const Matrix& a, const Matrix& b) {
  real scale = std::max(norm(a), norm(b));
  if (scale == 0) return 0;
  return norm(a - b) / scale;
}

}  // namespace dilute
