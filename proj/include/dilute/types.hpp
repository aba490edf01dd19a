#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dilute {

#ifdef DILUTE_EXTENDED_PRECISION
using real = long double;
#else
using real = double;
#endif
using cplx = std::complex<real>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

inline const real pi = std::acos(real(-1));
inline const cplx I_unit{0, 1};

enum class ErrorKind {
  SingularLambda,
  DegenerateRoots,
  MalformedDiagram,
  InterfaceMismatch,
  UnknownIdentity,
  NearSingularU,
  IndexOutOfRange,
  DegenerateSpectrum,
  EigenvalueMismatch,
  DegenerateBracket,
  UnsupportedLabel,
  ConfigError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// (-1)^e for sign s in {+1,-1}; e may be negative.
inline int sign_pow(int s, int e) { return (s == 1 || e % 2 == 0) ? 1 : -1; }

// Frobenius norm, safe for empty matrices.
real norm(const Matrix& m);

// ||a-b|| / max(||a||,||b||), zero when both vanish.
real relative_residual(const Matrix& a, const Matrix& b);

}  // namespace dilute
