#pragma once

#include <random>
#include <vector>

#include "dilute/types.hpp"

namespace dilute {

// Eigenbasis shared by a commuting family, taken from a random combination
// of the generators.
class CommonEigenbasis {
 public:
  // Throws DegenerateSpectrum when no combination in `retries` attempts
  // diagonalizes every generator to within tol.
  CommonEigenbasis(const std::vector<Matrix>& generators, std::mt19937_64& rng, int retries = 5,
                   real tol = 1e-8);

  int size() const { return int(V_.cols()); }
  // Diagonal of V^{-1} M V.
  Vector eigenvalues(const Matrix& M) const;
  // Off-diagonal mass of V^{-1} M V relative to its norm.
  real diagonality_defect(const Matrix& M) const;

 private:
  Matrix V_, Vinv_;
};

}  // namespace dilute
