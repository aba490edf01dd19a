#pragma once

#include <functional>
#include <vector>

#include "dilute/types.hpp"

namespace dilute {

// Centered Laurent polynomial in z = e^{iu} with matrix coefficients,
// sum_{j=-D..D} C_j z^j, fitted from samples on |z| = radius.
struct LaurentFit {
  int bound = 0;
  real radius = 1;
  real offset = 0;
  std::vector<Matrix> coeffs;  // coeffs[j + bound]

  Matrix eval(cplx u) const;
  // Largest |j| whose coefficient exceeds rel_tol times the largest one.
  int detected_degree(real rel_tol = 1e-9) const;
};

// u at sample p of the circle grid used by fit_laurent.
cplx laurent_sample_point(int p, int bound, real radius, real offset);

// Exact for any Laurent polynomial of degree at most bound (2*bound+1 samples).
LaurentFit fit_laurent(const std::function<Matrix(cplx)>& F, int bound, real radius = 1,
                       real offset = 0.1);

// Same fit from samples already taken at laurent_sample_point(p, ...), p = 0..2*bound.
LaurentFit fit_laurent_samples(const std::vector<Matrix>& samples, int bound, real radius,
                               real offset);

// Max relative error between the fit and F at the given points.
real fit_residual(const LaurentFit& fit, const std::function<Matrix(cplx)>& F,
                  const std::vector<cplx>& points);

}  // namespace dilute
