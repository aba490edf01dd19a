#include "dilute/laurent.hpp"

#include <algorithm>

namespace dilute {

cplx laurent_sample_point(int p, int bound, real radius, real offset) {
  const int P = 2 * bound + 1;
  return cplx(offset + 2 * pi * real(p) / real(P), -std::log(radius));
}

LaurentFit fit_laurent_samples(const std::vector<Matrix>& samples, int bound, real radius,
                               real offset) {
  const int P = 2 * bound + 1;
  if (int(samples.size()) != P) throw Error(ErrorKind::InterfaceMismatch, "sample count");
  LaurentFit fit;
  fit.bound = bound;
  fit.radius = radius;
  fit.offset = offset;
  std::vector<cplx> zs;
  for (int p = 0; p < P; ++p) zs.push_back(std::exp(I_unit * laurent_sample_point(p, bound, radius, offset)));
  for (int j = -bound; j <= bound; ++j) {
    Matrix c = Matrix::Zero(samples[0].rows(), samples[0].cols());
    for (int p = 0; p < P; ++p) c += samples[p] * std::pow(zs[p], -j);
    fit.coeffs.push_back(c / real(P));
  }
  return fit;
}

LaurentFit fit_laurent(const std::function<Matrix(cplx)>& F, int bound, real radius, real offset) {
  std::vector<Matrix> samples;
  for (int p = 0; p < 2 * bound + 1; ++p) samples.push_back(F(laurent_sample_point(p, bound, radius, offset)));
  return fit_laurent_samples(samples, bound, radius, offset);
}

Matrix LaurentFit::eval(cplx u) const {
  const cplx z = std::exp(I_unit * u);
  Matrix r = Matrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (int j = -bound; j <= bound; ++j) r += coeffs[j + bound] * std::pow(z, j);
  return r;
}

int LaurentFit::detected_degree(real rel_tol) const {
  std::vector<real> sizes;
  for (int j = -bound; j <= bound; ++j) sizes.push_back(norm(coeffs[j + bound]));
  const real top = *std::max_element(sizes.begin(), sizes.end());
  int deg = 0;
  for (int j = -bound; j <= bound; ++j)
    if (sizes[j + bound] > rel_tol * top) deg = std::max(deg, std::abs(j));
  return deg;
}

real fit_residual(const LaurentFit& fit, const std::function<Matrix(cplx)>& F,
                  const std::vector<cplx>& points) {
  real worst = 0;
  for (cplx u : points) worst = std::max(worst, relative_residual(fit.eval(u), F(u)));
  return worst;
}

}  // namespace dilute
