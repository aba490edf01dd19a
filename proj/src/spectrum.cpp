#include "dilute/spectrum.hpp"

#include <Eigen/Eigenvalues>

namespace dilute {

CommonEigenbasis::CommonEigenbasis(const std::vector<Matrix>& generators, std::mt19937_64& rng,
                                   int retries, real tol) {
  if (generators.empty()) throw Error(ErrorKind::DegenerateSpectrum, "no generators");
  std::normal_distribution<double> g(0, 1);
  real best = 1;
  for (int attempt = 0; attempt < retries; ++attempt) {
    Matrix A = Matrix::Zero(generators[0].rows(), generators[0].cols());
    for (const Matrix& M : generators) {
      const cplx c(real(g(rng)), real(g(rng)));
      A += c * M / std::max(norm(M), real(1e-300));
    }
    Eigen::ComplexEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) continue;
    Matrix V = es.eigenvectors();
    Eigen::PartialPivLU<Matrix> lu(V);
    if (std::abs(lu.determinant()) < real(1e-12)) continue;
    V_ = V;
    Vinv_ = lu.inverse();
    real worst = 0;
    for (const Matrix& M : generators) worst = std::max(worst, diagonality_defect(M));
    if (worst < tol) return;
    best = std::min(best, worst);
  }
  throw Error(ErrorKind::DegenerateSpectrum,
              "common diagonalization failed, defect " + std::to_string(double(best)));
}

Vector CommonEigenbasis::eigenvalues(const Matrix& M) const { return (Vinv_ * M * V_).diagonal(); }

real CommonEigenbasis::diagonality_defect(const Matrix& M) const {
  Matrix D = Vinv_ * M * V_;
  const real total = norm(D);
  if (total == 0) return 0;
  Matrix off = D;
  off.diagonal().setZero();
  return norm(off) / total;
}

}  // namespace dilute
