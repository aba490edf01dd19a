#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "dilute/types.hpp"

namespace dilute {

struct SpectralContext {
  int N = 1;
  real lambda = 0;
  std::optional<std::pair<int, int>> ab;  // root of unity: lambda = (b-a)pi/2b
  std::optional<std::pair<int, int>> pp;  // (p,p') when given that way
  std::vector<cplx> xi;
  cplx omega{1, 0};
  cplx alpha{2, 0};
  real tolerance = 1e-9;
  // +1: a defect moving left as it travels down contributes +1 to n_omega.
  int winding_sign = 1;

  int sigma() const { return N % 2 ? -1 : 1; }
  cplx x() const { return std::polar(real(1), lambda); }
  cplx beta() const;
  bool root_of_unity() const { return ab.has_value(); }
  int a() const { return ab->first; }
  int b() const { return ab->second; }
};

bool is_singular_lambda(real lambda);
void require_nonsingular(real lambda);

real lambda_from_ab(int a, int b);
real lambda_from_pp(int p, int pprime);
std::pair<int, int> ab_from_pp(int p, int pprime);

// alpha defaults to omega + 1/omega. Throws SingularLambda / ConfigError.
SpectralContext make_context(int N, real lambda, std::vector<cplx> xi, cplx omega = 1,
                             std::optional<cplx> alpha = std::nullopt);
SpectralContext make_context_ab(int N, int a, int b, std::vector<cplx> xi, cplx omega = 1,
                                std::optional<cplx> alpha = std::nullopt);
SpectralContext make_context_pp(int N, int p, int pprime, std::vector<cplx> xi, cplx omega = 1,
                                std::optional<cplx> alpha = std::nullopt);

using FaceWeights = std::array<cplx, 9>;  // rho_1..rho_9 at index 0..8

FaceWeights face_weights(cplx u, real lambda);
cplx loop_fugacity(real lambda);

// (sin2l sin3l)^{1/2}, principal branch.
cplx weight_norm_root(real lambda);
cplx s_k(cplx u, int k, real lambda);
cplx f_k(cplx u, int k, const SpectralContext& ctx);

// sign = +1 for u -> +i infinity, -1 for u -> -i infinity.
cplx braid_eigenvalue(int d, int sign, const SpectralContext& ctx);

// Complete symmetric polynomial h_m(y1,y2,1/(y1 y2)).
cplx chebyshev_U(int m, cplx y1, cplx y2, bool limit_safe = true);
cplx chebyshev_U_recursive(int m, cplx y1, cplx y2);
cplx fused_braid_eigenvalue(int m, int d, int sign, const SpectralContext& ctx);

cplx J_eigenvalue(int d, const SpectralContext& ctx);

}  // namespace dilute
