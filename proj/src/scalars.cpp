#include "dilute/scalars.hpp"

#include <numeric>
#include <sstream>

namespace dilute {

cplx SpectralContext::beta() const { return loop_fugacity(lambda); }

bool is_singular_lambda(real lambda) {
  return std::abs(std::sin(2 * lambda) * std::sin(3 * lambda)) < real(1e-9);
}

void require_nonsingular(real lambda) {
  if (is_singular_lambda(lambda)) {
    std::ostringstream os;
    os << "lambda=" << double(lambda) << " makes sin(2 lambda) sin(3 lambda) vanish";
    throw Error(ErrorKind::SingularLambda, os.str());
  }
}

real lambda_from_ab(int a, int b) { return real(b - a) * pi / real(2 * b); }

real lambda_from_pp(int p, int pprime) { return real(2 * pprime - p) * pi / real(4 * pprime); }

std::pair<int, int> ab_from_pp(int p, int pprime) {
  if (p <= 0 || pprime <= 0 || std::gcd(p, pprime) != 1)
    throw Error(ErrorKind::ConfigError, "pp: p and p' must be coprime positive integers");
  if (p % 2) return {p, 2 * pprime};
  return {p / 2, pprime};
}

SpectralContext make_context(int N, real lambda, std::vector<cplx> xi, cplx omega,
                             std::optional<cplx> alpha) {
  if (N < 1) throw Error(ErrorKind::ConfigError, "N must be positive");
  if (xi.empty()) xi.assign(N, cplx(0));
  if (int(xi.size()) != N) throw Error(ErrorKind::ConfigError, "xi must have N entries");
  require_nonsingular(lambda);
  SpectralContext c;
  c.N = N;
  c.lambda = lambda;
  c.xi = std::move(xi);
  c.omega = omega;
  c.alpha = alpha ? *alpha : omega + real(1) / omega;
  return c;
}

SpectralContext make_context_ab(int N, int a, int b, std::vector<cplx> xi, cplx omega,
                                std::optional<cplx> alpha) {
  if (b < 2 || std::gcd(a, b) != 1)
    throw Error(ErrorKind::ConfigError, "ab: need gcd(a,b)=1 and b>=2");
  SpectralContext c = make_context(N, lambda_from_ab(a, b), std::move(xi), omega, alpha);
  c.ab = std::make_pair(a, b);
  return c;
}

SpectralContext make_context_pp(int N, int p, int pprime, std::vector<cplx> xi, cplx omega,
                                std::optional<cplx> alpha) {
  auto [a, b] = ab_from_pp(p, pprime);
  SpectralContext c = make_context_ab(N, a, b, std::move(xi), omega, alpha);
  c.pp = std::make_pair(p, pprime);
  return c;
}

FaceWeights face_weights(cplx u, real lambda) {
  require_nonsingular(lambda);
  const real l = lambda;
  const real s3 = std::sin(3 * l);
  const real s23 = std::sin(2 * l) * s3;
  const cplx su = std::sin(u);
  const cplx s3u = std::sin(cplx(3 * l) - u);
  FaceWeights r;
  r[0] = real(1) + su * s3u / s23;
  r[1] = r[2] = s3u / s3;
  r[3] = r[4] = su / s3;
  r[5] = r[6] = su * s3u / s23;
  r[7] = std::sin(cplx(2 * l) - u) * s3u / s23;
  r[8] = -su * std::sin(cplx(l) - u) / s23;
  return r;
}

cplx loop_fugacity(real lambda) { return cplx(-2 * std::cos(4 * lambda)); }

cplx weight_norm_root(real lambda) {
  require_nonsingular(lambda);
  return std::sqrt(cplx(std::sin(2 * lambda) * std::sin(3 * lambda)));
}

cplx s_k(cplx u, int k, real lambda) {
  return std::sin(u + real(k) * lambda) / weight_norm_root(lambda);
}

cplx f_k(cplx u, int k, const SpectralContext& ctx) {
  const cplx root = weight_norm_root(ctx.lambda);
  cplx r = 1;
  for (const cplx& xi : ctx.xi) r *= std::sin(u - xi + real(k) * ctx.lambda) / root;
  return r;
}

namespace {
cplx braid_phase(int d, int sign, real lambda) {
  return std::polar(real(1), -real(sign) * (pi - 2 * lambda) * real(d));
}
}  // namespace

cplx braid_eigenvalue(int d, int sign, const SpectralContext& ctx) {
  if (d == 0) return ctx.alpha + real(1);
  const cplx y = ctx.omega * braid_phase(d, sign, ctx.lambda);
  return y + real(1) + real(1) / y;
}

cplx chebyshev_U_recursive(int m, cplx y1, cplx y2) {
  if (m < 0) return 0;
  const cplx y3 = real(1) / (y1 * y2);
  const cplx e1 = y1 + y2 + y3;
  const cplx e2 = y1 * y2 + y1 * y3 + y2 * y3;
  const cplx e3 = 1;
  std::vector<cplx> h(m + 1);
  for (int k = 0; k <= m; ++k) {
    if (k == 0) {
      h[0] = 1;
      continue;
    }
    cplx v = e1 * h[k - 1];
    if (k >= 2) v -= e2 * h[k - 2];
    if (k >= 3) v += e3 * h[k - 3];
    h[k] = v;
  }
  return h[m];
}

cplx chebyshev_U(int m, cplx y1, cplx y2, bool limit_safe) {
  if (m < 0) return 0;
  const cplx y3 = real(1) / (y1 * y2);
  const real tol = 1e-8;
  if (std::abs(y1 - y2) < tol || std::abs(y1 - y3) < tol || std::abs(y2 - y3) < tol) {
    if (!limit_safe) throw Error(ErrorKind::DegenerateRoots, "colliding y values");
    return chebyshev_U_recursive(m, y1, y2);
  }
  const cplx num = std::pow(y1, m + 2) * (y2 - y3) + std::pow(y2, m + 2) * (y3 - y1) +
                   std::pow(y3, m + 2) * (y1 - y2);
  return num / ((y1 - y2) * (y1 - y3) * (y2 - y3));
}

cplx fused_braid_eigenvalue(int m, int d, int sign, const SpectralContext& ctx) {
  const cplx y = ctx.omega * braid_phase(d, sign, ctx.lambda);
  return chebyshev_U(m, y, 1);
}

cplx J_eigenvalue(int d, const SpectralContext& ctx) {
  if (!ctx.ab) throw Error(ErrorKind::ConfigError, "J requires a root-of-unity context");
  const int a = ctx.a(), b = ctx.b();
  const cplx wb = std::pow(ctx.omega, b);
  const cplx v = real(sign_pow(-1, a * d)) * (wb + real(1) / wb) + real(1);
  return real(sign_pow(ctx.sigma(), -a)) * v;
}

}  // namespace dilute
