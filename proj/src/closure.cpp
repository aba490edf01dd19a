#include "dilute/closure.hpp"

#include <algorithm>
#include <sstream>

#include "dilute/transfer.hpp"

namespace dilute {

namespace {

using Sides = std::pair<Matrix, Matrix>;

real rel(cplx a, cplx b) {
  const real s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

template <class Fam>
Sides closure_sides(const std::string& id, int k, Fam& F, const Matrix& J, int a, int b) {
  const int s = F.sigma();
  auto sg = [&](int e) { return real(sign_pow(s, e)); };
  auto T = [&](int m, int n, int j) -> Matrix { return F.fused(m, n, j); };
  auto f = [&](int j) { return F.f(j); };
  const Matrix I = F.identity();
  if (id == "closure_b0") {
    if (b >= 4)
      return {f(-1) * T(b, 0, 0), sg(b - a - 1) * T(b - 2, 1, 2) - sg(1) * f(-3) * T(b - 3, 0, 4) +
                                      f(-3) * f(-2) * f(-1) * J};
    if (b == 3)
      return {f(-1) * T(3, 0, 0), sg(a) * T(1, 1, 2) - sg(1) * f(-5) * f(-4) * f(-3) * I +
                                      f(-3) * f(-2) * f(-1) * J};
    return {T(2, 0, 0), T(0, 1, 2) + f(-3) * f(-2) * J};
  }
  if (id == "closure_0b") {
    if (b >= 4)
      return {f(-3) * T(0, b, 0), sg(1) * T(1, b - 2, 0) - sg(1) * f(-1) * T(0, b - 3, 2) +
                                      f(-3) * f(-2) * f(-1) * J};
    if (b == 3)
      return {f(-3) * T(0, 3, 0), sg(1) * T(1, 1, 0) - sg(1) * f(-1) * f(0) * f(1) * I +
                                      f(-3) * f(-2) * f(-1) * J};
    return {T(0, 2, 0), T(1, 0, 0) + f(-2) * f(-1) * J};
  }
  if (id == "closure_bk" || id == "closure_kb") {
    if (k < 1 || k > b - 1) throw Error(ErrorKind::IndexOutOfRange, "closure row index outside 1..b-1");
    const bool left = id == "closure_bk";
    if (k <= b - 4) {
      if (left)
        return {T(b, k, 0), sg(1) * T(b - 2, k + 1, 2) - sg(b - a - 1) * f(-3) * T(b - 3 - k, 0, 2 * k + 4) +
                                sg(b - a) * f(-3) * J * T(0, k, 0)};
      return {T(k, b, 0), sg(1) * T(k + 1, b - 2, 0) - sg(1) * f(2 * k - 1) * T(0, b - 3 - k, 2 * k + 2) +
                              f(2 * k - 1) * J * T(k, 0, 0)};
    }
    if (k == b - 3) {
      if (left)
        return {T(b, b - 3, 0), sg(1) * T(b - 2, b - 2, 2) - sg(b - a - 1) * f(-5) * f(-4) * f(-3) * I +
                                    sg(b - a) * f(-3) * J * T(0, b - 3, 0)};
      return {T(b - 3, b, 0), sg(1) * T(b - 2, b - 2, 0) -
                                  sg(1) * f(2 * b - 7) * f(2 * b - 6) * f(2 * b - 5) * I +
                                  f(2 * b - 7) * J * T(b - 3, 0, 0)};
    }
    if (b == 2) {
      // T^{0,2} and T^{2,0} are boundary labels here, so the leading term picks up an f.
      if (left) return {T(2, 1, 0), f(3) * T(0, 2, 2) + sg(1) * f(-3) * J * T(0, 1, 0)};
      return {T(1, 2, 0), f(-1) * T(2, 0, 0) + f(1) * J * T(1, 0, 0)};
    }
    if (k == b - 2) {
      if (left)
        return {T(b, b - 2, 0), sg(1) * T(b - 2, b - 1, 2) + sg(b - a) * f(-3) * J * T(0, b - 2, 0)};
      return {T(b - 2, b, 0), sg(1) * T(b - 1, b - 2, 0) + sg(b - a) * f(-5) * J * T(b - 2, 0, 0)};
    }
    if (left) return {T(b, b - 1, 0), sg(1) * T(b - 2, b, 2) + sg(b - a) * f(-3) * J * T(0, b - 1, 0)};
    return {T(b - 1, b, 0), sg(1) * T(b, b - 2, 0) + sg(b - a) * f(-3) * J * T(b - 1, 0, 0)};
  }
  if (id == "quartic") {
    // On the (0,n) side the label (0,0) follows the folding T^{0,m}_k = T^{m,0}_{k+1}.
    auto T0 = [&](int n, int j) -> Matrix { return n == 0 ? Matrix(f(j - 2) * f(j - 1) * I) : T(0, n, j); };
    const Matrix A = T(b - 1, 0, 0), B = T(0, b - 1, 0), C = T(b - 2, 0, 2), D = T0(b - 2, 0);
    const Matrix E = T(b - 1, 0, 2), G = T0(b - 2, 2);
    const Matrix lhs = (A * B - C * D) * (E * B - C * G);
    const Matrix rhs = f(-3) * f(-2) *
                       (sg(a - 1) * B * B * B + J * B * B * C + sg(1) * J * B * C * C + sg(a) * C * C * C);
    return {lhs, rhs};
  }
  throw Error(ErrorKind::UnknownIdentity, "unknown closure relation " + id);
}

void require_root(const SpectralContext& ctx) {
  if (!ctx.root_of_unity()) throw Error(ErrorKind::ConfigError, "closure checks need a root-of-unity context");
}

}  // namespace

real check_root_symmetries(const SpectralContext& ctx, const ModuleBasis& basis, cplx u,
                           FusionSource source) {
  require_root(ctx);
  FusedFamily F(ctx, basis, u, source);
  const int a = ctx.a(), b = ctx.b();
  const real sab = real(sign_pow(ctx.sigma(), b - a));
  real worst = 0;
  for (int k = -3; k <= 3; ++k) {
    worst = std::max(worst, rel(F.f(k + 2 * b), sab * F.f(k)));
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {0, 1}, {0, 2}})
      worst = std::max(worst, relative_residual(F.fused(m, n, k + 2 * b), F.fused(m, n, k)));
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}})
      worst = std::max(worst, relative_residual(F.fused(m, n, k + 2 * b), sab * F.fused(m, n, k)));
  }
  return worst;
}

Matrix compute_J(const ModuleBasis& basis, const SpectralContext& ctx, int sign) {
  require_root(ctx);
  const int a = ctx.a(), b = ctx.b();
  const Matrix sum = braid_fused(b, 0, sign, basis, ctx) - braid_fused(b - 2, 1, sign, basis, ctx) +
                     braid_fused(b - 3, 0, sign, basis, ctx);
  return real(sign_pow(ctx.sigma(), a)) * sum;
}

namespace {

Matrix J_from_closure(FusedFamily& F, int a, int b) {
  const int D = F.basis().size();
  auto [lhs, rest] = closure_sides("closure_b0", 0, F, Matrix::Zero(D, D), a, b);
  const cplx coef = b == 2 ? F.f(-3) * F.f(-2) : F.f(-3) * F.f(-2) * F.f(-1);
  return (lhs - rest) / coef;
}

}  // namespace

JCheck check_J(const ModuleBasis& basis, const SpectralContext& ctx, cplx u1, cplx u2,
               FusionSource source, real tol) {
  JCheck c;
  const Matrix Jp = compute_J(basis, ctx, 1), Jm = compute_J(basis, ctx, -1);
  const int D = basis.size();
  c.sign_agreement = relative_residual(Jp, Jm);
  c.eigenvalue = Jp.trace() / real(D);
  c.scalar_defect = norm(Jp - c.eigenvalue * Matrix::Identity(D, D)) / std::max(norm(Jp), real(1e-300));
  c.eigenvalue_error = std::abs(c.eigenvalue - J_eigenvalue(basis.d, ctx));
  FusedFamily F1(ctx, basis, u1, source), F2(ctx, basis, u2, source);
  for (const Matrix* T : {&F1.fundamental(0), &F1.conjugate(0), &F2.fundamental(1)}) {
    const real scale = norm(Jp) * norm(*T);
    if (scale > 0) c.centrality = std::max(c.centrality, norm(Jp * *T - *T * Jp) / scale);
  }
  const Matrix J1 = J_from_closure(F1, ctx.a(), ctx.b()), J2 = J_from_closure(F2, ctx.a(), ctx.b());
  c.u_independence = relative_residual(J1, J2);
  c.closure_match = std::max(relative_residual(J1, Jp), relative_residual(J2, Jp));
  if (c.eigenvalue_error > tol)
    throw Error(ErrorKind::EigenvalueMismatch,
                "J eigenvalue differs from the closed form by " + std::to_string(double(c.eigenvalue_error)));
  return c;
}

const std::vector<ClosureRelation>& closure_relations() {
  static const std::vector<ClosureRelation> rels = {
      {"closure_b0", "f-1 Tb0_0 expressed through Tb-2,1_2, Tb-3,0_4 and J (b=2,3 variants)", false},
      {"closure_0b", "f-3 T0b_0 expressed through T1,b-2_0, T0,b-3_2 and J (b=2,3 variants)", false},
      {"closure_bk", "Tb,k_0 for 1<=k<=b-1 reduced to the restricted set", true},
      {"closure_kb", "Tk,b_0 for 1<=k<=b-1 reduced to the restricted set", true},
      {"quartic", "quartic relation among Tb-1,0, T0,b-1, Tb-2,0, T0,b-2 and J", false},
  };
  return rels;
}

std::vector<int> closure_k_values(const SpectralContext& ctx) {
  require_root(ctx);
  std::vector<int> ks;
  for (int k = 1; k <= ctx.b() - 1; ++k) ks.push_back(k);
  return ks;
}

real closure_residual(const std::string& id, int k, FusedFamily& family, const Matrix& J) {
  const SpectralContext& ctx = family.context();
  require_root(ctx);
  auto [lhs, rhs] = closure_sides(id, k, family, J, ctx.a(), ctx.b());
  return relative_residual(lhs, rhs);
}

GridCheck closure_grid_check(const std::string& id, bool use_f1, const SpectralContext& ctx,
                             const ModuleBasis& basis, const Matrix& J, FusionSource source,
                             cplx generic_point) {
  require_root(ctx);
  if (id != "closure_b0" && id != "closure_0b")
    throw Error(ErrorKind::UnknownIdentity, "grid checks cover closure_b0 and closure_0b");
  std::vector<cplx> pts;
  std::vector<int> shifts{2, 3};
  if (use_f1) shifts.push_back(1);
  for (int s : shifts)
    for (cplx x : ctx.xi) {
      pts.push_back(x - real(s) * ctx.lambda);
      pts.push_back(x - real(s) * ctx.lambda + pi);
    }
  pts.push_back(generic_point);
  // Each side is a Laurent polynomial of degree at most 3N even where single
  // tangles in it have poles, so the sides are fitted whole.
  const int bound = 4 * ctx.N;
  const real radius = 1.2;
  for (int attempt = 0;; ++attempt) {
    try {
      const real offset = real(0.1) + real(0.037) * real(attempt);
      std::vector<Matrix> ls, rs;
      for (int p = 0; p < 2 * bound + 1; ++p) {
        FusedFamily F(ctx, basis, laurent_sample_point(p, bound, radius, offset), source);
        auto [l, r] = closure_sides(id, 0, F, J, ctx.a(), ctx.b());
        ls.push_back(l);
        rs.push_back(r);
      }
      const LaurentFit lf = fit_laurent_samples(ls, bound, radius, offset);
      const LaurentFit rf = fit_laurent_samples(rs, bound, radius, offset);
      FusedFamily G(ctx, basis, generic_point, source);
      auto [gl, gr] = closure_sides(id, 0, G, J, ctx.a(), ctx.b());
      GridCheck g;
      g.points = int(pts.size());
      g.residual = std::max(relative_residual(lf.eval(generic_point), gl),
                            relative_residual(rf.eval(generic_point), gr));
      // Both sides may vanish at a grid point, so the gap there is measured
      // against the size of the sides over the sampling circle.
      real scale = 0;
      for (std::size_t p = 0; p < ls.size(); ++p) scale = std::max({scale, norm(ls[p]), norm(rs[p])});
      for (cplx u : pts) g.residual = std::max(g.residual, norm(lf.eval(u) - rf.eval(u)) / scale);
      return g;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingularU || attempt >= 5) throw;
    }
  }
}

YClosure y_closure_residuals(FusedFamily& F, const Matrix& J, std::mt19937_64& rng) {
  const SpectralContext& ctx = F.context();
  require_root(ctx);
  const int a = ctx.a(), b = ctx.b(), s = F.sigma();
  const int D = F.basis().size();
  const CommonEigenbasis eb = family_eigenbasis(F, rng);
  const cplx j = J.trace() / real(D);
  const cplx sj = real(sign_pow(s, a)) * j;
  const cplx eL = std::exp(I_unit * std::acos((sj - real(1)) / real(2)));
  auto Tb2 = [&](int k) { return eb.eigenvalues(F.fused(b - 2, 0, k)); };
  auto Tb1 = [&](int k) { return eb.eigenvalues(F.fused(b - 1, 0, k)); };
  const Vector t0 = t_eigenvalues(b - 1, 0, F, eb);
  const Vector tm2 = t_eigenvalues(b - 2, 2, F, eb), tm3 = t_eigenvalues(b - 2, 3, F, eb);
  std::map<int, Vector> b2, b1;
  for (int k = 0; k <= 5; ++k) {
    b2[k] = Tb2(k);
    b1[k] = Tb1(k);
  }
  YClosure r;
  r.lambda_consistency = std::abs(eL + real(1) + real(1) / eL - sj);
  const cplx one(1, 0);
  auto P = [&](cplx x) { return (one + eL * x) * (one + one / x) * (one + x / eL); };
  for (int i = 0; i < D; ++i) {
    auto x = [&](int k) { return real(s) * b2[k + 2][i] / b1[k + 1][i]; };
    auto y = [&](int k) { return -x(k - 1) * x(k); };
    const cplx X = b2[2][i] / b1[1][i];
    const cplx num = one + real(sign_pow(s, a - 1)) * j * X + real(sign_pow(s, a)) * j * X * X +
                     real(s) * X * X * X;
    const cplx den = (one - b2[1][i] * b2[2][i] / (b1[0][i] * b1[1][i])) *
                     (one - b2[2][i] * b2[3][i] / (b1[1][i] * b1[2][i]));
    const cplx lhs = one + t0[i];
    const cplx raw = num / den;
    const cplx x0 = x(0);
    const cplx prod = (one + eL * x0) * (one + x0) * (one + x0 / eL) / ((one + y(0)) * (one + y(1)));
    r.raw = std::max(r.raw, rel(lhs, raw));
    r.product_t = std::max(r.product_t, rel(lhs, prod));
    r.raw_vs_product = std::max(r.raw_vs_product, rel(raw, prod));
    const cplx xr = (one + tm2[i]) * (one + y(1)) * (one + y(2)) / P(x(1));
    r.product_x = std::max(r.product_x, rel(x(0) * x(2), xr));
    const cplx yr = (one + tm2[i]) * (one + tm3[i]) * (one + y(1)) * (one + y(2)) * (one + y(2)) *
                    (one + y(3)) / (P(x(1)) * P(x(2)));
    r.product_y = std::max(r.product_y, rel(y(1) * y(3), yr));
  }
  return r;
}

TbaDiagram export_tba_diagram(int a, int b) {
  if (b < 2) throw Error(ErrorKind::ConfigError, "TBA diagram needs b >= 2");
  TbaDiagram d;
  d.a = a;
  d.b = b;
  for (int i = 1; i <= b - 2; ++i) d.nodes.push_back({"t" + std::to_string(i), "t"});
  for (int i = 1; i <= 3; ++i) d.nodes.push_back({"x" + std::to_string(i), "x"});
  d.nodes.push_back({"y", "y"});
  for (int i = 1; i <= b - 2; ++i) {
    const std::string t = "t" + std::to_string(i);
    d.edges.push_back({t, t, 1, "denominator"});
    if (i + 1 <= b - 2) d.edges.push_back({t, "t" + std::to_string(i + 1), 1, "numerator"});
  }
  const std::string last = b >= 3 ? "t" + std::to_string(b - 2) : "";
  for (int i = 1; i <= 3; ++i) {
    const std::string x = "x" + std::to_string(i);
    d.edges.push_back({x, x, 1, "denominator"});
    for (int j = i + 1; j <= 3; ++j) d.edges.push_back({x, "x" + std::to_string(j), 1, "denominator"});
    if (!last.empty()) d.edges.push_back({last, x, 1, "numerator"});
    d.edges.push_back({x, "y", 2, "mixed"});
  }
  if (!last.empty()) d.edges.push_back({last, "y", 2, "mixed"});
  d.edges.push_back({"y", "y", 4, "numerator"});
  return d;
}

std::string tba_to_text(const TbaDiagram& d) {
  std::ostringstream os;
  os << "# a=" << d.a << " b=" << d.b << " nodes=" << d.nodes.size() << " edges=" << d.edges.size() << "\n";
  for (const auto& n : d.nodes) os << "node " << n.id << " kind=" << n.kind << "\n";
  for (const auto& e : d.edges)
    os << "edge " << e.from << " " << e.to << " multiplicity=" << e.multiplicity << " role=" << e.role << "\n";
  return os.str();
}

}  // namespace dilute
