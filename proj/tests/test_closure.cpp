#include <doctest.h>

#include <numeric>
#include <random>

#include "dilute/closure.hpp"
#include "dilute/projectors.hpp"

using namespace dilute;

namespace {

SpectralContext root_ctx(int N, int a, int b) {
  std::vector<cplx> xi;
  for (int j = 0; j < N; ++j) xi.push_back(cplx(0.09 * j - 0.05, 0));
  return make_context_ab(N, a, b, xi, std::polar(real(1), real(0.3)));
}

}  // namespace

TEST_CASE("closure at roots of unity") {
  std::mt19937_64 rng(21);
  for (auto [a, b] : {std::pair{1, 2}, {2, 3}, {1, 4}, {3, 4}}) {
    for (int N = 2; N <= 3; ++N) {
      CAPTURE(a);
      CAPTURE(b);
      CAPTURE(N);
      const SpectralContext ctx = root_ctx(N, a, b);
      const real cap = 1e-7 * std::pow(10.0, b - 2);
      for (int d = 0; d <= N; ++d) {
        const ModuleBasis basis = enumerate_link_states(N, d);
        const cplx u = generic_u(ctx, 2 * b + 2, rng);
        CHECK(check_root_symmetries(ctx, basis, u, FusionSource::Recursion) < 1e-9);
        const Matrix J = compute_J(basis, ctx);
        const JCheck jc = check_J(basis, ctx, u, generic_u(ctx, 2 * b + 2, rng), FusionSource::Recursion);
        CHECK(jc.scalar_defect < 1e-9);
        CHECK(jc.eigenvalue_error < 1e-9);
        CHECK(jc.centrality < 1e-9);
        CHECK(jc.u_independence < 1e-9);
        CHECK(std::abs(jc.eigenvalue - J_eigenvalue(d, ctx)) < 1e-9);
        FusedFamily F(ctx, basis, u);
        for (const auto& rel : closure_relations()) {
          CAPTURE(rel.id);
          const real tol = rel.id == "quartic" ? 1e-6 : cap;
          if (!rel.uses_k) {
            CHECK(closure_residual(rel.id, 0, F, J) < tol);
            continue;
          }
          for (int k : closure_k_values(ctx)) CHECK(closure_residual(rel.id, k, F, J) < tol);
        }
        const YClosure y = y_closure_residuals(F, J, rng);
        CHECK(y.raw < 1e-6);
        CHECK(y.product_t < 1e-6);
        CHECK(y.product_x < 1e-6);
        CHECK(y.product_y < 1e-6);
        CHECK(y.lambda_consistency < 1e-9);
      }
    }
  }
}

TEST_CASE("closure grids") {
  const SpectralContext ctx = root_ctx(2, 1, 2);
  for (int d = 0; d <= 2; ++d) {
    const ModuleBasis basis = enumerate_link_states(2, d);
    const Matrix J = compute_J(basis, ctx);
    for (const char* id : {"closure_b0", "closure_0b"})
      for (bool f1 : {false, true}) {
        const GridCheck g = closure_grid_check(id, f1, ctx, basis, J, FusionSource::Recursion, cplx(0.2, 0.15));
        CHECK(g.points > 0);
        CHECK(g.residual < 1e-7);
      }
  }
}

TEST_CASE("closure needs a root of unity") {
  const SpectralContext ctx = make_context(2, 0.55, {0, 0});
  CHECK_THROWS_AS(closure_k_values(ctx), Error);
}

TEST_CASE("TBA graph node counts") {
  for (int pp = 2; pp <= 9; ++pp)
    for (int p = 1; p < 2 * pp; ++p) {
      if (std::gcd(p, pp) != 1) continue;
      const auto [a, b] = ab_from_pp(p, pp);
      const TbaDiagram g = export_tba_diagram(a, b);
      const int expected = p % 2 == 0 ? pp + 2 : 2 * pp + 2;
      CHECK(int(g.nodes.size()) == expected);
      int self = 0;
      for (const auto& e : g.edges)
        if (e.from == "y" && e.to == "y") self = e.multiplicity;
      CHECK(self == 4);
    }
}

TEST_CASE("TBA document lists every node and edge") {
  const TbaDiagram g = export_tba_diagram(1, 4);
  const std::string doc = tba_to_text(g);
  for (const auto& n : g.nodes) CHECK(doc.find(n.id) != std::string::npos);
  CHECK(std::count(doc.begin(), doc.end(), '\n') >= int(g.nodes.size() + g.edges.size()));
}

TEST_CASE("projectors at generic lambda") {
  const real l = 0.55;
  for (auto fam : {PrefactorFamily::Primary, PrefactorFamily::Alternate})
    for (auto label : {ProjectorLabel::M0, ProjectorLabel::M1, ProjectorLabel::ZeroN, ProjectorLabel::OneN})
      for (int m = 1; m <= 3; ++m) {
        const ProjectorChecks c = check_projector(build_projector(label, m, fam, l), l);
        CHECK(c.idempotency < 1e-10);
        CHECK(c.absorption < 1e-10);
        CHECK(c.annihilation < 1e-10);
      }
}

TEST_CASE("single-strand projector is the dashed strand") {
  const ProjectorTangle p = build_projector(ProjectorLabel::M0, 1, PrefactorFamily::Primary, 0.55);
  CHECK(p.strands() == 1);
  CHECK(tangle_residual(p.tangle, strand_identity(1)) < 1e-14);
}
