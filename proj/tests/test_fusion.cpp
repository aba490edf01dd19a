#include <doctest.h>

#include <random>

#include "dilute/fusion.hpp"
#include "dilute/projectors.hpp"
#include "dilute/transfer.hpp"

using namespace dilute;

namespace {

SpectralContext ctx_for(int N, real lambda = 0.55) {
  std::vector<cplx> xi;
  for (int j = 0; j < N; ++j) xi.push_back(cplx(0.11 * j - 0.07, 0));
  return make_context(N, lambda, xi, std::polar(real(1), real(0.3)));
}

}  // namespace

TEST_CASE("unit labels are the fundamental and conjugate matrices") {
  const SpectralContext ctx = ctx_for(3);
  const ModuleBasis basis = enumerate_link_states(3, 1);
  const cplx u(0.21, 0.13);
  FusedFamily F(ctx, basis, u);
  for (int k = 0; k <= 2; ++k) {
    const cplx uk = u + real(k) * ctx.lambda;
    CHECK(relative_residual(F.fused(1, 0, k), build_fundamental(uk, basis, ctx)) < 1e-14);
    CHECK(relative_residual(F.fused(0, 1, k), build_conjugate(uk, basis, ctx)) < 1e-14);
  }
  const Matrix& T00 = F.fused(0, 0, 1);
  CHECK(relative_residual(T00, F.f(-2) * F.f(-1) * F.identity()) < 1e-14);
  CHECK(F.fused(-1, 0, 0).norm() == 0);
}

TEST_CASE("projector-built fused matrices agree with the hierarchy") {
  const SpectralContext ctx = ctx_for(2);
  for (int d = 0; d <= 2; ++d) {
    const ModuleBasis basis = enumerate_link_states(2, d);
    const cplx u(0.17, 0.09);
    FusedFamily F(ctx, basis, u);
    CHECK(relative_residual(projected_fused_transfer(ProjectorLabel::M0, 2, u, basis, ctx), F.fused(2, 0, 0)) <
          1e-9);
    CHECK(relative_residual(projected_fused_transfer(ProjectorLabel::M1, 1, u, basis, ctx), F.fused(1, 1, 0)) <
          1e-9);
  }
}

TEST_CASE("every reachable relation holds on the determinant build") {
  std::mt19937_64 rng(9);
  for (int N = 1; N <= 2; ++N) {
    const SpectralContext ctx = ctx_for(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      FusedFamily F(ctx, basis, generic_u(ctx, 6, rng), FusionSource::Determinant);
      for (const auto& rel : fusion_relations()) {
        CAPTURE(rel.id);
        for (const auto& idx : reachable_indices(rel, 4)) {
          if (idx.m > 4) continue;
          CHECK(verify_functional_relation(rel.id, idx, F) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("relation indices outside the stated range are rejected") {
  const SpectralContext ctx = ctx_for(2);
  const ModuleBasis basis = enumerate_link_states(2, 0);
  FusedFamily F(ctx, basis, 0.3);
  CHECK_THROWS_AS(verify_functional_relation("tsystem", RelationIndices{-1, 0, 0}, F), Error);
}

TEST_CASE("determinant and recursion builds agree") {
  for (int N = 1; N <= 3; ++N) {
    const SpectralContext ctx = ctx_for(N);
    const ModuleBasis basis = enumerate_link_states(N, N % 2);
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; m + n <= 4; ++n)
        if (m + n >= 2) CHECK(determinant_vs_recursion(m, n, ctx, basis, cplx(0.23, 0.11)) < 1e-9);
  }
}

TEST_CASE("fused matrices are periodic and commute") {
  std::mt19937_64 rng(4);
  const SpectralContext ctx = ctx_for(3);
  const ModuleBasis basis = enumerate_link_states(3, 1);
  const cplx u = generic_u(ctx, 6, rng);
  for (auto [m, n] : {std::pair{2, 0}, {0, 2}, {1, 1}, {2, 1}, {3, 0}})
    CHECK(periodicity_residual(m, n, ctx, basis, u, FusionSource::Recursion) < 1e-9);
  FusedFamily a(ctx, basis, u), b(ctx, basis, generic_u(ctx, 6, rng));
  for (auto [m, n] : {std::pair{2, 0}, {1, 1}, {0, 3}}) {
    a.fused(m, n, 0);
    b.fused(m, n, 1);
  }
  CHECK(family_commutator(a, b) < 1e-10);
}

TEST_CASE("regularity at u = xi_N") {
  for (int N = 2; N <= 3; ++N) {
    const SpectralContext ctx = ctx_for(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      CHECK(regularity_residual(2, 0, ctx, basis, cplx(0.31, 0.07)) < 1e-9);
      CHECK(regularity_residual(1, 1, ctx, basis, cplx(0.31, 0.07)) < 1e-9);
    }
  }
}

TEST_CASE("fused matrices are Laurent polynomials of the expected degree") {
  const SpectralContext ctx = ctx_for(2);
  for (int d = 0; d <= 2; ++d) {
    const ModuleBasis basis = enumerate_link_states(2, d);
    for (auto [m, n] : {std::pair{1, 0}, {2, 0}, {0, 2}, {1, 1}}) {
      const PolynomialFit f = polynomiality_check(m, n, ctx, basis, FusionSource::Recursion);
      CHECK(f.fit_residual < 1e-9);
      CHECK(f.detected_degree == expected_degree(m, n, 2));
    }
  }
  CHECK(expected_degree(3, 0, 4) == 8);
  CHECK(expected_degree(2, 1, 4) == 12);
}

TEST_CASE("braid-limit fused eigenvalues") {
  for (int N = 1; N <= 3; ++N) {
    const SpectralContext ctx = make_context(N, 0.55, {}, std::polar(real(1), real(0.8)));
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      for (int sign : {1, -1})
        for (int m = 1; m <= 4; ++m) {
          const BraidFusedCheck c = braid_fused_check(m, sign, basis, ctx);
          CHECK(c.scalar_defect < 1e-9);
          CHECK(c.eigenvalue_error < 1e-9);
        }
    }
  }
}

TEST_CASE("symmetric polynomial closed form against its recursion") {
  const cplx y1(0.7, 0.4), y2(-0.3, 1.1);
  for (int m = 0; m <= 6; ++m) {
    const cplx a = chebyshev_U(m, y1, y2), b = chebyshev_U_recursive(m, y1, y2);
    CHECK(std::abs(a - b) < 1e-12 * std::max(real(1), std::abs(b)));
  }
}

TEST_CASE("Y-system holds eigenvalue-wise") {
  std::mt19937_64 rng(2);
  const SpectralContext ctx = ctx_for(2);
  for (int d = 0; d <= 2; ++d) {
    const ModuleBasis basis = enumerate_link_states(2, d);
    FusedFamily F(ctx, basis, generic_u(ctx, 10, rng));
    for (int m = 1; m <= 3; ++m) CHECK(ysystem_residual(m, F, rng) < 1e-6);
  }
}
