#include <doctest.h>

#include <random>
#include <sstream>

#include "dilute/laurent.hpp"
#include "dilute/transfer.hpp"

using namespace dilute;

namespace {

// Sum over all 9^N tile configurations of one periodic row, each turned into
// a row diagram and applied with the standard action.
Matrix brute_transfer(cplx u, const ModuleBasis& basis, const SpectralContext& ctx) {
  const int N = basis.N;
  const int D = basis.size();
  const auto& tiles = face_tiles();
  std::vector<FaceWeights> w(N);
  for (int j = 0; j < N; ++j) w[j] = face_weights(u - ctx.xi[j], ctx.lambda);
  Matrix out = Matrix::Zero(D, D);
  std::vector<int> cfg(N, 0);
  auto occupied = [&](int j, int node) { return tiles[cfg[j]][node] != -1; };
  for (long long c = 0, total = std::llround(std::pow(9, N)); c < total; ++c) {
    long long r = c;
    for (int j = 0; j < N; ++j, r /= 9) cfg[j] = int(r % 9);
    bool ok = true;
    for (int j = 0; j < N && ok; ++j) ok = occupied(j, R) == occupied((j + 1) % N, L);
    if (!ok) continue;
    cplx weight = 1;
    for (int j = 0; j < N; ++j) weight *= w[j][cfg[j]];

    RowDiagram row;
    row.N = N;
    row.partner.assign(2 * N, -1);
    row.offset.assign(2 * N, 0);
    std::vector<std::array<bool, 4>> seen(N, {false, false, false, false});
    // follow the strand leaving face j at `node` until it reaches a top or bottom edge
    auto trace = [&](int j, int node, int& off) {
      for (;;) {
        seen[j][node] = true;
        const int next = tiles[cfg[j]][node];
        seen[j][next] = true;
        if (next == T) return j;
        if (next == B) return N + j;
        if (next == R) {
          if (j == N - 1) ++off;
          j = (j + 1) % N;
          node = L;
        } else {
          if (j == 0) --off;
          j = (j + N - 1) % N;
          node = R;
        }
      }
    };
    for (int j = 0; j < N; ++j)
      for (int node : {T, B}) {
        if (!occupied(j, node) || seen[j][node]) continue;
        int off = 0;
        const int end = trace(j, node, off);
        row.connect(node == T ? j : N + j, end, off);
      }
    // a closed loop inside one row runs along every face, around the cylinder
    bool ring = true;
    for (int j = 0; j < N; ++j) ring = ring && tiles[cfg[j]][L] == R;
    if (ring) row.n_alpha = 1;

    for (int col = 0; col < D; ++col) {
      const auto res = standard_action(row, basis.states[col], ctx);
      if (!res) continue;
      out(basis.find(res->state), col) += weight * res->coefficient;
    }
  }
  return out;
}

SpectralContext test_context(int N, real lambda = 0.55) {
  std::vector<cplx> xi;
  for (int j = 0; j < N; ++j) xi.push_back(cplx(0.13 * j - 0.1, 0.02 * j));
  return make_context(N, lambda, xi, std::polar(real(1), real(0.45)), cplx(0.7, 0.3));
}

}  // namespace

TEST_CASE("row transfer matches the brute-force tile sum") {
  const cplx u(0.37, 0.21);
  for (int N = 1; N <= 3; ++N) {
    const SpectralContext ctx = test_context(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      CHECK(relative_residual(build_fundamental(u, basis, ctx), brute_transfer(u, basis, ctx)) < 1e-13);
    }
  }
}

TEST_CASE("row transfer matches the brute-force tile sum at N=4") {
  const SpectralContext ctx = test_context(4);
  for (int d : {0, 1, 4}) {
    const ModuleBasis basis = enumerate_link_states(4, d);
    CHECK(relative_residual(build_fundamental(cplx(-0.2, 0.4), basis, ctx),
                            brute_transfer(cplx(-0.2, 0.4), basis, ctx)) < 1e-13);
  }
}

TEST_CASE("transfer at u=0 with no inhomogeneity is the translation") {
  for (int N = 2; N <= 4; ++N) {
    SpectralContext ctx = make_context(N, 0.55, std::vector<cplx>(N, 0), std::polar(1.0, 0.3));
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      const Matrix T = build_fundamental(0, basis, ctx);
      // every column carries a single unit-modulus entry
      for (int c = 0; c < basis.size(); ++c) {
        int nonzero = 0;
        for (int r = 0; r < basis.size(); ++r)
          if (std::abs(T(r, c)) > 1e-12) {
            ++nonzero;
            CHECK(std::abs(std::abs(T(r, c)) - 1) < 1e-12);
          }
        CHECK(nonzero == 1);
      }
    }
  }
}

TEST_CASE("commuting family, periodicity and crossing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<real> x(-1, 1);
  for (int N = 1; N <= 4; ++N) {
    const SpectralContext ctx = test_context(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      const cplx u(x(rng), 0.3 * x(rng)), v(x(rng), 0.3 * x(rng));
      const Matrix Tu = build_fundamental(u, basis, ctx), Tv = build_fundamental(v, basis, ctx);
      CHECK(relative_residual(Tu * Tv, Tv * Tu) < 1e-12);
      CHECK(relative_residual(build_fundamental(u + pi, basis, ctx), Tu) < 1e-12);
      CHECK(relative_residual(build_conjugate(u, basis, ctx), build_fundamental(u + ctx.lambda, basis, ctx)) <
            1e-12);
    }
  }
}

TEST_CASE("Laurent degree is 2N") {
  for (int N = 1; N <= 3; ++N) {
    const SpectralContext ctx = test_context(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      auto F = [&](cplx u) { return build_fundamental(u, basis, ctx); };
      const LaurentFit fit = fit_laurent(F, 2 * N + 2);
      CHECK(fit.detected_degree() == 2 * N);
      CHECK(fit_residual(fit, F, {cplx(0.3, 0.2), cplx(-1.1, -0.25)}) < 1e-10);
    }
  }
}

TEST_CASE("braid transfer matrices are scalar with the closed-form eigenvalue") {
  for (real phase : {0.0, 0.45, 1.3}) {
    for (int N = 1; N <= 5; ++N) {
      const SpectralContext ctx = make_context(N, 0.55, {}, std::polar(real(1), phase));
      for (int d = 0; d <= N; ++d) {
        const ModuleBasis basis = enumerate_link_states(N, d);
        for (int sign : {1, -1}) {
          const Matrix B = build_braid(sign, basis, ctx);
          const cplx e = braid_eigenvalue(d, sign, ctx);
          const Matrix diff = B - e * Matrix::Identity(basis.size(), basis.size());
          CHECK(norm(diff) / std::max(real(1), std::abs(e)) < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("normalized transfer tends to the braid matrix") {
  for (int N = 2; N <= 3; ++N) {
    const SpectralContext ctx = test_context(N);
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis basis = enumerate_link_states(N, d);
      for (int sign : {1, -1})
        CHECK(relative_residual(braid_limit_estimate(sign, 25, basis, ctx), build_braid(sign, basis, ctx)) < 1e-8);
    }
  }
}

TEST_CASE("matrix dump layout") {
  const SpectralContext ctx = test_context(2);
  const ModuleBasis basis = enumerate_link_states(2, 1);
  const Matrix T = build_fundamental(0.3, basis, ctx);
  const std::string s = dump_matrix(T, 2, 1, 0.3, ctx);
  CHECK(s.rfind("# N=2 d=1 u=", 0) == 0);
  std::istringstream in(s.substr(s.find('\n') + 1));
  double re = 0, im = 0;
  in >> re >> im;
  CHECK(cplx(re, im) == T(0, 0));
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + basis.size() * basis.size());
}

TEST_CASE("singular crossing parameters are rejected") {
  CHECK_THROWS_AS(make_context(2, pi / 3, {}), Error);
  CHECK_THROWS_AS(make_context(2, pi / 2, {}), Error);
  CHECK_THROWS_AS(make_context_ab(2, 1, 3, {0, 0}), Error);
}
