#include <doctest.h>

#include <random>
#include <set>

#include "dilute/linkstates.hpp"

using namespace dilute;

namespace {

// Coefficient of x^d in (x + 1 + 1/x)^N by repeated convolution.
long long trinomial_oracle(int N, int d) {
  std::vector<long long> c{1};
  for (int n = 0; n < N; ++n) {
    std::vector<long long> next(c.size() + 2, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int k = 0; k < 3; ++k) next[i + k] += c[i];
    c = next;
  }
  return c[N + d];
}

RowDiagram empty_row(int N) {
  RowDiagram r;
  r.N = N;
  r.partner.assign(2 * N, -1);
  r.offset.assign(2 * N, 0);
  return r;
}

// Random planar row built as a product of simple rows: vacancies, cup-caps,
// shifts and single diagonal strands.
RowDiagram random_generator(int N, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3), site(0, N - 1);
  const int i = site(rng), j = (i + 1) % N, wrap = i == N - 1 ? 1 : 0;
  RowDiagram r = RowDiagram::identity(N);
  switch (kind(rng)) {
    case 0:
      r.partner[i] = r.partner[N + i] = -1;
      r.offset[i] = r.offset[N + i] = 0;
      break;
    case 1:
      if (N < 2) break;
      r = empty_row(N);
      for (int k = 0; k < N; ++k)
        if (k != i && k != j) r.connect(k, N + k, 0);
      r.connect(i, j, wrap);
      r.connect(N + i, N + j, wrap);
      break;
    case 2:
      r = empty_row(N);
      for (int k = 0; k < N; ++k) r.connect(k, N + (k + 1) % N, k == N - 1 ? 1 : 0);
      break;
    default:
      if (N < 2) break;
      r = empty_row(N);
      for (int k = 0; k < N; ++k)
        if (k != i && k != j) r.connect(k, N + k, 0);
      r.connect(i, N + j, wrap);
      break;
  }
  return r;
}

std::optional<RowDiagram> random_row(int N, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 4);
  std::optional<RowDiagram> r = random_generator(N, rng);
  for (int n = len(rng); n > 1 && r; --n) r = compose(*r, random_generator(N, rng));
  return r;
}

}  // namespace

TEST_CASE("dimensions match the trinomial expansion") {
  for (int N = 1; N <= 8; ++N)
    for (int d = 0; d <= N; ++d) {
      CHECK(trinomial(N, d) == trinomial_oracle(N, d));
      CHECK(enumerate_link_states(N, d).size() == trinomial_oracle(N, d));
    }
}

TEST_CASE("N=3 sector sizes") {
  CHECK(enumerate_link_states(3, 3).size() == 1);
  CHECK(enumerate_link_states(3, 2).size() == 3);
  CHECK(enumerate_link_states(3, 1).size() == 6);
  CHECK(enumerate_link_states(3, 0).size() == 7);
}

TEST_CASE("N=3 d=0 listing") {
  const ModuleBasis b = enumerate_link_states(3, 0);
  std::set<std::string> got;
  for (const auto& s : b.states) got.insert(s.dump());
  // each arc once in front and once behind the seam, plus the empty state
  const std::set<std::string> want{"VVV", "()V", "[]V", "V()", "V[]", "(V)", "[V]"};
  CHECK(got == want);
}

TEST_CASE("basis is sorted, unique and valid") {
  for (int N = 1; N <= 6; ++N)
    for (int d = 0; d <= N; ++d) {
      const ModuleBasis b = enumerate_link_states(N, d);
      for (int i = 0; i < b.size(); ++i) {
        CHECK(is_valid_link_state(b.states[i]));
        CHECK(b.states[i].defects() == d);
        CHECK(LinkState::parse(b.states[i].dump()) == b.states[i]);
        CHECK(b.find(b.states[i]) == i);
        if (i > 0) CHECK(b.states[i - 1] < b.states[i]);
      }
    }
}

TEST_CASE("standard action examples") {
  const cplx omega = std::polar(0.9, 0.4);
  const SpectralContext ctx = make_context(5, 0.55, {}, omega, cplx(1.3, 0.2));
  const cplx alpha = ctx.alpha, beta = loop_fugacity(ctx.lambda);

  SUBCASE("defect crossing the seam to the right") {
    RowDiagram a = empty_row(5);
    a.connect(1, 2, 0);
    a.connect(0, 5 + 2, 0);
    a.connect(3, 5 + 0, 1);
    const auto r = standard_action(a, LinkState::parse("()DDV"), ctx);
    REQUIRE(r);
    CHECK(r->state.dump() == "DVDVV");
    CHECK(std::abs(r->coefficient - real(1) / omega) < 1e-14);
  }
  SUBCASE("two defects joined") {
    RowDiagram a = empty_row(5);
    a.connect(3, 4, 0);
    a.connect(5 + 1, 5 + 2, 0);
    a.connect(5 + 0, 5 + 3, 0);
    a.connect(2, 0, 1);
    CHECK_FALSE(standard_action(a, LinkState::parse("DV()D"), ctx));
  }
  SUBCASE("one contractible and one winding loop") {
    RowDiagram a = empty_row(5);
    a.connect(3, 4, 0);
    a.connect(5 + 1, 5 + 2, 0);
    a.connect(5 + 0, 5 + 3, 0);
    a.connect(2, 0, 1);
    const auto r = standard_action(a, LinkState::parse("(V)()"), ctx);
    REQUIRE(r);
    CHECK(r->state.dump() == "(())V");
    CHECK(std::abs(r->coefficient - alpha * beta) < 1e-13);
  }
  SUBCASE("defect meeting a vacancy") {
    RowDiagram a = empty_row(5);
    a.connect(5 + 0, 5 + 2, 0);
    a.connect(0, 5 + 3, -1);
    a.connect(2, 5 + 4, -1);
    CHECK_FALSE(standard_action(a, LinkState::parse("DD()V"), ctx));
  }
}

TEST_CASE("identity row acts trivially") {
  const SpectralContext ctx = make_context(6, 0.55, {}, std::polar(1.0, 0.7));
  for (int N = 1; N <= 6; ++N) {
    SpectralContext c = ctx;
    c.N = N;
    c.xi.assign(N, 0);
    for (int d = 0; d <= N; ++d)
      for (const auto& w : enumerate_link_states(N, d).states) {
        // the identity is the sum over columns of a through strand or a vacancy
        int nonzero = 0;
        for (int mask = 0; mask < (1 << N); ++mask) {
          RowDiagram row;
          row.N = N;
          row.partner.assign(2 * N, -1);
          row.offset.assign(2 * N, 0);
          for (int i = 0; i < N; ++i)
            if (mask >> i & 1) row.connect(i, N + i, 0);
          const auto r = standard_action(row, w, c);
          if (!r) continue;
          ++nonzero;
          CHECK(r->state == w);
          CHECK(r->scalars.n_alpha == 0);
          CHECK(r->scalars.n_beta == 0);
          CHECK(r->scalars.n_omega == 0);
          CHECK(std::abs(r->coefficient - real(1)) < 1e-15);
        }
        CHECK(nonzero == 1);
      }
  }
}

TEST_CASE("acting twice equals acting with the composed row") {
  std::mt19937_64 rng(11);
  for (int N = 1; N <= 4; ++N) {
    const SpectralContext ctx = make_context(N, 0.55, {}, std::polar(1.0, 0.7), cplx(1.7, -0.4));
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = random_row(N, rng), b = random_row(N, rng);
      if (!a || !b) continue;
      const auto ab = compose(*a, *b);
      for (int d = 0; d <= N; ++d)
        for (const auto& w : enumerate_link_states(N, d).states) {
          const auto first = standard_action(*a, w, ctx);
          std::optional<ActionResult> seq;
          cplx coef = 0;
          if (first) {
            seq = standard_action(*b, first->state, ctx);
            if (seq) coef = first->coefficient * seq->coefficient;
          }
          const auto direct = ab ? standard_action(*ab, w, ctx) : std::nullopt;
          REQUIRE(bool(direct) == bool(seq));
          if (direct) {
            CHECK(direct->state == seq->state);
            CHECK(std::abs(direct->coefficient - coef) < 1e-12 * std::max(real(1), std::abs(coef)));
          }
        }
    }
  }
}
