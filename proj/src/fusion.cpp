#include "dilute/fusion.hpp"

#include <algorithm>

#include "dilute/transfer.hpp"

namespace dilute {

const char* fusion_source_name(FusionSource s) {
  return s == FusionSource::Recursion ? "recursion" : "determinant";
}

FusedFamily::FusedFamily(const SpectralContext& ctx, const ModuleBasis& basis, cplx u,
                         FusionSource source)
    : ctx_(ctx), basis_(basis), u_(u), source_(source) {
  zero_ = Matrix::Zero(basis.size(), basis.size());
}

Matrix FusedFamily::identity() const { return Matrix::Identity(basis_.size(), basis_.size()); }

cplx FusedFamily::f(int k) const { return f_k(u_, k, ctx_); }

cplx FusedFamily::divisor(std::initializer_list<int> ks) const {
  cplx d = 1;
  for (int k : ks) {
    const cplx v = f(k);
    if (std::abs(v) < divisor_floor)
      throw Error(ErrorKind::NearSingularU, "f_" + std::to_string(k) + " vanishes at the base point");
    d *= v;
  }
  return d;
}

const Matrix& FusedFamily::fundamental(int k) {
  auto it = t10_.find(k);
  if (it == t10_.end())
    it = t10_.emplace(k, build_fundamental(u_ + real(k) * ctx_.lambda, basis_, ctx_)).first;
  return it->second;
}

const Matrix& FusedFamily::conjugate(int k) {
  auto it = t01_.find(k);
  if (it == t01_.end())
    it = t01_.emplace(k, build_conjugate(u_ + real(k) * ctx_.lambda, basis_, ctx_)).first;
  return it->second;
}

std::vector<std::tuple<int, int, int>> FusedFamily::cached_labels() const {
  std::vector<std::tuple<int, int, int>> out;
  for (const auto& [key, m] : cache_) out.push_back(key);
  return out;
}

const Matrix& FusedFamily::fused(int m, int n, int k) {
  if (m < 0 || n < 0) return zero_;
  if (m == 1 && n == 0) return fundamental(k);
  if (m == 0 && n == 1) return conjugate(k);
  const auto key = std::make_tuple(m, n, k);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Matrix v;
  if (m == 0 && n == 0) v = identity() * (f(k - 3) * f(k - 2));
  else v = source_ == FusionSource::Recursion ? by_recursion(m, n, k) : by_determinant(m, n, k);
  return cache_.emplace(key, std::move(v)).first->second;
}

Matrix FusedFamily::by_recursion(int m, int n, int k) {
  const int s = sigma();
  auto F = [&](int a, int b, int j) -> const Matrix& { return fused(a, b, j); };
  auto fk = [&](int j) { return f(j); };
  if (n == 0) {
    if (m == 2)
      return (F(1, 0, k) * F(1, 0, k + 2) - real(s) * fk(k - 3) * fk(k + 2) * F(0, 1, k)) /
             divisor({k - 1, k});
    const int p = m - 1;
    return (F(p, 0, k) * F(1, 0, k + 2 * p) - real(s) * fk(k + 2 * p) * F(p - 1, 1, k)) /
           divisor({k + 2 * p - 3, k + 2 * p - 2});
  }
  if (m == 0) {
    if (n == 2)
      return (F(0, 1, k) * F(0, 1, k + 2) - real(s) * fk(k - 2) * fk(k + 3) * F(1, 0, k + 2)) /
             divisor({k, k + 1});
    const int q = n - 1;
    return (F(0, 1, k) * F(0, q, k + 2) - real(s) * fk(k - 2) * F(1, q - 1, k + 2)) /
           divisor({k, k + 1});
  }
  if (m == 1 && n == 1)
    return (F(1, 0, k) * F(0, 1, k + 2) -
            identity() * (fk(k - 3) * fk(k - 2) * fk(k + 2) * fk(k + 3))) /
           divisor({k});
  if (n == 1)
    return (F(m, 0, k) * F(0, 1, k + 2 * m) - fk(k + 2 * m) * fk(k + 2 * m + 1) * F(m - 1, 0, k)) /
           divisor({k + 2 * m - 2});
  if (m == 1)
    return (F(1, 0, k) * F(0, n, k + 2) - fk(k - 3) * fk(k - 2) * F(0, n - 1, k + 4)) /
           divisor({k});
  return (F(m, 0, k) * F(0, n, k + 2 * m) - F(m - 1, 0, k) * F(0, n - 1, k + 2 * m + 2)) /
         divisor({k + 2 * m - 2});
}

Matrix commuting_determinant(const std::vector<std::vector<Matrix>>& E, int dim) {
  const int n = int(E.size());
  std::vector<Matrix> dp(std::size_t(1) << n);
  dp[0] = Matrix::Identity(dim, dim);
  for (unsigned mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask].size() == 0) continue;
    const int r = __builtin_popcount(mask);
    if (r == n) continue;
    for (int c = 0; c < n; ++c) {
      if (mask >> c & 1 || E[r][c].size() == 0) continue;
      const int above = __builtin_popcount(mask >> (c + 1));
      Matrix term = dp[mask] * E[r][c];
      if (above % 2) term = -term;
      Matrix& slot = dp[mask | (1u << c)];
      if (slot.size() == 0) slot = term;
      else slot += term;
    }
  }
  Matrix det = dp.back();
  return det.size() == 0 ? Matrix::Zero(dim, dim) : det;
}

Matrix FusedFamily::by_determinant(int m, int n, int k) {
  const int dim = basis_.size();
  const int s = sigma();
  const int size = m + n;
  std::vector<std::vector<Matrix>> E(size, std::vector<Matrix>(size));
  auto scal = [&](cplx c) { return Matrix(identity() * (real(s) * c)); };
  // (m,0) band in rows/cols [off, off+m), shift k.
  auto fill_m0 = [&](int off, int mm, int sh) {
    for (int i = 0; i < mm; ++i) {
      const int r = mm - 1 - i;
      E[off + i][off + i] = fundamental(sh + 2 * r);
      if (i + 1 < mm) E[off + i][off + i + 1] = conjugate(sh + 2 * (r - 1));
      if (i + 2 < mm) {
        const int rc = r - 2;
        E[off + i][off + i + 2] = scal(f(sh + 2 * rc - 2) * f(sh + 2 * rc + 3));
      }
      if (i >= 1) E[off + i][off + i - 1] = scal(f(sh + 2 * r - 3) * f(sh + 2 * r + 2));
    }
  };
  // (0,n) band in rows/cols [off, off+nn), shift sh.
  auto fill_0n = [&](int off, int nn, int sh) {
    for (int i = 0; i < nn; ++i) {
      const int r = nn - 1 - i;
      E[off + i][off + i] = conjugate(sh + 2 * r);
      if (i >= 1) E[off + i][off + i - 1] = fundamental(sh + 2 * (r + 1));
      if (i + 1 < nn) {
        const int rc = r - 1;
        E[off + i][off + i + 1] = scal(f(sh + 2 * rc - 2) * f(sh + 2 * rc + 3));
      }
      if (i >= 2) {
        const int rc = r + 2;
        E[off + i][off + i - 2] = scal(f(sh + 2 * rc - 5) * f(sh + 2 * rc));
      }
    }
  };
  std::vector<int> pre;
  if (n == 0) {
    fill_m0(0, m, k);
    for (int j = -1; j <= 2 * m - 4; ++j) pre.push_back(k + j);
  } else if (m == 0) {
    fill_0n(0, n, k);
    for (int j = 0; j <= 2 * n - 3; ++j) pre.push_back(k + j);
  } else {
    fill_0n(0, n, k + 2 * m);
    fill_m0(n, m, k);
    E[n - 1][n] = scal(f(k + 2 * m - 4) * f(k + 2 * m + 1));
    E[n][n - 1] = scal(f(k + 2 * m - 5) * f(k + 2 * m));
    for (int j = -1; j <= 2 * m + 2 * n - 3; ++j)
      if (j != 2 * m - 3 && j != 2 * m - 1) pre.push_back(k + j);
  }
  cplx d = 1;
  for (int j : pre) {
    const cplx v = f(j);
    if (std::abs(v) < divisor_floor)
      throw Error(ErrorKind::NearSingularU, "f_" + std::to_string(j) + " vanishes at the base point");
    d *= v;
  }
  return commuting_determinant(E, dim) / d;
}

cplx generic_u(const SpectralContext& ctx, int reach, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(0, double(pi)), im(-0.5, 0.5);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const cplx u(real(re(rng)), real(im(rng)));
    std::vector<real> mags;
    for (int k = -8; k <= 2 * reach + 8; ++k) mags.push_back(std::abs(f_k(u, k, ctx)));
    std::vector<real> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const real median = sorted[sorted.size() / 2];
    if (*std::min_element(mags.begin(), mags.end()) >= real(1e-3) * median) return u;
  }
  throw Error(ErrorKind::NearSingularU, "no generic base point found");
}

namespace {

using Sides = std::pair<Matrix, Matrix>;

int sp(int s, int e) { return sign_pow(s, e); }

std::vector<FusionRelation> make_relations() {
  std::vector<FusionRelation> R;
  auto any = [](const RelationIndices&) { return true; };
  auto add = [&](std::string id, std::string desc, unsigned uses,
                 std::function<bool(const RelationIndices&)> valid,
                 std::function<int(const RelationIndices&)> reach,
                 std::function<Sides(FusedFamily&, const RelationIndices&)> sides) {
    R.push_back({std::move(id), std::move(desc), uses, std::move(valid), std::move(reach),
                 std::move(sides)});
  };

  add("fh_corner_10_10", "T10_0 T10_2 = f-1 f0 T20_0 + s f-3 f2 T01_0", UsesNone,
      any,
      [](const RelationIndices&) { return 2; },
      [](FusedFamily& F, const RelationIndices&) {
        const int s = F.sigma();
        return Sides(F.fused(1, 0, 0) * F.fused(1, 0, 2),
                     F.f(-1) * F.f(0) * F.fused(2, 0, 0) + real(s) * F.f(-3) * F.f(2) * F.fused(0, 1, 0));
      });
  add("fh_corner_10_01", "T10_0 T01_2 = f0 T11_0 + f-3 f-2 f2 f3 I", UsesNone,
      any,
      [](const RelationIndices&) { return 2; },
      [](FusedFamily& F, const RelationIndices&) {
        return Sides(F.fused(1, 0, 0) * F.fused(0, 1, 2),
                     F.f(0) * F.fused(1, 1, 0) + F.identity() * (F.f(-3) * F.f(-2) * F.f(2) * F.f(3)));
      });
  add("fh_corner_01_01", "T01_0 T01_2 = f0 f1 T02_0 + s f-2 f3 T10_2", UsesNone,
      any,
      [](const RelationIndices&) { return 2; },
      [](FusedFamily& F, const RelationIndices&) {
        const int s = F.sigma();
        return Sides(F.fused(0, 1, 0) * F.fused(0, 1, 2),
                     F.f(0) * F.f(1) * F.fused(0, 2, 0) + real(s) * F.f(-2) * F.f(3) * F.fused(1, 0, 2));
      });
  add("fh_boundary_m0", "Tm0_0 T10_2m = f2m-3 f2m-2 Tm+1,0_0 + s f2m Tm-1,1_0, m>1", UsesM,
      [](const RelationIndices& i) { return i.m > 1; },
      [](const RelationIndices& i) { return i.m + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, s = F.sigma();
        return Sides(F.fused(m, 0, 0) * F.fused(1, 0, 2 * m),
                     F.f(2 * m - 3) * F.f(2 * m - 2) * F.fused(m + 1, 0, 0) +
                         real(s) * F.f(2 * m) * F.fused(m - 1, 1, 0));
      });
  add("fh_boundary_0n", "T01_0 T0n_2 = f0 f1 T0,n+1_0 + s f-2 T1,n-1_2, n>1", UsesN,
      [](const RelationIndices& i) { return i.n > 1; },
      [](const RelationIndices& i) { return i.n + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int n = i.n, s = F.sigma();
        return Sides(F.fused(0, 1, 0) * F.fused(0, n, 2),
                     F.f(0) * F.f(1) * F.fused(0, n + 1, 0) + real(s) * F.f(-2) * F.fused(1, n - 1, 2));
      });
  add("fh_adjacent_m1", "Tm0_0 T01_2m = f2m-2 Tm1_0 + f2m f2m+1 Tm-1,0_0, m>1", UsesM,
      [](const RelationIndices& i) { return i.m > 1; },
      [](const RelationIndices& i) { return i.m + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m;
        return Sides(F.fused(m, 0, 0) * F.fused(0, 1, 2 * m),
                     F.f(2 * m - 2) * F.fused(m, 1, 0) + F.f(2 * m) * F.f(2 * m + 1) * F.fused(m - 1, 0, 0));
      });
  add("fh_adjacent_1n", "T10_0 T0n_2 = f0 T1n_0 + f-3 f-2 T0,n-1_4, n>1", UsesN,
      [](const RelationIndices& i) { return i.n > 1; },
      [](const RelationIndices& i) { return i.n + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int n = i.n;
        return Sides(F.fused(1, 0, 0) * F.fused(0, n, 2),
                     F.f(0) * F.fused(1, n, 0) + F.f(-3) * F.f(-2) * F.fused(0, n - 1, 4));
      });
  add("fh_bulk", "Tm0_0 T0n_2m = f2m-2 Tmn_0 + Tm-1,0_0 T0,n-1_2m+2, m,n>1", UsesM | UsesN,
      [](const RelationIndices& i) { return i.m > 1 && i.n > 1; },
      [](const RelationIndices& i) { return i.m + i.n; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, n = i.n;
        return Sides(F.fused(m, 0, 0) * F.fused(0, n, 2 * m),
                     F.f(2 * m - 2) * F.fused(m, n, 0) + F.fused(m - 1, 0, 0) * F.fused(0, n - 1, 2 * m + 2));
      });
  add("fh_three_term_left", "f-1 f0 f1 Tmn_0 = f1 T10_0 Tm-1,n_2 - s f-3 T01_0 Tm-2,n_4 + s f-3 f-2 f-1 Tm-3,n_6, m>3", UsesM | UsesN,
      [](const RelationIndices& i) { return i.m > 3 && i.n >= 0; },
      [](const RelationIndices& i) { return i.m + i.n; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, n = i.n, s = F.sigma();
        return Sides(F.f(-1) * F.f(0) * F.f(1) * F.fused(m, n, 0),
                     F.f(1) * F.fused(1, 0, 0) * F.fused(m - 1, n, 2) -
                         real(s) * F.f(-3) * F.fused(0, 1, 0) * F.fused(m - 2, n, 4) +
                         real(s) * F.f(-3) * F.f(-2) * F.f(-1) * F.fused(m - 3, n, 6));
      });
  add("fh_three_term_right",
      "f2M-3 f2M-4 f2M-5 Tmn_0 = f2M-5 Tm,n-1_0 T01_2M-2 - s f2M-1 Tm,n-2_0 T10_2M-2 + s f2M-1 f2M-2 f2M-3 Tm,n-3_0, M=m+n, n>3", UsesM | UsesN,
      [](const RelationIndices& i) { return i.n > 3 && i.m >= 0; },
      [](const RelationIndices& i) { return i.m + i.n; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, n = i.n, s = F.sigma(), M = 2 * (m + n);
        return Sides(F.f(M - 3) * F.f(M - 4) * F.f(M - 5) * F.fused(m, n, 0),
                     F.f(M - 5) * F.fused(m, n - 1, 0) * F.fused(0, 1, M - 2) -
                         real(s) * F.f(M - 1) * F.fused(m, n - 2, 0) * F.fused(1, 0, M - 2) +
                         real(s) * F.f(M - 1) * F.f(M - 2) * F.f(M - 3) * F.fused(m, n - 3, 0));
      });
  add("fh_left_m2", "f-1 f0 T2n_0 = T10_0 T1n_2 - s f-3 T01_0 T0n_4, n>=1", UsesN,
      [](const RelationIndices& i) { return i.n >= 1; },
      [](const RelationIndices& i) { return i.n + 2; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int n = i.n, s = F.sigma();
        return Sides(F.f(-1) * F.f(0) * F.fused(2, n, 0),
                     F.fused(1, 0, 0) * F.fused(1, n, 2) - real(s) * F.f(-3) * F.fused(0, 1, 0) * F.fused(0, n, 4));
      });
  add("fh_left_m3", "f-1 f0 f1 T3n_0 = f1 T10_0 T2n_2 - s f-3 T01_0 T1n_4 + s f-3 f-2 f-1 f3 T0n_6, n>=1", UsesN,
      [](const RelationIndices& i) { return i.n >= 1; },
      [](const RelationIndices& i) { return i.n + 3; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int n = i.n, s = F.sigma();
        return Sides(F.f(-1) * F.f(0) * F.f(1) * F.fused(3, n, 0),
                     F.f(1) * F.fused(1, 0, 0) * F.fused(2, n, 2) -
                         real(s) * F.f(-3) * F.fused(0, 1, 0) * F.fused(1, n, 4) +
                         real(s) * F.f(-3) * F.f(-2) * F.f(-1) * F.f(3) * F.fused(0, n, 6));
      });
  add("fh_right_n2", "f2m f2m+1 Tm2_0 = Tm1_0 T01_2m+2 - s f2m+3 Tm0_0 T10_2m+2, m>=1", UsesM,
      [](const RelationIndices& i) { return i.m >= 1; },
      [](const RelationIndices& i) { return i.m + 2; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, s = F.sigma();
        return Sides(F.f(2 * m) * F.f(2 * m + 1) * F.fused(m, 2, 0),
                     F.fused(m, 1, 0) * F.fused(0, 1, 2 * m + 2) -
                         real(s) * F.f(2 * m + 3) * F.fused(m, 0, 0) * F.fused(1, 0, 2 * m + 2));
      });
  add("fh_right_n3",
      "f2m+1 f2m+2 f2m+3 Tm3_0 = f2m+1 Tm2_0 T01_2m+4 - s f2m+5 Tm1_0 T10_2m+4 + s f2m-1 f2m+3 f2m+4 f2m+5 Tm0_0, m>=1", UsesM,
      [](const RelationIndices& i) { return i.m >= 1; },
      [](const RelationIndices& i) { return i.m + 3; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, s = F.sigma();
        return Sides(F.f(2 * m + 1) * F.f(2 * m + 2) * F.f(2 * m + 3) * F.fused(m, 3, 0),
                     F.f(2 * m + 1) * F.fused(m, 2, 0) * F.fused(0, 1, 2 * m + 4) -
                         real(s) * F.f(2 * m + 5) * F.fused(m, 1, 0) * F.fused(1, 0, 2 * m + 4) +
                         real(s) * F.f(2 * m - 1) * F.f(2 * m + 3) * F.f(2 * m + 4) * F.f(2 * m + 5) *
                             F.fused(m, 0, 0));
      });
  add("tsystem", "Tm0_0 Tm0_2 = s^m f-3 f2m Tm0_1 + Tm+1,0_0 Tm-1,0_2, m>=0", UsesM,
      [](const RelationIndices& i) { return i.m >= 0; },
      [](const RelationIndices& i) { return i.m + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, s = F.sigma();
        return Sides(F.fused(m, 0, 0) * F.fused(m, 0, 2),
                     real(sp(s, m)) * F.f(-3) * F.f(2 * m) * F.fused(m, 0, 1) +
                         F.fused(m + 1, 0, 0) * F.fused(m - 1, 0, 2));
      });
  add("tsystem_two_param",
      "Tm0_0 Tm-k,0_2k+2 = s^(m-k) f2m Tk,m-k_0 + Tm+1,0_0 Tm-1-k,0_2k+2, 1<=k<m", UsesM | UsesK,
      [](const RelationIndices& i) { return i.k >= 1 && i.k < i.m; },
      [](const RelationIndices& i) { return i.m + 1; },
      [](FusedFamily& F, const RelationIndices& i) {
        const int m = i.m, k = i.k, s = F.sigma();
        return Sides(F.fused(m, 0, 0) * F.fused(m - k, 0, 2 * k + 2),
                     real(sp(s, m - k)) * F.f(2 * m) * F.fused(k, m - k, 0) +
                         F.fused(m + 1, 0, 0) * F.fused(m - 1 - k, 0, 2 * k + 2));
      });
  add("folding", "T0m_0 = Tm0_1, m>=1", UsesM,
      [](const RelationIndices& i) { return i.m >= 1; },
      [](const RelationIndices& i) { return i.m; },
      [](FusedFamily& F, const RelationIndices& i) {
        return Sides(F.fused(0, i.m, 0), F.fused(i.m, 0, 1));
      });
  return R;
}

}  // namespace

const std::vector<FusionRelation>& fusion_relations() {
  static const std::vector<FusionRelation> rels = make_relations();
  return rels;
}

const FusionRelation& find_fusion_relation(const std::string& id) {
  for (const auto& r : fusion_relations())
    if (r.id == id) return r;
  throw Error(ErrorKind::UnknownIdentity, "unknown fusion relation " + id);
}

real verify_functional_relation(const std::string& id, const RelationIndices& idx,
                                FusedFamily& family) {
  const FusionRelation& rel = find_fusion_relation(id);
  if (!rel.valid(idx)) throw Error(ErrorKind::IndexOutOfRange, "indices outside the range of " + id);
  auto [lhs, rhs] = rel.sides(family, idx);
  return relative_residual(lhs, rhs);
}

std::vector<RelationIndices> reachable_indices(const FusionRelation& rel, int max_reach) {
  std::vector<RelationIndices> out;
  const int mm = rel.uses & UsesM ? max_reach : 0;
  const int nn = rel.uses & UsesN ? max_reach : 0;
  const int kk = rel.uses & UsesK ? max_reach : 0;
  for (int m = 0; m <= mm; ++m)
    for (int n = 0; n <= nn; ++n)
      for (int k = 0; k <= kk; ++k) {
        RelationIndices i{m, n, k};
        if (rel.valid(i) && rel.reach(i) <= max_reach) out.push_back(i);
      }
  return out;
}

real determinant_vs_recursion(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                              cplx u) {
  FusedFamily rec(ctx, basis, u, FusionSource::Recursion);
  FusedFamily det(ctx, basis, u, FusionSource::Determinant);
  return relative_residual(rec.fused(m, n, 0), det.fused(m, n, 0));
}

real periodicity_residual(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                          cplx u, FusionSource source) {
  FusedFamily a(ctx, basis, u, source);
  FusedFamily b(ctx, basis, u + pi, source);
  const real sign = (m >= 1 && n >= 1) ? real(ctx.sigma()) : real(1);
  return relative_residual(b.fused(m, n, 0), sign * a.fused(m, n, 0));
}

real family_commutator(FusedFamily& a, FusedFamily& b) {
  std::vector<Matrix> all;
  for (FusedFamily* fam : {&a, &b}) {
    for (auto [m, n, k] : fam->cached_labels()) all.push_back(fam->fused(m, n, k));
    all.push_back(fam->fundamental(0));
    all.push_back(fam->conjugate(0));
  }
  real worst = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const real scale = norm(all[i]) * norm(all[j]);
      if (scale == 0) continue;
      worst = std::max(worst, norm(all[i] * all[j] - all[j] * all[i]) / scale);
    }
  return worst;
}

namespace {

Matrix regularity_numerator(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                            cplx u) {
  auto T10 = [&](int k) { return build_fundamental(u + real(k) * ctx.lambda, basis, ctx); };
  auto T01 = [&](int k) { return build_conjugate(u + real(k) * ctx.lambda, basis, ctx); };
  auto f = [&](int k) { return f_k(u, k, ctx); };
  if (m == 2 && n == 0) return T10(0) * T10(2) - real(ctx.sigma()) * f(-3) * f(2) * T01(0);
  if (m == 1 && n == 1)
    return T10(0) * T01(2) -
           Matrix::Identity(basis.size(), basis.size()) * (f(-3) * f(-2) * f(2) * f(3));
  throw Error(ErrorKind::IndexOutOfRange, "regularity is checked for (2,0) and (1,1) only");
}

}  // namespace

real regularity_residual(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                         cplx u) {
  const Matrix at_zero = regularity_numerator(m, n, ctx, basis, ctx.xi.back());
  const Matrix generic = regularity_numerator(m, n, ctx, basis, u);
  return norm(at_zero) / norm(generic);
}

int expected_degree(int m, int n, int N) { return (m == 0 || n == 0) ? 2 * N : 3 * N; }

PolynomialFit polynomiality_check(int m, int n, const SpectralContext& ctx,
                                  const ModuleBasis& basis, FusionSource source, real radius,
                                  real offset) {
  const int bound = 4 * ctx.N;
  auto F = [&](cplx u) { return FusedFamily(ctx, basis, u, source).fused(m, n, 0); };
  PolynomialFit out;
  out.expected_degree = expected_degree(m, n, ctx.N);
  for (int attempt = 0;; ++attempt) {
    try {
      const real off = offset + real(0.037) * real(attempt);
      LaurentFit fit = fit_laurent(F, bound, radius, off);
      std::vector<cplx> probes;
      const real step = 2 * pi / real(2 * bound + 1);
      for (int p = 0; p < 3; ++p)
        probes.push_back(laurent_sample_point(3 * p + 1, bound, radius, off) + step / 2);
      out.fit_residual = fit_residual(fit, F, probes);
      out.detected_degree = fit.detected_degree(1e-9);
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingularU || attempt >= 5) throw;
    }
  }
}

Vector t_eigenvalues(int m, int k, FusedFamily& F, const CommonEigenbasis& eb) {
  const int D = eb.size();
  if (m == 0) return Vector::Zero(D);
  const Vector a = eb.eigenvalues(F.fused(m + 1, 0, k));
  const Vector b = eb.eigenvalues(F.fused(m - 1, 0, k + 2));
  const Vector c = eb.eigenvalues(F.fused(m, 0, k + 1));
  const cplx scal = real(sign_pow(F.sigma(), m)) * F.f(k - 3) * F.f(k + 2 * m);
  Vector t(D);
  for (int i = 0; i < D; ++i) t[i] = a[i] * b[i] / (scal * c[i]);
  return t;
}

CommonEigenbasis family_eigenbasis(FusedFamily& F, std::mt19937_64& rng) {
  return CommonEigenbasis({F.fundamental(0), F.fundamental(1), F.conjugate(3)}, rng);
}

real ysystem_residual(int m, FusedFamily& F, std::mt19937_64& rng) {
  if (m < 1) throw Error(ErrorKind::IndexOutOfRange, "Y-system level must be at least 1");
  const CommonEigenbasis eb = family_eigenbasis(F, rng);
  const Vector t0 = t_eigenvalues(m, 0, F, eb), t2 = t_eigenvalues(m, 2, F, eb), t1 = t_eigenvalues(m, 1, F, eb);
  const Vector lo = t_eigenvalues(m - 1, 2, F, eb), hi = t_eigenvalues(m + 1, 0, F, eb);
  real worst = 0;
  for (int i = 0; i < eb.size(); ++i) {
    const cplx lhs = t0[i] * t2[i];
    const cplx rhs = (real(1) + lo[i]) * (real(1) + hi[i]) / (real(1) + real(1) / t1[i]);
    const real scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

Matrix braid_fused(int m, int n, int sign, const ModuleBasis& basis, const SpectralContext& ctx) {
  if (m < 0 || n < 0) return Matrix::Zero(basis.size(), basis.size());
  const Matrix T1 = build_braid(sign, basis, ctx);
  const Matrix I = Matrix::Identity(basis.size(), basis.size());
  const int top = std::max(m, n);
  // H[j+1] holds T^{j,0}; H[0] is the zero label -1.
  std::vector<Matrix> H{Matrix::Zero(basis.size(), basis.size()), I, T1};
  for (int j = 2; j <= top; ++j) {
    // T^{j,0} = T^{j-1,0} T1 - T^{j-2,1}, with T^{j-2,1} = T^{j-2,0} T1 - T^{j-3,0}.
    const Matrix mixed = H[j - 1] * T1 - H[j - 2];
    H.push_back(H[j] * T1 - mixed);
  }
  return H[m + 1] * H[n + 1] - H[m] * H[n];
}

BraidFusedCheck braid_fused_check(int m, int sign, const ModuleBasis& basis,
                                  const SpectralContext& ctx) {
  const Matrix T = braid_fused(m, 0, sign, basis, ctx);
  const int D = basis.size();
  const cplx c = T.trace() / real(D);
  BraidFusedCheck out;
  const real scale = std::max(norm(T), real(1e-300));
  out.scalar_defect = norm(T - c * Matrix::Identity(D, D)) / scale;
  const cplx expect = fused_braid_eigenvalue(m, basis.d, sign, ctx);
  out.eigenvalue_error = std::abs(c - expect) / std::max(real(1), std::abs(expect));
  return out;
}


}  // namespace dilute
