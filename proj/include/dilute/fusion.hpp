#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dilute/laurent.hpp"
#include "dilute/linkstates.hpp"
#include "dilute/scalars.hpp"
#include "dilute/spectrum.hpp"

namespace dilute {

enum class FusionSource { Recursion, Determinant };

const char* fusion_source_name(FusionSource s);

// Fused transfer matrices T^{m,n}(u + k lambda) at one base u, built on demand
// and cached. Shifted fundamentals are fresh builds at the shifted argument.
class FusedFamily {
 public:
  FusedFamily(const SpectralContext& ctx, const ModuleBasis& basis, cplx u,
              FusionSource source = FusionSource::Recursion);

  // (0,0) gives f_{k-3} f_{k-2} I; any negative label gives 0.
  const Matrix& fused(int m, int n, int k);
  const Matrix& fundamental(int k);
  const Matrix& conjugate(int k);
  cplx f(int k) const;
  Matrix identity() const;

  cplx u() const { return u_; }
  int sigma() const { return ctx_.sigma(); }
  FusionSource source() const { return source_; }
  const SpectralContext& context() const { return ctx_; }
  const ModuleBasis& basis() const { return basis_; }
  std::vector<std::tuple<int, int, int>> cached_labels() const;

  // Smallest |f| a division may use before NearSingularU is raised.
  static constexpr real divisor_floor = 1e-6;

 private:
  Matrix by_recursion(int m, int n, int k);
  Matrix by_determinant(int m, int n, int k);
  cplx divisor(std::initializer_list<int> ks) const;

  SpectralContext ctx_;
  const ModuleBasis& basis_;
  cplx u_;
  FusionSource source_;
  std::map<std::tuple<int, int, int>, Matrix> cache_;
  std::map<int, Matrix> t10_, t01_;
  Matrix zero_;
};

// Determinant of a square array whose entries are mutually commuting matrices.
// Null entries (empty matrices) are zero.
Matrix commuting_determinant(const std::vector<std::vector<Matrix>>& entries, int dim);

// Draws a base u whose f_k, k in [-8, 2*reach+8], all exceed 1e-3 of their median.
cplx generic_u(const SpectralContext& ctx, int reach, std::mt19937_64& rng);

// Labelled fusion relations. Each evaluates (LHS, RHS) on a family.
struct RelationIndices {
  int m = 0;
  int n = 0;
  int k = 0;
};

enum IndexUse : unsigned { UsesNone = 0, UsesM = 1, UsesN = 2, UsesK = 4 };

struct FusionRelation {
  std::string id;
  std::string description;
  unsigned uses = UsesNone;
  std::function<bool(const RelationIndices&)> valid;
  // Largest m+n among the fused labels the relation touches.
  std::function<int(const RelationIndices&)> reach;
  std::function<std::pair<Matrix, Matrix>(FusedFamily&, const RelationIndices&)> sides;
};

const std::vector<FusionRelation>& fusion_relations();
const FusionRelation& find_fusion_relation(const std::string& id);

// Relative residual of a relation; IndexOutOfRange outside its stated range.
real verify_functional_relation(const std::string& id, const RelationIndices& idx,
                                FusedFamily& family);

// Index sets of a relation whose reach does not exceed max_reach.
std::vector<RelationIndices> reachable_indices(const FusionRelation& rel, int max_reach);

// Relative distance between determinant and recursion builds of T^{m,n}_0.
real determinant_vs_recursion(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                              cplx u);

// T^{m,n}(u+pi) against sigma^{[m,n>=1]} T^{m,n}(u).
real periodicity_residual(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                          cplx u, FusionSource source);

// Largest pairwise relative commutator over every cached matrix of both families.
real family_commutator(FusedFamily& a, FusedFamily& b);

// Numerator of the (2,0) or (1,1) recursion at u = xi_N, relative to its size
// at the generic point u.
real regularity_residual(int m, int n, const SpectralContext& ctx, const ModuleBasis& basis,
                         cplx u);

struct PolynomialFit {
  int expected_degree = 0;
  int detected_degree = 0;
  real fit_residual = 0;
};

// Samples T^{m,n}(u) on a circle grid bounded by degree 4N and reports the
// detected degree and the error at off-grid points.
PolynomialFit polynomiality_check(int m, int n, const SpectralContext& ctx,
                                  const ModuleBasis& basis, FusionSource source, real radius = 1,
                                  real offset = 0.1);

int expected_degree(int m, int n, int N);

// Eigenvalues of t^m_k = T^{m+1,0}_k T^{m-1,0}_{k+2} / (s^m f_{k-3} f_{k+2m} T^{m,0}_{k+1});
// zero for m = 0.
Vector t_eigenvalues(int m, int k, FusedFamily& family, const CommonEigenbasis& eb);

// Basis diagonalizing the family, built from fundamentals at three shifts.
CommonEigenbasis family_eigenbasis(FusedFamily& family, std::mt19937_64& rng);

// Eigenvalue-wise Y-system residual at level m >= 1.
real ysystem_residual(int m, FusedFamily& family, std::mt19937_64& rng);

// Braid-limit fused matrices from the braid hierarchy; T^{0,n} = T^{n,0}.
Matrix braid_fused(int m, int n, int sign, const ModuleBasis& basis, const SpectralContext& ctx);

struct BraidFusedCheck {
  real scalar_defect = 0;
  real eigenvalue_error = 0;
};

// Compares T^{m,0} in the braid limit with the Chebyshev eigenvalue.
BraidFusedCheck braid_fused_check(int m, int sign, const ModuleBasis& basis,
                                  const SpectralContext& ctx);

}  // namespace dilute
