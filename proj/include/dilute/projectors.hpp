#pragma once

#include <utility>

#include "dilute/linkstates.hpp"
#include "dilute/planar.hpp"

namespace dilute {

struct BracketValues {
  real lambda;
  cplx square(int m) const;  // x^m - x^-m
  cplx curly(int m) const;   // x^m + x^-m
};

enum class PrefactorKind { Kappa, Epsilon, KappaBar, EpsilonBar };

// kappa_i for i=1..4, epsilon_i for i=1..2. Throws DegenerateBracket.
cplx prefactor(PrefactorKind kind, int i, int m, real lambda);

enum class ProjectorLabel { M0, M1, ZeroN, OneN };

// Node order: bottom strands 1..k (index i-1), then top strands k..1
// (top strand i at index 2k-i), k = number of strands.
struct ProjectorTangle {
  ProjectorLabel label;
  int m;  // m for (m,0),(m,1); n for (0,n),(1,n)
  PrefactorFamily family;
  DiskTangle tangle;
  int strands() const { return tangle.size() / 2; }
};

// Identity on k dilute strands in projector node order.
DiskTangle strand_identity(int k);
// Stack lower below upper: lower's top strand i meets upper's bottom strand i.
DiskTangle stack(const DiskTangle& lower, const DiskTangle& upper, cplx beta);
// Place a (k strands) beside b (l strands): a on the left.
DiskTangle beside(const DiskTangle& a, const DiskTangle& b);
// Reflection about a vertical axis: strand i <-> strand k+1-i.
DiskTangle mirror(const DiskTangle& t);

ProjectorTangle build_projector(ProjectorLabel label, int m, PrefactorFamily family, real lambda);

struct ProjectorChecks {
  real idempotency = 0;
  real absorption = 0;  // max over both orders and all 1<=n<=m
  real annihilation = 0;
  std::vector<std::pair<int, real>> pair_annihilation;  // per adjacent bottom pair (first strand, residual)
};

ProjectorChecks check_projector(const ProjectorTangle& p, real lambda);

// max |coefficient difference| between the two families at label (m,0), relative.
real family_difference(int m, real lambda);

// Fused column of (m,0) or (m,1) faces with projectors at each junction, normalized.
Matrix projected_fused_transfer(ProjectorLabel label, int m, cplx u, const ModuleBasis& basis,
                                const SpectralContext& ctx,
                                PrefactorFamily family = PrefactorFamily::Primary);

}  // namespace dilute
