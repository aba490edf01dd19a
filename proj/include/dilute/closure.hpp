#pragma once

#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dilute/fusion.hpp"

namespace dilute {

// Largest residual of the 2b-periodicity of f_k, T^{m,0}, T^{0,n} and T^{m,n}
// (m,n >= 1) over k in [-3,3].
real check_root_symmetries(const SpectralContext& ctx, const ModuleBasis& basis, cplx u,
                           FusionSource source);

// sigma^{-a} (T^{b,0} - T^{b-2,1} + T^{b-3,0}) in the braid limit of the given sign.
Matrix compute_J(const ModuleBasis& basis, const SpectralContext& ctx, int sign = 1);

struct JCheck {
  real scalar_defect = 0;     // ||J - cI|| / ||J||
  real eigenvalue_error = 0;  // |c - closed form|
  real sign_agreement = 0;    // both braid limits
  real centrality = 0;        // commutators with the fundamentals
  real u_independence = 0;    // J solved from the closure at two base points
  real closure_match = 0;     // that J against the braid-limit J
  cplx eigenvalue{0, 0};
};

// Throws EigenvalueMismatch when the eigenvalue error exceeds tol.
JCheck check_J(const ModuleBasis& basis, const SpectralContext& ctx, cplx u1, cplx u2,
               FusionSource source, real tol = 1e-9);

struct ClosureRelation {
  std::string id;
  std::string description;
  bool uses_k = false;
};

// closure_b0, closure_0b, closure_bk, closure_kb, quartic.
const std::vector<ClosureRelation>& closure_relations();

// Legal k for closure_bk / closure_kb: 1..b-1.
std::vector<int> closure_k_values(const SpectralContext& ctx);

// Relative residual of a closure relation; J is the braid-limit matrix.
real closure_residual(const std::string& id, int k, FusedFamily& family, const Matrix& J);

// Fits both sides of closure_b0 / closure_0b as Laurent polynomials from
// generic samples, then compares them at the zeros of f_{-2}, f_{-3} (and
// f_{-1} when use_f1 is set) plus one generic point, relative to the largest
// side on the sampling circle. The residual also covers the fit error at the
// generic point.
struct GridCheck {
  int points = 0;
  real residual = 0;
};
GridCheck closure_grid_check(const std::string& id, bool use_f1, const SpectralContext& ctx,
                             const ModuleBasis& basis, const Matrix& J, FusionSource source,
                             cplx generic_point);

// Eigenvalue-wise residuals of the closed Y-system at the top level.
struct YClosure {
  real raw = 0;          // the ratio form
  real product_t = 0;    // 1 + t^{b-1} in product form
  real product_x = 0;    // x_0 x_2
  real product_y = 0;    // y_1 y_3
  real raw_vs_product = 0;
  real lambda_consistency = 0;  // e^{iL} + 1 + e^{-iL} against sigma^a J
};
YClosure y_closure_residuals(FusedFamily& family, const Matrix& J, std::mt19937_64& rng);

struct TbaNode {
  std::string id;
  std::string kind;  // t, x or y
};

struct TbaEdge {
  std::string from;
  std::string to;
  int multiplicity = 1;
  std::string role;  // numerator, denominator or mixed
};

struct TbaDiagram {
  int a = 0;
  int b = 0;
  std::vector<TbaNode> nodes;
  std::vector<TbaEdge> edges;
};

TbaDiagram export_tba_diagram(int a, int b);
std::string tba_to_text(const TbaDiagram& d);

}  // namespace dilute
