#include "dilute/projectors.hpp"

#include "dilute/transfer.hpp"

namespace dilute {

cplx BracketValues::square(int m) const { return cplx(0, 2 * std::sin(real(m) * lambda)); }
cplx BracketValues::curly(int m) const { return cplx(2 * std::cos(real(m) * lambda), 0); }

namespace {

cplx checked_div(cplx num, cplx den) {
  if (std::abs(den) < real(1e-12)) throw Error(ErrorKind::DegenerateBracket, "vanishing bracket in prefactor");
  return num / den;
}

}  // namespace

cplx prefactor(PrefactorKind kind, int i, int m, real lambda) {
  const BracketValues b{lambda};
  auto sq = [&](int k) { return b.square(k); };
  auto cu = [&](int k) { return b.curly(k); };
  const bool eps = kind == PrefactorKind::Epsilon || kind == PrefactorKind::EpsilonBar;
  if (i < 1 || i > (eps ? 2 : 4)) throw Error(ErrorKind::IndexOutOfRange, "prefactor index");
  const int M = 2 * m;
  switch (kind) {
    case PrefactorKind::Kappa:
      switch (i) {
        case 1: return -checked_div(sq(M) * sq(M + 1), sq(M + 2) * sq(M + 3));
        case 2: return -checked_div(sq(M), sq(M + 2));
        case 3: return checked_div(sq(M) * sq(M + 1), sq(M - 1) * sq(M + 2));
        default: return checked_div(sq(1) * sq(2) * sq(M), sq(M - 1) * sq(M + 2) * sq(M + 3));
      }
    case PrefactorKind::Epsilon:
      if (i == 1) return checked_div(sq(M) * sq(M + 1), sq(M + 3) * sq(M + 4));
      return checked_div(sq(M) * sq(M + 1) * sq(M + 5), sq(M - 1) * sq(M + 3) * sq(M + 4));
    case PrefactorKind::KappaBar:
      switch (i) {
        case 1: return -checked_div(sq(M) * cu(M + 1), sq(M + 2) * cu(M + 3));
        case 2: return checked_div(sq(M), sq(M + 2));
        case 3: return checked_div(sq(M) * cu(M + 1), cu(M - 1) * sq(M + 2));
        default: return checked_div(sq(1) * sq(2) * sq(M), cu(M - 1) * sq(M + 2) * cu(M + 3));
      }
    case PrefactorKind::EpsilonBar:
      if (i == 1) return -checked_div(sq(M) * cu(M + 1), cu(M + 3) * sq(M + 4));
      return checked_div(sq(M) * cu(M + 1) * cu(M + 5), cu(M - 1) * cu(M + 3) * sq(M + 4));
  }
  return 0;
}

DiskTangle strand_identity(int k) {
  DiskTangle t(2 * k);
  for (int mask = 0; mask < (1 << k); ++mask) {
    Pairing p(2 * k, -1);
    for (int i = 1; i <= k; ++i)
      if (mask >> (i - 1) & 1) {
        p[i - 1] = std::int8_t(2 * k - i);
        p[2 * k - i] = std::int8_t(i - 1);
      }
    t.add(p, 1);
  }
  return t;
}

DiskTangle stack(const DiskTangle& lower, const DiskTangle& upper, cplx beta) {
  const int k = lower.size() / 2;
  if (upper.size() != lower.size()) throw Error(ErrorKind::InterfaceMismatch, "stacking tangles of different width");
  std::vector<std::pair<int, int>> links;
  for (int i = 1; i <= k; ++i) links.push_back({2 * k - i, 2 * k + i - 1});
  std::vector<int> outs;
  for (int i = 0; i < k; ++i) outs.push_back(i);
  for (int i = k; i < 2 * k; ++i) outs.push_back(2 * k + i);
  return glue(lower, upper, links, outs, beta);
}

DiskTangle beside(const DiskTangle& a, const DiskTangle& b) {
  const int k = a.size() / 2, l = b.size() / 2, n = k + l;
  std::vector<int> perm(2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    if (r < k) perm[r] = r;
    else if (r < n) perm[r] = 2 * k + (r - k);
    else {
      const int i = 2 * n - r;
      perm[r] = i <= k ? 2 * k - i : 2 * k + 2 * l - (i - k);
    }
  }
  return permute_nodes(disjoint_union(a, b), perm);
}

DiskTangle mirror(const DiskTangle& t) {
  const int k = t.size() / 2;
  std::vector<int> perm(2 * k);
  for (int r = 0; r < k; ++r) perm[r] = k - r - 1;
  for (int r = k; r < 2 * k; ++r) perm[r] = 3 * k - r - 1;
  return permute_nodes(t, perm);
}

namespace {

// Two-strand block: labelled triangle joining the bottom pair, dotted triangle
// feeding the top pair through the shared edge.
DiskTangle kappa_block(int m, PrefactorFamily fam, real lambda) {
  Network net(loop_fugacity(lambda));
  int k = net.add(kappa_triangle(m, fam, lambda));
  int d = net.add(dotted_triangle(lambda));
  net.connect({k, 2}, {d, 2});
  return net.contract({{k, 0}, {k, 1}, {d, 1}, {d, 0}});
}

// Two-strand block: wavy triangle below, dilute cap above.
DiskTangle wavy_block(int m, PrefactorFamily fam, real lambda) {
  const PrefactorKind ek = fam == PrefactorFamily::Primary ? PrefactorKind::Epsilon : PrefactorKind::EpsilonBar;
  const cplx e1 = prefactor(ek, 1, m, lambda), e2 = prefactor(ek, 2, m, lambda);
  DiskTangle t(4);
  Pairing bb{1, 0, -1, -1}, tt{-1, -1, 3, 2}, both{1, 0, 3, 2}, none{-1, -1, -1, -1};
  t.add(both, e1);
  t.add(bb, e1);
  t.add(tt, e2);
  t.add(none, e2);
  return t;
}

DiskTangle sandwich(const DiskTangle& outer, const DiskTangle& middle, cplx beta) {
  return outer - stack(stack(outer, middle, beta), outer, beta);
}

DiskTangle projector_m0(int m, PrefactorFamily fam, real lambda) {
  const cplx beta = loop_fugacity(lambda);
  DiskTangle p = strand_identity(1);
  for (int k = 2; k <= m; ++k) {
    DiskTangle outer = beside(p, strand_identity(1));
    DiskTangle mid = beside(strand_identity(k - 2), kappa_block(k - 1, fam, lambda));
    p = sandwich(outer, mid, beta);
    p.prune();
  }
  return p;
}

DiskTangle projector_m1(int m, PrefactorFamily fam, real lambda) {
  const cplx beta = loop_fugacity(lambda);
  DiskTangle outer = beside(projector_m0(m, fam, lambda), strand_identity(1));
  DiskTangle mid = beside(strand_identity(m - 1), wavy_block(m, fam, lambda));
  DiskTangle p = sandwich(outer, mid, beta);
  p.prune();
  return p;
}

int strand_count(ProjectorLabel label, int m) {
  return (label == ProjectorLabel::M1 || label == ProjectorLabel::OneN) ? m + 1 : m;
}

// Glues a tangle with nodes (x, y, free...) under bottom strands i, i+1 of p.
DiskTangle cap_bottom_pair(const DiskTangle& p, int i, const DiskTangle& cap, cplx beta) {
  const int n = p.size();
  std::vector<std::pair<int, int>> links{{i - 1, n + 0}, {i, n + 1}};
  std::vector<int> outs;
  for (int r = 0; r < n; ++r)
    if (r != i - 1 && r != i) outs.push_back(r);
  for (int r = 2; r < cap.size(); ++r) outs.push_back(n + r);
  return glue(p, cap, links, outs, beta);
}

}  // namespace

ProjectorTangle build_projector(ProjectorLabel label, int m, PrefactorFamily family, real lambda) {
  require_nonsingular(lambda);
  if (m < 1) throw Error(ErrorKind::UnsupportedLabel, "projector label index must be at least 1");
  ProjectorTangle r{label, m, family, DiskTangle()};
  switch (label) {
    case ProjectorLabel::M0: r.tangle = projector_m0(m, family, lambda); break;
    case ProjectorLabel::M1: r.tangle = projector_m1(m, family, lambda); break;
    case ProjectorLabel::ZeroN: r.tangle = mirror(projector_m0(m, family, lambda)); break;
    case ProjectorLabel::OneN: r.tangle = mirror(projector_m1(m, family, lambda)); break;
  }
  return r;
}

ProjectorChecks check_projector(const ProjectorTangle& p, real lambda) {
  const cplx beta = loop_fugacity(lambda);
  const DiskTangle& P = p.tangle;
  const int k = p.strands();
  ProjectorChecks c;
  c.idempotency = tangle_residual(stack(P, P, beta), P);

  const bool mirrored = p.label == ProjectorLabel::ZeroN || p.label == ProjectorLabel::OneN;
  const int absorb_max = p.m;
  for (int n = 1; n <= absorb_max; ++n) {
    DiskTangle small = projector_m0(n, p.family, lambda);
    DiskTangle ext = beside(small, strand_identity(k - n));
    if (mirrored) ext = mirror(ext);
    c.absorption = std::max(c.absorption, tangle_residual(stack(P, ext, beta), P));
    c.absorption = std::max(c.absorption, tangle_residual(stack(ext, P, beta), P));
  }

  const real scale = P.max_abs();
  auto rel = [&](const DiskTangle& t) { return t.max_abs() / scale; };
  if (p.label == ProjectorLabel::M0 || p.label == ProjectorLabel::ZeroN) {
    for (int i = 1; i < k; ++i) {
      real r = rel(cap_bottom_pair(P, i, dotted_triangle(lambda), beta));
      c.pair_annihilation.push_back({i, r});
      c.annihilation = std::max(c.annihilation, r);
    }
  } else {
    const int i = p.label == ProjectorLabel::M1 ? k - 1 : 1;
    c.annihilation = rel(cap_bottom_pair(P, i, dashed_strand(), beta));
    c.pair_annihilation.push_back({i, c.annihilation});
  }
  return c;
}

real family_difference(int m, real lambda) {
  DiskTangle a = projector_m0(m, PrefactorFamily::Primary, lambda);
  DiskTangle b = projector_m0(m, PrefactorFamily::Alternate, lambda);
  return tangle_residual(a, b);
}

Matrix projected_fused_transfer(ProjectorLabel label, int m, cplx u, const ModuleBasis& basis,
                                const SpectralContext& ctx, PrefactorFamily family) {
  int mm = 0, nn = 0;
  switch (label) {
    case ProjectorLabel::M0: mm = m; break;
    case ProjectorLabel::M1: mm = m; nn = 1; break;
    case ProjectorLabel::ZeroN: nn = m; break;
    case ProjectorLabel::OneN: mm = 1; nn = m; break;
  }
  const int h = strand_count(label, m);
  std::vector<int> shifts;
  for (int i = 0; i < mm; ++i) shifts.push_back(2 * i);
  for (int i = 0; i < nn; ++i) shifts.push_back(2 * mm + 1 + 2 * i);
  const DiskTangle P = build_projector(label, m, family, ctx.lambda).tangle;
  std::vector<RowPiece> row;
  for (int j = 0; j < basis.N; ++j) {
    row.push_back({P, h, false});
    std::vector<cplx> args;
    for (int s : shifts) args.push_back(u - ctx.xi[j] + real(s) * ctx.lambda);
    row.push_back({face_column(args, ctx.lambda), h, true});
  }
  cplx norm = 1;
  for (int k = -1; k <= 2 * mm + 2 * nn - 3; ++k)
    if (k != 2 * mm - 3 && k != 2 * mm - 1) norm /= f_k(u, k, ctx);
  return row_transfer(row, basis, ctx) * norm;
}

}  // namespace dilute
