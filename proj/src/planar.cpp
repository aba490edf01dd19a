#include "dilute/planar.hpp"

#include <algorithm>
#include <set>

#include "dilute/projectors.hpp"

namespace dilute {

void DiskTangle::add(const Pairing& p, cplx c) {
  if (int(p.size()) != n_) throw Error(ErrorKind::InterfaceMismatch, "pairing size differs from tangle");
  if (c == cplx(0)) return;
  auto [it, inserted] = terms_.emplace(p, c);
  if (!inserted) it->second += c;
}

void DiskTangle::prune(real eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < eps) it = terms_.erase(it);
    else ++it;
  }
}

cplx DiskTangle::coefficient(const Pairing& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? cplx(0) : it->second;
}

real DiskTangle::max_abs() const {
  real m = 0;
  for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

DiskTangle DiskTangle::operator+(const DiskTangle& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::InterfaceMismatch, "adding tangles of different size");
  DiskTangle r = *this;
  for (const auto& [p, c] : o.terms_) r.add(p, c);
  return r;
}

DiskTangle DiskTangle::operator-(const DiskTangle& o) const { return *this + o * cplx(-1); }

DiskTangle DiskTangle::operator*(cplx c) const {
  DiskTangle r(n_);
  for (const auto& [p, v] : terms_) r.add(p, v * c);
  return r;
}

std::string pairing_key(const Pairing& p) {
  std::string s(p.size(), 'V');
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] >= 0) s[i] = std::size_t(p[i]) > i ? '(' : ')';
  return s;
}

Pairing pairing_from_key(const std::string& key) {
  Pairing p(key.size(), -1);
  std::vector<int> st;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '(') st.push_back(int(i));
    else if (key[i] == ')') {
      if (st.empty()) throw Error(ErrorKind::MalformedDiagram, "unbalanced key " + key);
      p[i] = std::int8_t(st.back());
      p[st.back()] = std::int8_t(i);
      st.pop_back();
    } else if (key[i] != 'V') {
      throw Error(ErrorKind::MalformedDiagram, "bad key " + key);
    }
  }
  if (!st.empty()) throw Error(ErrorKind::MalformedDiagram, "unbalanced key " + key);
  return p;
}

bool is_planar(const Pairing& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || std::size_t(p[i]) < i) continue;
    for (std::size_t j = i + 1; j < std::size_t(p[i]); ++j)
      if (p[j] >= 0 && (std::size_t(p[j]) < i || std::size_t(p[j]) > std::size_t(p[i]))) return false;
  }
  return true;
}

real tangle_residual(const DiskTangle& lhs, const DiskTangle& rhs) {
  real scale = lhs.max_abs();
  if (scale == 0) scale = 1;
  real r = 0;
  std::set<Pairing> keys;
  for (const auto& [p, c] : lhs.terms()) keys.insert(p);
  for (const auto& [p, c] : rhs.terms()) keys.insert(p);
  for (const auto& p : keys) r = std::max(r, std::abs(lhs.coefficient(p) - rhs.coefficient(p)));
  return r / scale;
}

DiskTangle permute_nodes(const DiskTangle& t, const std::vector<int>& perm) {
  const int n = t.size();
  if (int(perm.size()) != n) throw Error(ErrorKind::InterfaceMismatch, "permutation size");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;
  DiskTangle r(n);
  for (const auto& [p, c] : t.terms()) {
    Pairing q(n, -1);
    for (int i = 0; i < n; ++i) {
      int old = perm[i];
      if (p[old] >= 0) q[i] = std::int8_t(inv[p[old]]);
    }
    r.add(q, c);
  }
  return r;
}

DiskTangle rotate(const DiskTangle& t, int k) {
  const int n = t.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[((i + k) % n + n) % n] = i;
  return permute_nodes(t, perm);
}

DiskTangle disjoint_union(const DiskTangle& a, const DiskTangle& b) {
  const int na = a.size(), nb = b.size();
  DiskTangle r(na + nb);
  for (const auto& [pa, ca] : a.terms())
    for (const auto& [pb, cb] : b.terms()) {
      Pairing q(na + nb, -1);
      for (int i = 0; i < na; ++i) q[i] = pa[i];
      for (int i = 0; i < nb; ++i) q[na + i] = pb[i] < 0 ? std::int8_t(-1) : std::int8_t(pb[i] + na);
      r.add(q, ca * cb);
    }
  return r;
}

DiskTangle glue(const DiskTangle& a, const DiskTangle& b,
                const std::vector<std::pair<int, int>>& links, const std::vector<int>& outputs,
                cplx beta) {
  const int na = a.size(), n = a.size() + b.size();
  std::vector<int> link(n, -1), out_pos(n, -1);
  for (auto [x, y] : links) {
    if (x < 0 || y < 0 || x >= n || y >= n || x == y || link[x] >= 0 || link[y] >= 0)
      throw Error(ErrorKind::InterfaceMismatch, "invalid node identification");
    link[x] = y;
    link[y] = x;
  }
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    int o = outputs[k];
    if (o < 0 || o >= n || link[o] >= 0 || out_pos[o] >= 0)
      throw Error(ErrorKind::InterfaceMismatch, "invalid output node");
    out_pos[o] = int(k);
  }
  for (int i = 0; i < n; ++i)
    if (link[i] < 0 && out_pos[i] < 0)
      throw Error(ErrorKind::InterfaceMismatch, "node neither glued nor output");

  const int nout = int(outputs.size());
  DiskTangle r(nout);
  std::vector<int> P(n);
  std::vector<char> seen(n);
  for (const auto& [pa, ca] : a.terms()) {
    for (int i = 0; i < na; ++i) P[i] = pa[i];
    for (const auto& [pb, cb] : b.terms()) {
      for (int i = 0; i < b.size(); ++i) P[na + i] = pb[i] < 0 ? -1 : pb[i] + na;
      bool ok = true;
      for (auto [x, y] : links)
        if ((P[x] < 0) != (P[y] < 0)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::fill(seen.begin(), seen.end(), 0);
      Pairing q(nout, -1);
      for (int k = 0; k < nout; ++k) {
        int o = outputs[k];
        if (P[o] < 0 || seen[o]) continue;
        int cur = o;
        seen[cur] = 1;
        while (true) {
          int nx = P[cur];
          seen[nx] = 1;
          if (link[nx] >= 0) {
            cur = link[nx];
            seen[cur] = 1;
          } else {
            q[k] = std::int8_t(out_pos[nx]);
            q[out_pos[nx]] = std::int8_t(k);
            break;
          }
        }
      }
      int loops = 0;
      for (int x = 0; x < n; ++x) {
        if (seen[x] || P[x] < 0) continue;
        int cur = x;
        do {
          seen[cur] = 1;
          int nx = P[cur];
          seen[nx] = 1;
          cur = link[nx];
        } while (cur != x);
        ++loops;
      }
      cplx c = ca * cb;
      for (int l = 0; l < loops; ++l) c *= beta;
      r.add(q, c);
    }
  }
  r.prune(0);
  return r;
}

int Network::add(const DiskTangle& t) {
  tangles_.push_back(t);
  return int(tangles_.size()) - 1;
}

void Network::connect(NodeRef a, NodeRef b) { links_.push_back({a, b}); }

DiskTangle Network::contract(const std::vector<NodeRef>& outputs) const {
  auto same = [](NodeRef x, NodeRef y) { return x.tangle == y.tangle && x.node == y.node; };
  std::vector<char> used(links_.size(), 0);
  DiskTangle cur(0);
  cur.add(Pairing{}, 1);
  std::vector<NodeRef> labels;
  for (int t = 0; t < int(tangles_.size()); ++t) {
    std::vector<NodeRef> uni = labels;
    for (int i = 0; i < tangles_[t].size(); ++i) uni.push_back({t, i});
    auto pos = [&](NodeRef r) {
      for (std::size_t i = 0; i < uni.size(); ++i)
        if (same(uni[i], r)) return int(i);
      return -1;
    };
    std::vector<std::pair<int, int>> gl;
    std::vector<char> consumed(uni.size(), 0);
    for (std::size_t l = 0; l < links_.size(); ++l) {
      if (used[l]) continue;
      auto [x, y] = links_[l];
      if (x.tangle > t || y.tangle > t) continue;
      int px = pos(x), py = pos(y);
      if (px < 0 || py < 0) throw Error(ErrorKind::InterfaceMismatch, "node linked twice");
      gl.push_back({px, py});
      consumed[px] = consumed[py] = 1;
      used[l] = 1;
    }
    std::vector<int> outs;
    std::vector<NodeRef> next;
    for (std::size_t i = 0; i < uni.size(); ++i)
      if (!consumed[i]) {
        outs.push_back(int(i));
        next.push_back(uni[i]);
      }
    cur = glue(cur, tangles_[t], gl, outs, beta_);
    labels = std::move(next);
  }
  if (labels.size() != outputs.size())
    throw Error(ErrorKind::InterfaceMismatch, "network outputs do not match free nodes");
  std::vector<int> perm;
  for (NodeRef o : outputs) {
    int found = -1;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (same(labels[i], o)) found = int(i);
    if (found < 0) throw Error(ErrorKind::InterfaceMismatch, "requested output is not free");
    perm.push_back(found);
  }
  return permute_nodes(cur, perm);
}

namespace {

Pairing make_pairing(int n, std::initializer_list<std::pair<int, int>> arcs) {
  Pairing p(n, -1);
  for (auto [x, y] : arcs) {
    p[x] = std::int8_t(y);
    p[y] = std::int8_t(x);
  }
  return p;
}

}  // namespace

const std::vector<Pairing>& face_tiles() {
  static const std::vector<Pairing> tiles = {
      make_pairing(4, {}),
      make_pairing(4, {{L, T}}),
      make_pairing(4, {{B, R}}),
      make_pairing(4, {{L, B}}),
      make_pairing(4, {{T, R}}),
      make_pairing(4, {{L, R}}),
      make_pairing(4, {{B, T}}),
      make_pairing(4, {{L, T}, {B, R}}),
      make_pairing(4, {{L, B}, {T, R}}),
  };
  return tiles;
}

DiskTangle face_tangle(cplx u, real lambda) {
  FaceWeights w = face_weights(u, lambda);
  DiskTangle t(4);
  for (int i = 0; i < 9; ++i) t.add(face_tiles()[i], w[i]);
  return t;
}

DiskTangle identity_face() {
  DiskTangle t(4);
  for (int i : {0, 1, 2, 7}) t.add(face_tiles()[i], 1);
  return t;
}

DiskTangle braid_tangle(int sign, real lambda) {
  const cplx ph = std::polar(real(1), 2 * lambda * real(sign));
  DiskTangle t(4);
  t.add(face_tiles()[0], 1);
  t.add(face_tiles()[5], 1);
  t.add(face_tiles()[6], 1);
  t.add(face_tiles()[7], -ph);
  t.add(face_tiles()[8], -real(1) / ph);
  return t;
}

DiskTangle dashed_strand() {
  DiskTangle t(2);
  t.add(make_pairing(2, {}), 1);
  t.add(make_pairing(2, {{0, 1}}), 1);
  return t;
}

DiskTangle dotted_triangle(real lambda) {
  DiskTangle t(3);
  t.add(make_pairing(3, {}), 2 * std::cos(lambda));
  t.add(make_pairing(3, {{0, 1}}), 1);
  t.add(make_pairing(3, {{0, 2}}), 1);
  t.add(make_pairing(3, {{1, 2}}), 1);
  return t;
}

DiskTangle dashed_triangle() {
  DiskTangle t(3);
  t.add(make_pairing(3, {}), 1);
  t.add(make_pairing(3, {{0, 1}}), 1);
  return t;
}

DiskTangle kappa_triangle(int m, PrefactorFamily fam, real lambda) {
  const PrefactorKind k = fam == PrefactorFamily::Primary ? PrefactorKind::Kappa : PrefactorKind::KappaBar;
  DiskTangle t(3);
  t.add(make_pairing(3, {{0, 1}}), prefactor(k, 1, m, lambda));
  t.add(make_pairing(3, {{0, 2}}), prefactor(k, 2, m, lambda));
  t.add(make_pairing(3, {{1, 2}}), prefactor(k, 3, m, lambda));
  t.add(make_pairing(3, {}), prefactor(k, 4, m, lambda));
  return t;
}

DiskTangle epsilon_triangle(int m, PrefactorFamily fam, real lambda) {
  const PrefactorKind k =
      fam == PrefactorFamily::Primary ? PrefactorKind::Epsilon : PrefactorKind::EpsilonBar;
  DiskTangle t(3);
  t.add(make_pairing(3, {{0, 1}}), prefactor(k, 1, m, lambda));
  t.add(make_pairing(3, {}), prefactor(k, 2, m, lambda));
  return t;
}

namespace {

DiskTangle single_vacancy() {
  DiskTangle t(1);
  t.add(Pairing{-1}, 1);
  return t;
}

DiskTangle solid_arc() {
  DiskTangle t(2);
  t.add(make_pairing(2, {{0, 1}}), 1);
  return t;
}

// Labelled triangle (kappa or wavy) glued under a dotted triangle on L and R;
// result nodes: [dotted free node, labelled T].
DiskTangle triangle_cap(const DiskTangle& labelled, real lambda) {
  Network net(loop_fugacity(lambda));
  int k = net.add(labelled);
  int d = net.add(dotted_triangle(lambda));
  net.connect({k, 0}, {d, 0});
  net.connect({k, 1}, {d, 1});
  return net.contract({{d, 2}, {k, 2}});
}

// Four-triangle configuration: top labelled triangle t1, dotted t2 on its left,
// kappa(m) t3 below t2, dotted t4 on the right. Nodes: [bottom, top, UL, LL].
DiskTangle triangle_diamond(const DiskTangle& t1, int m, PrefactorFamily fam, real lambda) {
  Network net(loop_fugacity(lambda));
  int a = net.add(t1);
  int b = net.add(dotted_triangle(lambda));
  int c = net.add(kappa_triangle(m, fam, lambda));
  int d = net.add(dotted_triangle(lambda));
  net.connect({a, 0}, {b, 0});
  net.connect({b, 1}, {c, 2});
  net.connect({c, 1}, {d, 0});
  net.connect({d, 1}, {a, 1});
  return net.contract({{d, 2}, {a, 2}, {b, 2}, {c, 0}});
}

cplx rho8(cplx u, real lambda) { return face_weights(u, lambda)[7]; }

IdentityCheck check_initial(const IdentityParams& p) {
  return {face_tangle(0, p.lambda), identity_face()};
}

IdentityCheck check_crossing(const IdentityParams& p) {
  return {face_tangle(p.u, p.lambda), rotate(face_tangle(real(3) * p.lambda - p.u, p.lambda), 1)};
}

IdentityCheck check_inversion(const IdentityParams& p) {
  Network net(loop_fugacity(p.lambda));
  int d1 = net.add(face_tangle(p.u, p.lambda));
  int d2 = net.add(face_tangle(-p.u, p.lambda));
  net.connect({d1, T}, {d2, L});
  net.connect({d1, R}, {d2, B});
  DiskTangle lhs = net.contract({{d1, B}, {d2, R}, {d2, T}, {d1, L}});
  DiskTangle rhs = disjoint_union(dashed_strand(), dashed_strand()) *
                   (rho8(p.u, p.lambda) * rho8(-p.u, p.lambda));
  return {lhs, rhs};
}

IdentityCheck check_ybe(const IdentityParams& p) {
  const cplx beta = loop_fugacity(p.lambda);
  Network l(beta);
  int lf = l.add(face_tangle(p.u, p.lambda));
  int uf = l.add(face_tangle(p.v, p.lambda));
  int dm = l.add(face_tangle(p.u - p.v, p.lambda));
  l.connect({lf, T}, {uf, B});
  l.connect({dm, R}, {lf, L});
  l.connect({dm, T}, {uf, L});
  DiskTangle lhs = l.contract({{lf, B}, {lf, R}, {uf, R}, {uf, T}, {dm, L}, {dm, B}});
  Network r(beta);
  lf = r.add(face_tangle(p.v, p.lambda));
  uf = r.add(face_tangle(p.u, p.lambda));
  dm = r.add(face_tangle(p.u - p.v, p.lambda));
  r.connect({lf, T}, {uf, B});
  r.connect({lf, R}, {dm, B});
  r.connect({uf, R}, {dm, L});
  DiskTangle rhs = r.contract({{lf, B}, {dm, R}, {dm, T}, {uf, T}, {uf, L}, {lf, L}});
  return {lhs, rhs};
}

IdentityCheck check_factor_3lambda(const IdentityParams& p) {
  Network net(loop_fugacity(p.lambda));
  int a = net.add(dashed_triangle());  // nodes L, B, diagonal
  int b = net.add(dashed_triangle());  // nodes T, R, diagonal
  net.connect({a, 2}, {b, 2});
  DiskTangle rhs = net.contract({{a, 1}, {b, 1}, {b, 0}, {a, 0}});
  return {face_tangle(real(3) * p.lambda, p.lambda), rhs};
}

IdentityCheck check_factor_2lambda(const IdentityParams& p) {
  Network net(loop_fugacity(p.lambda));
  int a = net.add(dotted_triangle(p.lambda));  // nodes B, L, diagonal
  int b = net.add(dotted_triangle(p.lambda));  // nodes R, T, diagonal
  net.connect({a, 2}, {b, 2});
  const cplx c = std::sin(p.lambda) / std::sin(3 * p.lambda);
  DiskTangle rhs = net.contract({{a, 0}, {b, 0}, {b, 1}, {a, 1}}) * c;
  return {face_tangle(real(2) * p.lambda, p.lambda), rhs};
}

IdentityCheck check_push_triangle(const IdentityParams& p) {
  const cplx beta = loop_fugacity(p.lambda);
  Network l(beta);
  int lf = l.add(face_tangle(p.u, p.lambda));
  int uf = l.add(face_tangle(p.u + real(2) * p.lambda, p.lambda));
  int tr = l.add(dotted_triangle(p.lambda));
  l.connect({lf, T}, {uf, B});
  l.connect({lf, R}, {tr, 1});
  l.connect({uf, R}, {tr, 2});
  DiskTangle lhs = l.contract({{lf, B}, {tr, 0}, {uf, T}, {uf, L}, {lf, L}});
  Network r(beta);
  int f = r.add(face_tangle(p.u + p.lambda, p.lambda));
  int t2 = r.add(dotted_triangle(p.lambda));
  r.connect({f, L}, {t2, 2});
  const cplx c = s_k(p.u, 2, p.lambda) * s_k(-p.u, 3, p.lambda);
  DiskTangle rhs = r.contract({{f, B}, {f, R}, {f, T}, {t2, 0}, {t2, 1}}) * c;
  return {lhs, rhs};
}

IdentityCheck check_push_arc(const IdentityParams& p) {
  Network l(loop_fugacity(p.lambda));
  int lf = l.add(face_tangle(p.u, p.lambda));
  int uf = l.add(face_tangle(p.u + real(3) * p.lambda, p.lambda));
  l.connect({lf, T}, {uf, B});
  l.connect({lf, R}, {uf, R});
  DiskTangle lhs = l.contract({{lf, B}, {uf, T}, {uf, L}, {lf, L}});
  const real lam = p.lambda;
  const cplx c = s_k(p.u, 2, lam) * s_k(-p.u, 2, lam) * s_k(p.u, 3, lam) * s_k(-p.u, 3, lam);
  return {lhs, disjoint_union(dashed_strand(), dashed_strand()) * c};
}

IdentityCheck check_braid_push_arc(const IdentityParams& p) {
  Network l(loop_fugacity(p.lambda));
  int x1 = l.add(braid_tangle(p.sign, p.lambda));
  int x2 = l.add(braid_tangle(p.sign, p.lambda));
  int cap = l.add(solid_arc());
  l.connect({x1, R}, {x2, L});
  l.connect({x1, T}, {cap, 0});
  l.connect({x2, T}, {cap, 1});
  DiskTangle lhs = l.contract({{x1, B}, {x2, B}, {x2, R}, {x1, L}});
  DiskTangle rhs = permute_nodes(disjoint_union(solid_arc(), dashed_strand()), {0, 1, 3, 2});
  return {lhs, rhs};
}

IdentityCheck check_braid_push_vacancy(const IdentityParams& p) {
  Network l(loop_fugacity(p.lambda));
  int x = l.add(braid_tangle(p.sign, p.lambda));
  int v = l.add(single_vacancy());
  l.connect({x, T}, {v, 0});
  DiskTangle lhs = l.contract({{x, B}, {x, R}, {x, L}});
  DiskTangle rhs = disjoint_union(single_vacancy(), dashed_strand());
  return {lhs, rhs};
}

IdentityCheck check_triangle_dotted_cap(const IdentityParams& p) {
  return {triangle_cap(kappa_triangle(1, p.family, p.lambda), p.lambda), dashed_strand()};
}

// Two-node tangle c_arc (joined) + c_empty (both vacant).
DiskTangle two_node(cplx c_arc, cplx c_empty) {
  DiskTangle t(2);
  t.add(make_pairing(2, {{0, 1}}), c_arc);
  t.add(make_pairing(2, {}), c_empty);
  return t;
}

IdentityCheck check_triangle_exchange(const IdentityParams& p) {
  const real lam = p.lambda;
  DiskTangle lhs = triangle_diamond(kappa_triangle(p.m + 1, p.family, lam), p.m, p.family, lam);
  // nodes [bottom, top, UL, LL]
  DiskTangle dd = disjoint_union(dashed_strand(), dashed_strand());
  DiskTangle bow = disjoint_union(triangle_cap(kappa_triangle(p.m + 1, p.family, lam), lam),
                                  dashed_strand());
  const PrefactorKind ek =
      p.family == PrefactorFamily::Primary ? PrefactorKind::Epsilon : PrefactorKind::EpsilonBar;
  DiskTangle eps = two_node(prefactor(ek, 1, p.m, lam), prefactor(ek, 2, p.m, lam));
  // eps on (LL, bottom), dashed on (UL, top): built as [LL, bottom, UL, top] then reordered.
  DiskTangle third = permute_nodes(disjoint_union(eps, dashed_strand()), {1, 3, 2, 0});
  return {lhs, dd * cplx(-1) + bow + third};
}

IdentityCheck check_triangle_wavy_cap(const IdentityParams& p) {
  Network net(loop_fugacity(p.lambda));
  int e = net.add(epsilon_triangle(1, p.family, p.lambda));
  net.connect({e, 0}, {e, 1});
  return {net.contract({{e, 2}}), single_vacancy()};
}

IdentityCheck check_triangle_wavy_exchange(const IdentityParams& p) {
  const real lam = p.lambda;
  DiskTangle lhs = triangle_diamond(epsilon_triangle(p.m + 1, p.family, lam), p.m, p.family, lam);
  const PrefactorKind ek =
      p.family == PrefactorFamily::Primary ? PrefactorKind::Epsilon : PrefactorKind::EpsilonBar;
  const cplx closed = prefactor(ek, 1, p.m + 1, lam) * loop_fugacity(lam) + prefactor(ek, 2, p.m + 1, lam);
  // vertical strand from bottom to top; UL and LL vacant.
  DiskTangle vv = disjoint_union(single_vacancy(), single_vacancy());
  DiskTangle rhs = disjoint_union(dashed_strand(), vv) * (closed - real(1));
  return {lhs, rhs};
}

struct Entry {
  const char* id;
  const char* description;
  IdentityCheck (*build)(const IdentityParams&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"initial", "face operator at u=0 equals the identity tangle", check_initial},
      {"crossing", "face(u) equals face(3 lambda - u) rotated a quarter turn", check_crossing},
      {"inversion", "face(u) glued to face(-u) equals rho8(u) rho8(-u) times two dilute arcs",
       check_inversion},
      {"ybe", "Yang-Baxter equation with spectral parameters u, v, u-v", check_ybe},
      {"factor_3lambda", "face(3 lambda) factorises into two dashed triangles", check_factor_3lambda},
      {"factor_2lambda", "face(2 lambda) = sin(lambda)/sin(3 lambda) times two dotted triangles",
       check_factor_2lambda},
      {"push_triangle", "dotted triangle pushed through faces at u and u+2 lambda",
       check_push_triangle},
      {"push_arc", "dilute arc pushed through faces at u and u+3 lambda", check_push_arc},
      {"braid_push_arc", "solid arc pushed through two braid faces", check_braid_push_arc},
      {"braid_push_vacancy", "vacancy pushed through a braid face", check_braid_push_vacancy},
      {"triangle_dotted_cap", "kappa(1) triangle capped by a dotted triangle is a dilute strand",
       check_triangle_dotted_cap},
      {"triangle_exchange", "kappa(m+1), kappa(m) and two dotted triangles exchange relation",
       check_triangle_exchange},
      {"triangle_wavy_cap", "wavy triangle at m=1 closed by a dilute arc equals one",
       check_triangle_wavy_cap},
      {"triangle_wavy_exchange", "wavy(m+1), kappa(m) and two dotted triangles exchange relation",
       check_triangle_wavy_exchange},
  };
  return r;
}

const Entry& lookup(const std::string& id) {
  for (const auto& e : registry())
    if (id == e.id) return e;
  throw Error(ErrorKind::UnknownIdentity, id);
}

}  // namespace

const std::vector<std::string>& local_identity_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

std::string local_identity_description(const std::string& id) { return lookup(id).description; }

IdentityCheck build_local_identity(const std::string& id, const IdentityParams& p) {
  require_nonsingular(p.lambda);
  return lookup(id).build(p);
}

real verify_local_identity(const std::string& id, const IdentityParams& p) {
  IdentityCheck c = build_local_identity(id, p);
  return tangle_residual(c.lhs, c.rhs);
}

}  // namespace dilute
