#include "dilute/linkstates.hpp"

#include <algorithm>
#include <functional>

namespace dilute {

Role LinkState::role(int i) const {
  if (partner[i] == -1) return Role::Vacant;
  if (partner[i] == -2) return Role::Defect;
  return Role::Paired;
}

std::vector<Role> LinkState::roles() const {
  std::vector<Role> r(partner.size());
  for (int i = 0; i < size(); ++i) r[i] = role(i);
  return r;
}

int LinkState::defects() const {
  return int(std::count(partner.begin(), partner.end(), -2));
}

bool LinkState::operator<(const LinkState& o) const {
  auto ra = roles(), rb = o.roles();
  if (ra != rb) return ra < rb;
  if (partner != o.partner) return partner < o.partner;
  return back < o.back;
}

std::string LinkState::dump() const {
  std::string s(partner.size(), 'V');
  for (int i = 0; i < size(); ++i) {
    int p = partner[i];
    if (p == -2) s[i] = 'D';
    else if (p >= 0) s[i] = back[i] ? (i < p ? '[' : ']') : (i < p ? '(' : ')');
  }
  return s;
}

LinkState LinkState::parse(const std::string& s) {
  LinkState w;
  const int n = int(s.size());
  w.partner.assign(n, -1);
  w.back.assign(n, 0);
  std::vector<int> round, square;
  for (int i = 0; i < n; ++i) {
    switch (s[i]) {
      case 'V': break;
      case 'D': w.partner[i] = -2; break;
      case '(': round.push_back(i); break;
      case '[': square.push_back(i); break;
      case ')':
      case ']': {
        auto& st = s[i] == ')' ? round : square;
        if (st.empty()) throw Error(ErrorKind::MalformedDiagram, "unbalanced link state " + s);
        int j = st.back();
        st.pop_back();
        w.partner[i] = j;
        w.partner[j] = i;
        w.back[i] = w.back[j] = s[i] == ']';
        break;
      }
      default: throw Error(ErrorKind::MalformedDiagram, "bad link state character in " + s);
    }
  }
  if (!round.empty() || !square.empty())
    throw Error(ErrorKind::MalformedDiagram, "unbalanced link state " + s);
  return w;
}

namespace {

struct Chord {
  int lo, hi;
};

bool chords_cross(const Chord& a, const Chord& b) {
  return (a.lo < b.lo && b.lo < a.hi && a.hi < b.hi) || (b.lo < a.lo && a.lo < b.hi && b.hi < a.hi);
}

}  // namespace

bool is_valid_link_state(const LinkState& s) {
  const int N = s.size();
  if (int(s.back.size()) != N) return false;
  std::vector<Chord> chords;
  std::vector<int> defects;
  for (int i = 0; i < N; ++i) {
    int p = s.partner[i];
    if (p == -2) {
      defects.push_back(i);
      if (s.back[i]) return false;
    } else if (p == -1) {
      if (s.back[i]) return false;
    } else {
      if (p < 0 || p >= N || p == i || s.partner[p] != i || s.back[p] != s.back[i]) return false;
      if (i < p) chords.push_back(s.back[i] ? Chord{p - N, i} : Chord{i, p});
    }
  }
  for (const Chord& c : chords) {
    for (int dpos : defects)
      for (int k = -2; k <= 2; ++k) {
        int x = dpos + k * N;
        if (c.lo < x && x < c.hi) return false;
      }
  }
  for (std::size_t a = 0; a < chords.size(); ++a)
    for (std::size_t b = 0; b < chords.size(); ++b)
      for (int k = -2; k <= 2; ++k) {
        if (a == b && k == 0) continue;
        Chord t{chords[b].lo + k * N, chords[b].hi + k * N};
        if (chords_cross(chords[a], t)) return false;
      }
  return true;
}

LinkState canonical(const LinkState& s) {
  LinkState c = s;
  for (int i = 0; i < c.size(); ++i) {
    int p = c.partner[i];
    if (p < 0) c.back[i] = 0;
    else c.back[i] = c.back[p] = (s.back[i] || s.back[p]) ? 1 : 0;
  }
  return c;
}

long long trinomial(int N, int k) {
  if (N < 0 || k < -N || k > N) return 0;
  std::vector<long long> c(2 * N + 1, 0), next;
  c[N] = 1;
  for (int step = 0; step < N; ++step) {
    next.assign(c.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i]) continue;
      if (i > 0) next[i - 1] += c[i];
      next[i] += c[i];
      if (i + 1 < c.size()) next[i + 1] += c[i];
    }
    c.swap(next);
  }
  return c[N + k];
}

int ModuleBasis::find(const LinkState& s) const {
  auto it = index.find(s);
  return it == index.end() ? -1 : it->second;
}

ModuleBasis enumerate_link_states(int N, int d) {
  ModuleBasis basis;
  basis.N = N;
  basis.d = d;
  if (d < 0 || d > N) return basis;
  LinkState w;
  w.partner.assign(N, -1);
  w.back.assign(N, 0);
  std::vector<char> used(N, 0);
  std::vector<LinkState> found;
  std::function<void(int, int)> rec = [&](int i, int defects) {
    while (i < N && used[i]) ++i;
    if (i == N) {
      if (defects == d && is_valid_link_state(w)) found.push_back(w);
      return;
    }
    used[i] = 1;
    w.partner[i] = -1;
    rec(i + 1, defects);
    if (defects < d) {
      w.partner[i] = -2;
      rec(i + 1, defects + 1);
    }
    for (int j = i + 1; j < N; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      w.partner[i] = j;
      w.partner[j] = i;
      for (int flag = 0; flag < 2; ++flag) {
        w.back[i] = w.back[j] = std::uint8_t(flag);
        rec(i + 1, defects);
      }
      w.back[i] = w.back[j] = 0;
      w.partner[j] = -1;
      used[j] = 0;
    }
    w.partner[i] = -1;
    used[i] = 0;
  };
  rec(0, 0);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  basis.states = std::move(found);
  for (int i = 0; i < basis.size(); ++i) basis.index[basis.states[i]] = i;
  return basis;
}

void StrandSet::join(int x, int y, int e) {
  if (zero) return;
  End X = ends[x], Y = ends[y];
  ends[x].kind = End::Dead;
  ends[y].kind = End::Dead;
  const bool vx = X.kind == End::Vac, vy = Y.kind == End::Vac;
  if (vx && vy) return;
  if (vx != vy || (X.kind == End::Inf && Y.kind == End::Inf)) {
    zero = true;
    return;
  }
  if (X.kind == End::Paired && X.partner == y) {
    if (e + Y.off == 0) ++n_beta;
    else ++n_alpha;
    return;
  }
  if (X.kind == End::Paired && Y.kind == End::Paired) {
    const int o = -X.off + e + Y.off;
    ends[X.partner] = End{End::Paired, Y.partner, std::int32_t(o)};
    ends[Y.partner] = End{End::Paired, X.partner, std::int32_t(-o)};
  } else if (X.kind == End::Inf) {
    ends[Y.partner] = End{End::Inf, -1, std::int32_t(X.off + e + Y.off)};
  } else {
    ends[X.partner] = End{End::Inf, -1, std::int32_t(Y.off - e + X.off)};
  }
}

void StrandSet::compact(const std::vector<int>& keep) {
  std::vector<int> remap(ends.size(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = int(i);
  std::vector<End> out(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    End e = ends[keep[i]];
    if (e.kind == End::Dead) throw Error(ErrorKind::MalformedDiagram, "kept a joined end");
    if (e.kind == End::Paired) {
      int p = remap[e.partner];
      if (p < 0) throw Error(ErrorKind::MalformedDiagram, "dropped the partner of a kept end");
      e.partner = std::int16_t(p);
    }
    out[i] = e;
  }
  ends.swap(out);
}

std::optional<LinkState> extract_state(const StrandSet& s, int first, int N, int& n_omega) {
  LinkState w;
  w.partner.assign(N, -1);
  w.back.assign(N, 0);
  n_omega = 0;
  for (int i = 0; i < N; ++i) {
    const End& e = s.ends[first + i];
    if (e.kind == End::Vac) continue;
    if (e.kind == End::Inf) {
      w.partner[i] = -2;
      n_omega -= e.off;
      continue;
    }
    if (e.kind != End::Paired) return std::nullopt;
    int p = e.partner - first;
    if (p < 0 || p >= N) return std::nullopt;
    w.partner[i] = p;
    if (i < p) {
      if (e.off == 0) w.back[i] = w.back[p] = 0;
      else if (e.off == -1) w.back[i] = w.back[p] = 1;
      else return std::nullopt;
    }
  }
  if (!is_valid_link_state(w)) return std::nullopt;
  return w;
}

void seed_state(StrandSet& s, int first, const LinkState& w) {
  const int N = w.size();
  for (int i = 0; i < N; ++i) {
    int p = w.partner[i];
    End& e = s.ends[first + i];
    if (p == -1) e = End{End::Vac, -1, 0};
    else if (p == -2) e = End{End::Inf, -1, 0};
    else {
      int o = w.back[i] ? (i < p ? -1 : 1) : 0;
      e = End{End::Paired, std::int16_t(first + p), std::int32_t(o)};
    }
  }
}

RowDiagram RowDiagram::identity(int N) {
  RowDiagram r;
  r.N = N;
  r.partner.assign(2 * N, -1);
  r.offset.assign(2 * N, 0);
  for (int i = 0; i < N; ++i) r.connect(i, N + i, 0);
  return r;
}

void RowDiagram::connect(int x, int y, int off_xy) {
  partner[x] = y;
  partner[y] = x;
  offset[x] = off_xy;
  offset[y] = -off_xy;
}

void RowDiagram::validate() const {
  if (int(partner.size()) != 2 * N || int(offset.size()) != 2 * N)
    throw Error(ErrorKind::MalformedDiagram, "row diagram must have N top and N bottom nodes");
  for (int i = 0; i < 2 * N; ++i) {
    int p = partner[i];
    if (p == -1) continue;
    if (p < 0 || p >= 2 * N || p == i || partner[p] != i || offset[p] != -offset[i])
      throw Error(ErrorKind::MalformedDiagram, "inconsistent row diagram pairing");
  }
}

cplx action_coefficient(const ActionScalar& s, const SpectralContext& ctx) {
  cplx c = std::pow(ctx.alpha, s.n_alpha) * std::pow(ctx.beta(), s.n_beta);
  if (s.n_omega) c *= std::pow(ctx.omega, ctx.winding_sign * s.n_omega);
  return c;
}

namespace {

void seed_diagram(StrandSet& s, int first, const RowDiagram& r) {
  for (int t = 0; t < 2 * r.N; ++t) {
    int p = r.partner[t];
    s.ends[first + t] = p < 0 ? End{End::Vac, -1, 0}
                              : End{End::Paired, std::int16_t(first + p), std::int32_t(r.offset[t])};
  }
}

}  // namespace

std::optional<ActionResult> standard_action(const RowDiagram& diagram, const LinkState& w,
                                            const SpectralContext& ctx) {
  diagram.validate();
  const int N = diagram.N;
  if (w.size() != N) throw Error(ErrorKind::MalformedDiagram, "link state size differs from diagram");
  StrandSet s;
  s.ends.resize(3 * N);
  seed_state(s, 0, w);
  seed_diagram(s, N, diagram);
  for (int i = 0; i < N; ++i) s.join(i, N + i, 0);
  if (s.zero) return std::nullopt;
  int n_omega = 0;
  auto out = extract_state(s, 2 * N, N, n_omega);
  if (!out) throw Error(ErrorKind::MalformedDiagram, "action produced a non-planar state");
  ActionResult r;
  r.scalars.n_alpha = s.n_alpha + diagram.n_alpha;
  r.scalars.n_beta = s.n_beta + diagram.n_beta;
  r.scalars.n_omega = n_omega;
  r.state = *out;
  r.coefficient = action_coefficient(r.scalars, ctx);
  return r;
}

std::optional<RowDiagram> compose(const RowDiagram& a, const RowDiagram& b) {
  a.validate();
  b.validate();
  if (a.N != b.N) throw Error(ErrorKind::MalformedDiagram, "composing diagrams of different width");
  const int N = a.N;
  StrandSet s;
  s.ends.resize(4 * N);
  seed_diagram(s, 0, a);
  seed_diagram(s, 2 * N, b);
  for (int i = 0; i < N; ++i) s.join(N + i, 2 * N + i, 0);
  if (s.zero) return std::nullopt;
  std::vector<int> keep;
  for (int i = 0; i < N; ++i) keep.push_back(i);
  for (int i = 0; i < N; ++i) keep.push_back(3 * N + i);
  s.compact(keep);
  RowDiagram r;
  r.N = N;
  r.partner.assign(2 * N, -1);
  r.offset.assign(2 * N, 0);
  for (int t = 0; t < 2 * N; ++t) {
    const End& e = s.ends[t];
    if (e.kind == End::Paired) {
      r.partner[t] = e.partner;
      r.offset[t] = e.off;
    }
  }
  r.n_alpha = a.n_alpha + b.n_alpha + s.n_alpha;
  r.n_beta = a.n_beta + b.n_beta + s.n_beta;
  return r;
}

}  // namespace dilute
