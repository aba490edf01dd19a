#include "dilute/transfer.hpp"

#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace dilute {

namespace {

std::string state_key(const StrandSet& s) {
  std::string k;
  k.reserve(s.ends.size() * 4);
  for (const End& e : s.ends) {
    k.push_back(char(e.kind));
    k.push_back(char(e.partner & 0xff));
    k.push_back(char((e.off >> 8) & 0xff));
    k.push_back(char(e.off & 0xff));
  }
  return k;
}

using Frontier = std::unordered_map<std::string, std::pair<StrandSet, cplx>>;

void accumulate(Frontier& f, StrandSet&& s, cplx c) {
  auto key = state_key(s);
  auto it = f.find(key);
  if (it == f.end()) f.emplace(std::move(key), std::make_pair(std::move(s), c));
  else it->second.second += c;
}

}  // namespace

Matrix row_transfer(const std::vector<RowPiece>& pieces, const ModuleBasis& basis,
                    const SpectralContext& ctx) {
  const int N = basis.N;
  if (pieces.empty()) throw Error(ErrorKind::MalformedDiagram, "empty row");
  const int h = pieces.front().lines;
  int verticals = 0;
  for (const auto& p : pieces) {
    if (p.lines != h) throw Error(ErrorKind::InterfaceMismatch, "pieces disagree on line count");
    if (p.tangle.size() != 2 * h + (p.vertical ? 2 : 0))
      throw Error(ErrorKind::InterfaceMismatch, "piece tangle has the wrong node count");
    if (p.vertical) ++verticals;
  }
  if (verticals != N) throw Error(ErrorKind::InterfaceMismatch, "row width differs from module size");

  const int D = basis.size();
  Matrix T = Matrix::Zero(D, D);
  const cplx beta = ctx.beta();

  for (int col = 0; col < D; ++col) {
    // Ends: Lopen[0..h), Rcur[h..2h), bottoms (done so far), tops still unread.
    Frontier cur;
    for (int mask = 0; mask < (1 << h); ++mask) {
      StrandSet s;
      s.ends.resize(2 * h + N);
      for (int i = 0; i < h; ++i)
        if (mask >> i & 1) {
          s.ends[i] = End{End::Paired, std::int16_t(h + i), 0};
          s.ends[h + i] = End{End::Paired, std::int16_t(i), 0};
        }
      seed_state(s, 2 * h, basis.states[col]);
      accumulate(cur, std::move(s), 1);
    }
    int done = 0;
    for (const auto& piece : pieces) {
      Frontier next;
      const int v = piece.vertical ? 1 : 0;
      const int pn = piece.tangle.size();
      for (auto& [key, sc] : cur) {
        const auto& [s0, c0] = sc;
        const int base = int(s0.ends.size());
        const int top_pos = 2 * h + done;  // first unread top end
        for (const auto& [pair, pc] : piece.tangle.terms()) {
          StrandSet s = s0;
          s.ends.resize(base + pn);
          for (int i = 0; i < pn; ++i)
            if (pair[i] >= 0) s.ends[base + i] = End{End::Paired, std::int16_t(base + pair[i]), 0};
          // piece node indices
          auto Rn = [&](int i) { return base + v + i; };
          auto Ln = [&](int i) { return base + pn - 1 - i; };
          for (int i = 0; i < h; ++i) s.join(Ln(i), h + i, 0);
          if (v) s.join(base + v + h, top_pos, 0);
          if (s.zero) continue;
          std::vector<int> keep;
          for (int i = 0; i < h; ++i) keep.push_back(i);
          for (int i = 0; i < h; ++i) keep.push_back(Rn(i));
          for (int j = 0; j < done; ++j) keep.push_back(2 * h + j);
          if (v) keep.push_back(base);
          for (int j = done + v; j < N; ++j) keep.push_back(2 * h + j);
          s.compact(keep);
          cplx c = c0 * pc;
          for (; s.n_beta > 0; --s.n_beta) c *= beta;
          accumulate(next, std::move(s), c);
        }
      }
      cur.swap(next);
      done += v;
    }
    for (auto& [key, sc] : cur) {
      auto& [s, c] = sc;
      for (int i = 0; i < h; ++i) s.join(h + i, i, 1);
      if (s.zero) continue;
      int n_omega = 0;
      auto out = extract_state(s, 2 * h, N, n_omega);
      if (!out) throw Error(ErrorKind::MalformedDiagram, "row produced a non-planar state");
      int row = basis.find(*out);
      if (row < 0) continue;
      ActionScalar a{s.n_alpha, s.n_beta, n_omega};
      T(row, col) += c * action_coefficient(a, ctx);
    }
  }
  return T;
}

DiskTangle face_column(const std::vector<cplx>& args, real lambda) {
  const int h = int(args.size());
  if (h == 1) return face_tangle(args[0], lambda);
  Network net(loop_fugacity(lambda));
  std::vector<int> ids;
  for (cplx a : args) ids.push_back(net.add(face_tangle(a, lambda)));
  for (int i = 0; i + 1 < h; ++i) net.connect({ids[i], T}, {ids[i + 1], B});
  std::vector<NodeRef> out;
  out.push_back({ids[0], B});
  for (int i = 0; i < h; ++i) out.push_back({ids[i], R});
  out.push_back({ids[h - 1], T});
  for (int i = h - 1; i >= 0; --i) out.push_back({ids[i], L});
  return net.contract(out);
}

Matrix build_fundamental(cplx u, const ModuleBasis& basis, const SpectralContext& ctx) {
  std::vector<RowPiece> row;
  for (int j = 0; j < basis.N; ++j) row.push_back({face_tangle(u - ctx.xi[j], ctx.lambda), 1, true});
  return row_transfer(row, basis, ctx);
}

Matrix build_conjugate(cplx u, const ModuleBasis& basis, const SpectralContext& ctx) {
  std::vector<RowPiece> row;
  for (int j = 0; j < basis.N; ++j)
    row.push_back(
        {rotate(face_tangle(real(2) * ctx.lambda - u + ctx.xi[j], ctx.lambda), 1), 1, true});
  return row_transfer(row, basis, ctx);
}

Matrix build_braid(int sign, const ModuleBasis& basis, const SpectralContext& ctx) {
  std::vector<RowPiece> row(basis.N, RowPiece{braid_tangle(sign, ctx.lambda), 1, true});
  return row_transfer(row, basis, ctx);
}

Matrix braid_limit_estimate(int sign, real R, const ModuleBasis& basis, const SpectralContext& ctx) {
  if (R > 30) throw Error(ErrorKind::ConfigError, "braid limit estimate requires |Im u| <= 30");
  const cplx u = cplx(0, real(sign) * R);
  const cplx phase = std::polar(real(1), -real(sign) * (pi - 2 * ctx.lambda) * real(ctx.N));
  return build_fundamental(u, basis, ctx) * (phase / (f_k(u, -2, ctx) * f_k(u, -3, ctx)));
}

std::string dump_matrix(const Matrix& m, int N, int d, cplx u, const SpectralContext& ctx) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# N=" << N << " d=" << d << " u=" << u.real() << "," << u.imag()
     << " lambda=" << ctx.lambda << " omega=" << ctx.omega.real() << "," << ctx.omega.imag()
     << " xi=";
  for (std::size_t j = 0; j < ctx.xi.size(); ++j)
    os << (j ? ";" : "") << ctx.xi[j].real() << "," << ctx.xi[j].imag();
  os << " rows=" << m.rows() << " cols=" << m.cols() << "\n";
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) os << m(r, c).real() << " " << m(r, c).imag() << "\n";
  return os.str();
}

}  // namespace dilute
