#pragma once

#include <string>
#include <vector>

#include "dilute/linkstates.hpp"
#include "dilute/planar.hpp"

namespace dilute {

// One slice of a transfer row. Node order of the tangle:
// [B] R_1..R_h [T] L_h..L_1, with B and T present only when vertical is set.
struct RowPiece {
  DiskTangle tangle;
  int lines = 1;
  bool vertical = true;
};

// Periodic row of pieces acting on the standard module: w on top, result at
// the bottom; entry (result, w). The last piece's R edges are joined to the
// first piece's L edges across the seam.
Matrix row_transfer(const std::vector<RowPiece>& pieces, const ModuleBasis& basis,
                    const SpectralContext& ctx);

// Faces at the given arguments stacked bottom to top, in piece node order.
DiskTangle face_column(const std::vector<cplx>& args, real lambda);

Matrix build_fundamental(cplx u, const ModuleBasis& basis, const SpectralContext& ctx);
Matrix build_conjugate(cplx u, const ModuleBasis& basis, const SpectralContext& ctx);
Matrix build_braid(int sign, const ModuleBasis& basis, const SpectralContext& ctx);

// Normalized large-|Im u| value of the fundamental matrix.
Matrix braid_limit_estimate(int sign, real R, const ModuleBasis& basis, const SpectralContext& ctx);

// Header line plus column-major (re, im) pairs, one per line.
std::string dump_matrix(const Matrix& m, int N, int d, cplx u, const SpectralContext& ctx);

}  // namespace dilute
