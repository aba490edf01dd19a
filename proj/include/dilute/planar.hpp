#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dilute/scalars.hpp"

namespace dilute {

// Boundary node i is vacant (-1) or paired with node p[i].
using Pairing = std::vector<std::int8_t>;

class DiskTangle {
 public:
  DiskTangle() = default;
  explicit DiskTangle(int n) : n_(n) {}

  int size() const { return n_; }
  const std::map<Pairing, cplx>& terms() const { return terms_; }

  void add(const Pairing& p, cplx c);
  void prune(real eps = 1e-14);
  cplx coefficient(const Pairing& p) const;
  real max_abs() const;

  DiskTangle operator+(const DiskTangle& o) const;
  DiskTangle operator-(const DiskTangle& o) const;
  DiskTangle operator*(cplx c) const;

 private:
  int n_ = 0;
  std::map<Pairing, cplx> terms_;
};

// Balanced bracket string over {V,(,)}; valid only for planar pairings.
std::string pairing_key(const Pairing& p);
Pairing pairing_from_key(const std::string& key);
bool is_planar(const Pairing& p);

// Max over pairing classes of |a - b|, divided by the largest |coefficient| of a.
real tangle_residual(const DiskTangle& lhs, const DiskTangle& rhs);

// Node i of the result is node perm[i] of t.
DiskTangle permute_nodes(const DiskTangle& t, const std::vector<int>& perm);
// Node i moves to position i+k (mod n).
DiskTangle rotate(const DiskTangle& t, int k);
// Tensor product: nodes of a first, then nodes of b.
DiskTangle disjoint_union(const DiskTangle& a, const DiskTangle& b);

struct NodeRef {
  int tangle;
  int node;
};

// A planar network of tangles whose shared nodes are identified pairwise.
class Network {
 public:
  explicit Network(cplx beta) : beta_(beta) {}
  int add(const DiskTangle& t);
  void connect(NodeRef a, NodeRef b);
  // Every node not listed in outputs must be connected exactly once.
  DiskTangle contract(const std::vector<NodeRef>& outputs) const;

 private:
  cplx beta_;
  std::vector<DiskTangle> tangles_;
  std::vector<std::pair<NodeRef, NodeRef>> links_;
};

// Glue two tangles: `links` identifies node pairs of the disjoint union
// (indices < a.size() belong to a, the rest to b); outputs list the surviving
// nodes of the union in the order of the result.
DiskTangle glue(const DiskTangle& a, const DiskTangle& b,
                const std::vector<std::pair<int, int>>& links, const std::vector<int>& outputs,
                cplx beta);

// Face node order: B, R, T, L (counterclockwise from the bottom edge).
enum FaceNode { B = 0, R = 1, T = 2, L = 3 };

// Tile connections for weights rho_1..rho_9 (index 0..8).
const std::vector<Pairing>& face_tiles();

DiskTangle face_tangle(cplx u, real lambda);
// Identity tangle: the face at u = 0.
DiskTangle identity_face();
// sign = +1 for the u -> +i infinity braid, -1 for -i infinity.
DiskTangle braid_tangle(int sign, real lambda);

// Two-node dilute strand: both vacant, or joined.
DiskTangle dashed_strand();
// Dotted triangle: 2cos(lambda) times empty plus each single arc.
DiskTangle dotted_triangle(real lambda);
// Triangle whose third node is always vacant and whose first two are joined by a dilute strand.
DiskTangle dashed_triangle();

enum class PrefactorFamily { Primary, Alternate };

// Labelled triangle with nodes L, R, T: k1 LR + k2 LT + k3 RT + k4 empty.
DiskTangle kappa_triangle(int m, PrefactorFamily fam, real lambda);
// Wavy triangle with nodes L, R, T (T always vacant): e1 LR + e2 empty.
DiskTangle epsilon_triangle(int m, PrefactorFamily fam, real lambda);

struct IdentityParams {
  cplx u = 0.3;
  cplx v = 0.7;
  real lambda = 0.55;
  int m = 1;
  int sign = 1;
  PrefactorFamily family = PrefactorFamily::Primary;
};

struct IdentityCheck {
  DiskTangle lhs;
  DiskTangle rhs;
};

const std::vector<std::string>& local_identity_ids();
std::string local_identity_description(const std::string& id);
IdentityCheck build_local_identity(const std::string& id, const IdentityParams& p);
real verify_local_identity(const std::string& id, const IdentityParams& p);

}  // namespace dilute
