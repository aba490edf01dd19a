#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dilute/scalars.hpp"

namespace dilute {

enum class Role : std::uint8_t { Vacant = 0, Defect = 1, Paired = 2 };

// A dilute link state on the cylinder boundary. partner[i] is -1 (vacant),
// -2 (defect) or the index of the other end of its arc. back[i] is set on both
// ends of an arc that runs behind the cylinder (across the seam between N and 1).
struct LinkState {
  std::vector<int> partner;
  std::vector<std::uint8_t> back;

  int size() const { return int(partner.size()); }
  Role role(int i) const;
  std::vector<Role> roles() const;
  int defects() const;
  std::string dump() const;
  static LinkState parse(const std::string& s);

  bool operator==(const LinkState& o) const {
    return partner == o.partner && back == o.back;
  }
  bool operator<(const LinkState& o) const;
};

bool is_valid_link_state(const LinkState& s);

// Clears seam flags on vacancies/defects and makes arc flags symmetric.
LinkState canonical(const LinkState& s);

long long trinomial(int N, int k);

struct ModuleBasis {
  int N = 0;
  int d = 0;
  std::vector<LinkState> states;
  std::map<LinkState, int> index;

  int size() const { return int(states.size()); }
  int find(const LinkState& s) const;
};

ModuleBasis enumerate_link_states(int N, int d);

// One open strand end during contraction. For kind Paired, off is the copy
// offset of the partner as seen from this end; for Inf (a defect reaching
// infinity) off is the offset of this end as seen from infinity.
struct End {
  enum Kind : std::int8_t { Vac = 0, Paired = 1, Inf = 2, Dead = 3 };
  std::int8_t kind = Vac;
  std::int16_t partner = -1;
  std::int32_t off = 0;
};

// Strand bookkeeping under joins of boundary ends.
struct StrandSet {
  std::vector<End> ends;
  int n_beta = 0;   // contractible loops
  int n_alpha = 0;  // loops winding the cylinder
  bool zero = false;

  // Joins end x to end y through an edge whose copy offset from x to y is e.
  void join(int x, int y, int e);
  // Keeps ends in the listed order, remapping partners; every surviving
  // partner must be in the list.
  void compact(const std::vector<int>& keep);
};

// Reads N ends starting at `first` as a link state. n_omega receives the
// winding count (per defect, leftward travel counts +1). Returns nullopt if the
// result has an arc that is not a valid cylinder representative.
std::optional<LinkState> extract_state(const StrandSet& s, int first, int N, int& n_omega);

// Seeds N ends starting at `first` from a link state (defects point to infinity
// with offset 0).
void seed_state(StrandSet& s, int first, const LinkState& w);

// Row connectivity: nodes 0..N-1 on top, N..2N-1 on the bottom, each vacant
// (-1) or paired with an offset (copy displacement from the node to its partner).
struct RowDiagram {
  int N = 0;
  std::vector<int> partner;
  std::vector<int> offset;
  int n_beta = 0;
  int n_alpha = 0;

  static RowDiagram identity(int N);
  void connect(int x, int y, int off_xy);
  void validate() const;
};

struct ActionScalar {
  int n_alpha = 0;
  int n_beta = 0;
  int n_omega = 0;
};

struct ActionResult {
  cplx coefficient;
  LinkState state;
  ActionScalar scalars;
};

cplx action_coefficient(const ActionScalar& s, const SpectralContext& ctx);

// w sits on top of the diagram; the result is read at the bottom.
std::optional<ActionResult> standard_action(const RowDiagram& diagram, const LinkState& w,
                                            const SpectralContext& ctx);

// First a, then b (a above b). nullopt when a vacancy meets an occupied node.
std::optional<RowDiagram> compose(const RowDiagram& a, const RowDiagram& b);

}  // namespace dilute
