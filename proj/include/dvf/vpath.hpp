#ifndef DVF_VPATH_HPP
#define DVF_VPATH_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "mesh.hpp"

namespace dvf {

namespace detail {

/// Rotates a cycle of pairs so the minimal tail comes first. Cycles from
/// distinct orbits never share a pair, so this is a canonical form and the
/// leading tail a unique key.
inline void canonicalize_cycle(std::vector<std::array<SimplexRef, 2>>& cycle) {
  size_t best = 0;
  for (size_t i = 1; i < cycle.size(); ++i)
    if (cycle[i][0] < cycle[best][0]) best = i;
  std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
}

}  // namespace detail

enum class VPathEnd : uint8_t { critical_simplex, orbit, boundary_exit };

/// An alternating pair/anti-pair walk through the discrete field.
///
/// `steps` holds alpha_0, beta_0, alpha_1, beta_1, ... where each
/// (alpha_i, beta_i) is a pair; consecutive pairs are joined by anti-pairs.
/// For index-0 paths alpha is a vertex and beta an edge; for index-1 paths
/// alpha is an edge and beta a triangle, stored in trace order (away from
/// the source saddle).
///
/// `source` is the critical simplex the trace started from (invalid for raw
/// paths) and `terminal` the critical simplex reached, when any. An orbit
/// ending records in `orbit_entry` the pair position at which the walk first
/// entered the cycle, i.e. the position of the pair that repeated.
struct VPath {
  int8_t index = 0;
  SimplexRef source;
  std::vector<SimplexRef> steps;
  VPathEnd end = VPathEnd::critical_simplex;
  SimplexRef terminal;
  int32_t orbit_entry = -1;
  double weight = 0.0;
  int32_t orbit_id = -1;

  int64_t pair_count() const { return static_cast<int64_t>(steps.size()) / 2; }
};

}  // namespace dvf

#endif
