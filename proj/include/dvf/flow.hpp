#ifndef DVF_FLOW_HPP
#define DVF_FLOW_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "field.hpp"
#include "mesh.hpp"
#include "vpath.hpp"

namespace dvf {

struct NotAFacePair : Error { using Error::Error; };
struct NoSuchEdge : Error { using Error::Error; };
struct MalformedPath : Error { using Error::Error; };

namespace detail {

/// Signed flow strength along a segment: mean of the endpoint vectors dotted
/// with the coordinate offset.
inline double flow_value(Vec2 p0, Vec2 p1, Vec2 f0, Vec2 f1) {
  return dot(0.5 * (f0 + f1), p1 - p0);
}

inline bool is_face_of(const TriMesh2& m, SimplexRef a, SimplexRef b) {
  if (a.dim + 1 != b.dim) return false;
  if (b.dim == 1) {
    const auto& ev = m.edge_vertices(b.id);
    return ev[0] == a.id || ev[1] == a.id;
  }
  if (b.dim == 2) {
    const auto& te = m.triangle_edges(b.id);
    return te[0] == a.id || te[1] == a.id || te[2] == a.id;
  }
  return false;
}

inline double pair_weight_unchecked(const TriMesh2& m, const VectorField& f, SimplexRef a,
                                    SimplexRef b) {
  const Vec2 fa = field_at_barycenter(m, f, a);
  const Vec2 fb = field_at_barycenter(m, f, b);
  return dot(0.5 * (fa + fb), barycenter(m, b) - barycenter(m, a));
}

}  // namespace detail

/// Alignment of the discrete vector (alpha, beta) with the field: the mean
/// of the field at the two barycenters dotted with the barycenter offset.
inline double pair_weight(const TriMesh2& m, const VectorField& f, SimplexRef alpha,
                          SimplexRef beta) {
  if (!detail::is_face_of(m, alpha, beta))
    throw NotAFacePair("pair_weight: alpha is not a codimension-1 face of beta");
  return detail::pair_weight_unchecked(m, f, alpha, beta);
}

/// Signed flow along the edge (v0, v1), positive when flowing v0 -> v1.
/// Antisymmetric: edge_flow(v1, v0) == -edge_flow(v0, v1).
inline double edge_flow(const TriMesh2& m, const VectorField& f, int32_t v0, int32_t v1) {
  if (m.edge_between(v0, v1) < 0)
    throw NoSuchEdge("edge_flow: no edge between " + std::to_string(v0) + " and " +
                     std::to_string(v1));
  return detail::flow_value(m.position(v0), m.position(v1), f.vectors[v0], f.vectors[v1]);
}

/// The vertex the edge flows away from. An exact zero flow is a tie and goes
/// to the endpoint of lower mesh id, so every edge has a winner.
inline int32_t edge_direction(const TriMesh2& m, const VectorField& f, int32_t edge) {
  const auto& ev = m.edge_vertices(edge);  // stored sorted, ev[0] < ev[1]
  const double fl =
      detail::flow_value(m.position(ev[0]), m.position(ev[1]), f.vectors[ev[0]], f.vectors[ev[1]]);
  if (fl > 0.0) return ev[0];
  if (fl < 0.0) return ev[1];
  return ev[0];
}

/// The subset of St(x) whose x-incident edges all flow away from x. Always
/// contains x itself; a triangle is a member iff both of its x-incident edges
/// are. Members are sorted by (dim, id).
struct OutwardStar {
  int32_t center = -1;
  std::vector<SimplexRef> members;
};

inline OutwardStar outward_star(const TriMesh2& m, const VectorField& f, int32_t x) {
  OutwardStar s;
  s.center = x;
  s.members.push_back(vertex_ref(x));
  for (int32_t e : m.vertex_edges(x))
    if (edge_direction(m, f, e) == x) s.members.push_back(edge_ref(e));
  for (int32_t t : m.vertex_triangles(x)) {
    bool all_out = true;
    for (int32_t te : m.triangle_edges(t)) {
      const auto& ev = m.edge_vertices(te);
      if (ev[0] != x && ev[1] != x) continue;  // the edge opposite x
      if (edge_direction(m, f, te) != x) {
        all_out = false;
        break;
      }
    }
    if (all_out) s.members.push_back(triangle_ref(t));
  }
  return s;
}

/// Alternating-sum weight of a V-path. Pairs contribute +w(alpha_i, beta_i),
/// anti-pairs -w(alpha_{i+1}, beta_i); the attachments to the source and
/// terminal critical simplices are included when those refs are set. An
/// orbit-terminated path accumulates through the final anti-pair preceding
/// the first repeated pair.
inline double vpath_weight(const TriMesh2& m, const VectorField& f, const VPath& p) {
  const int64_t n = p.pair_count();
  if (p.steps.size() % 2 != 0) throw MalformedPath("vpath_weight: odd step count");
  const int8_t lo = p.index, hi = static_cast<int8_t>(p.index + 1);
  for (int64_t i = 0; i < n; ++i) {
    const SimplexRef a = p.steps[2 * i], b = p.steps[2 * i + 1];
    if (a.dim != lo || b.dim != hi || !detail::is_face_of(m, a, b))
      throw MalformedPath("vpath_weight: steps do not alternate legal pairs");
    if (i + 1 < n) {
      // Index-0 paths run in the formal direction, index-1 paths in trace
      // order; the anti-pair between consecutive pairs points accordingly.
      const bool ok = p.index == 0 ? detail::is_face_of(m, p.steps[2 * i + 2], b)
                                   : detail::is_face_of(m, a, p.steps[2 * i + 3]);
      if (!ok) throw MalformedPath("vpath_weight: broken anti-pair adjacency");
    }
  }
  if (p.end == VPathEnd::orbit && (p.orbit_entry < 0 || p.orbit_entry >= n))
    throw MalformedPath("vpath_weight: orbit entry out of range");

  double w = 0.0;
  for (int64_t i = 0; i < n; ++i)
    w += detail::pair_weight_unchecked(m, f, p.steps[2 * i], p.steps[2 * i + 1]);
  for (int64_t i = 0; i + 1 < n; ++i) {
    if (p.index == 0)
      w -= detail::pair_weight_unchecked(m, f, p.steps[2 * i + 2], p.steps[2 * i + 1]);
    else
      w -= detail::pair_weight_unchecked(m, f, p.steps[2 * i], p.steps[2 * i + 3]);
  }

  if (p.source.valid()) {
    if (n > 0) {
      if (p.index == 0)
        w -= detail::pair_weight_unchecked(m, f, p.steps[0], p.source);
      else
        w -= detail::pair_weight_unchecked(m, f, p.source, p.steps[1]);
    } else if (p.terminal.valid()) {
      // Direct adjacency between the two critical simplices.
      if (p.index == 0)
        w -= detail::pair_weight_unchecked(m, f, p.terminal, p.source);
      else
        w -= detail::pair_weight_unchecked(m, f, p.source, p.terminal);
      return w;
    }
  }

  if (n == 0) return w;

  switch (p.end) {
    case VPathEnd::critical_simplex:
      if (p.terminal.valid()) {
        if (p.index == 0)
          w -= detail::pair_weight_unchecked(m, f, p.terminal, p.steps[2 * n - 1]);
        else
          w -= detail::pair_weight_unchecked(m, f, p.steps[2 * n - 2], p.terminal);
      }
      break;
    case VPathEnd::orbit:
      if (p.index == 0)
        w -= detail::pair_weight_unchecked(m, f, p.steps[2 * p.orbit_entry], p.steps[2 * n - 1]);
      else
        w -= detail::pair_weight_unchecked(m, f, p.steps[2 * n - 2], p.steps[2 * p.orbit_entry + 1]);
      break;
    case VPathEnd::boundary_exit: break;
  }
  return w;
}

}  // namespace dvf

#endif
