#ifndef DVF_FIELD_HPP
#define DVF_FIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mesh.hpp"

namespace dvf {

struct FieldMismatch : Error { using Error::Error; };

/// Per-vertex 2D vectors, aligned with the mesh vertex ids.
struct VectorField {
  std::vector<Vec2> vectors;

  friend bool operator==(const VectorField&, const VectorField&) = default;
};

inline void validate_field(const TriMesh2& m, const VectorField& f) {
  if (static_cast<int32_t>(f.vectors.size()) != m.num_vertices())
    throw FieldMismatch("field has " + std::to_string(f.vectors.size()) + " vectors for " +
                        std::to_string(m.num_vertices()) + " vertices");
  for (const Vec2& v : f.vectors)
    if (!is_finite(v)) throw FieldMismatch("field contains a non-finite vector");
}

/// Average of the vertex coordinates of s.
inline Vec2 barycenter(const TriMesh2& m, SimplexRef s) {
  switch (s.dim) {
    case 0: return m.position(s.id);
    case 1: {
      const auto& ev = m.edge_vertices(s.id);
      return 0.5 * (m.position(ev[0]) + m.position(ev[1]));
    }
    case 2: {
      const auto& tv = m.triangle_vertices(s.id);
      return (1.0 / 3.0) * (m.position(tv[0]) + m.position(tv[1]) + m.position(tv[2]));
    }
    default: throw Error("barycenter: invalid simplex reference");
  }
}

/// Piecewise-linear field value at the barycenter of s, i.e. the mean of the
/// vertex vectors of s.
inline Vec2 field_at_barycenter(const TriMesh2& m, const VectorField& f, SimplexRef s) {
  switch (s.dim) {
    case 0: return f.vectors[s.id];
    case 1: {
      const auto& ev = m.edge_vertices(s.id);
      return 0.5 * (f.vectors[ev[0]] + f.vectors[ev[1]]);
    }
    case 2: {
      const auto& tv = m.triangle_vertices(s.id);
      return (1.0 / 3.0) * (f.vectors[tv[0]] + f.vectors[tv[1]] + f.vectors[tv[2]]);
    }
    default: throw Error("field_at_barycenter: invalid simplex reference");
  }
}

}  // namespace dvf

#endif
