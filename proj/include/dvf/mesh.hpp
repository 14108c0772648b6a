#ifndef DVF_MESH_HPP
#define DVF_MESH_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace dvf {

struct DegenerateTriangle : Error { using Error::Error; };
struct DanglingVertexIndex : Error { using Error::Error; };
struct NonManifoldEdge : Error { using Error::Error; };
struct InvalidDimensions : Error { using Error::Error; };

/// Dimension-tagged simplex handle. The defaulted comparison orders refs
/// lexicographically by (dim, id); this is the deterministic tie-break order
/// used everywhere in the library.
struct SimplexRef {
  int8_t dim = -1;
  int32_t id = -1;

  constexpr bool valid() const { return dim >= 0 && id >= 0; }
  friend constexpr auto operator<=>(const SimplexRef&, const SimplexRef&) = default;
};

constexpr SimplexRef vertex_ref(int32_t id) { return SimplexRef{0, id}; }
constexpr SimplexRef edge_ref(int32_t id) { return SimplexRef{1, id}; }
constexpr SimplexRef triangle_ref(int32_t id) { return SimplexRef{2, id}; }

/// Immutable triangulated 2-manifold with boundary.
///
/// Vertices keep the caller's ordering (tie-breaks depend on stable ids),
/// edges are derived from the triangle list in first-appearance order with
/// endpoints stored sorted ascending, and all incidence maps are built once
/// at construction. Safe for shared concurrent reads afterwards.
class TriMesh2 {
 public:
  TriMesh2() = default;

  static TriMesh2 from_arrays(std::vector<Vec2> coords,
                              std::vector<std::array<int32_t, 3>> triangles) {
    TriMesh2 m;
    m.coords_ = std::move(coords);
    const auto nv = static_cast<int32_t>(m.coords_.size());

    m.tri_verts_.reserve(triangles.size());
    for (auto t : triangles) {
      for (int32_t v : t) {
        if (v < 0 || v >= nv)
          throw DanglingVertexIndex("triangle references vertex " + std::to_string(v) +
                                    " outside [0," + std::to_string(nv) + ")");
      }
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2])
        throw DegenerateTriangle("triangle with repeated vertex " + std::to_string(t[1]));
      m.tri_verts_.push_back(t);
    }
    {
      auto sorted = m.tri_verts_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DegenerateTriangle("duplicate triangle in input");
    }

    const auto nt = static_cast<int32_t>(m.tri_verts_.size());
    m.tri_edges_.resize(nt);
    m.edge_of_pair_.reserve(static_cast<size_t>(nt) * 2);

    auto intern_edge = [&m](int32_t a, int32_t b) {  // requires a < b
      const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
      auto [it, inserted] = m.edge_of_pair_.try_emplace(key, static_cast<int32_t>(m.edge_verts_.size()));
      if (inserted) {
        m.edge_verts_.push_back({a, b});
        m.edge_tris_.push_back({-1, -1});
      }
      return it->second;
    };

    for (int32_t t = 0; t < nt; ++t) {
      const auto& v = m.tri_verts_[t];
      const std::array<std::array<int32_t, 2>, 3> pairs{{{v[0], v[1]}, {v[0], v[2]}, {v[1], v[2]}}};
      for (int k = 0; k < 3; ++k) {
        const int32_t e = intern_edge(pairs[k][0], pairs[k][1]);
        m.tri_edges_[t][k] = e;
        auto& inc = m.edge_tris_[e];
        if (inc[0] < 0)
          inc[0] = t;
        else if (inc[1] < 0)
          inc[1] = t;
        else
          throw NonManifoldEdge("edge (" + std::to_string(pairs[k][0]) + "," +
                                std::to_string(pairs[k][1]) + ") has more than two triangles");
      }
    }

    const auto ne = static_cast<int32_t>(m.edge_verts_.size());

    m.v_edge_off_.assign(nv + 1, 0);
    for (const auto& ev : m.edge_verts_) {
      ++m.v_edge_off_[ev[0] + 1];
      ++m.v_edge_off_[ev[1] + 1];
    }
    for (int32_t v = 0; v < nv; ++v) m.v_edge_off_[v + 1] += m.v_edge_off_[v];
    m.v_edge_dat_.resize(m.v_edge_off_.back());
    {
      auto cur = m.v_edge_off_;
      for (int32_t e = 0; e < ne; ++e) {
        m.v_edge_dat_[cur[m.edge_verts_[e][0]]++] = e;
        m.v_edge_dat_[cur[m.edge_verts_[e][1]]++] = e;
      }
    }

    m.v_tri_off_.assign(nv + 1, 0);
    for (const auto& tv : m.tri_verts_)
      for (int32_t v : tv) ++m.v_tri_off_[v + 1];
    for (int32_t v = 0; v < nv; ++v) m.v_tri_off_[v + 1] += m.v_tri_off_[v];
    m.v_tri_dat_.resize(m.v_tri_off_.back());
    {
      auto cur = m.v_tri_off_;
      for (int32_t t = 0; t < nt; ++t)
        for (int32_t v : m.tri_verts_[t]) m.v_tri_dat_[cur[v]++] = t;
    }

    m.boundary_vertex_.assign(nv, 0);
    for (int32_t e = 0; e < ne; ++e) {
      if (m.edge_tris_[e][1] < 0) {
        m.boundary_vertex_[m.edge_verts_[e][0]] = 1;
        m.boundary_vertex_[m.edge_verts_[e][1]] = 1;
      }
    }
    return m;
  }

  int32_t num_vertices() const { return static_cast<int32_t>(coords_.size()); }
  int32_t num_edges() const { return static_cast<int32_t>(edge_verts_.size()); }
  int32_t num_triangles() const { return static_cast<int32_t>(tri_verts_.size()); }
  int64_t num_simplices() const {
    return static_cast<int64_t>(num_vertices()) + num_edges() + num_triangles();
  }
  int64_t euler_characteristic() const {
    return static_cast<int64_t>(num_vertices()) - num_edges() + num_triangles();
  }

  Vec2 position(int32_t v) const { return coords_[v]; }
  const std::vector<Vec2>& positions() const { return coords_; }

  const std::array<int32_t, 2>& edge_vertices(int32_t e) const { return edge_verts_[e]; }
  const std::array<int32_t, 3>& triangle_vertices(int32_t t) const { return tri_verts_[t]; }
  const std::array<int32_t, 3>& triangle_edges(int32_t t) const { return tri_edges_[t]; }

  /// Incident triangles of an edge; the second entry is -1 on the boundary.
  const std::array<int32_t, 2>& edge_triangles(int32_t e) const { return edge_tris_[e]; }

  /// Edge id joining two vertices, or -1 when absent.
  int32_t edge_between(int32_t v0, int32_t v1) const {
    if (v0 == v1) return -1;
    const auto [a, b] = std::minmax(v0, v1);
    const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
    auto it = edge_of_pair_.find(key);
    return it == edge_of_pair_.end() ? -1 : it->second;
  }

  std::span<const int32_t> vertex_edges(int32_t v) const {
    return {v_edge_dat_.data() + v_edge_off_[v],
            static_cast<size_t>(v_edge_off_[v + 1] - v_edge_off_[v])};
  }
  std::span<const int32_t> vertex_triangles(int32_t v) const {
    return {v_tri_dat_.data() + v_tri_off_[v],
            static_cast<size_t>(v_tri_off_[v + 1] - v_tri_off_[v])};
  }

  bool edge_on_boundary(int32_t e) const { return edge_tris_[e][1] < 0; }
  bool vertex_on_boundary(int32_t v) const { return boundary_vertex_[v] != 0; }

  int32_t other_edge_vertex(int32_t e, int32_t v) const {
    const auto& ev = edge_verts_[e];
    return ev[0] == v ? ev[1] : ev[0];
  }
  /// The triangle across edge e from t, or -1 on the boundary.
  int32_t other_edge_triangle(int32_t e, int32_t t) const {
    const auto& et = edge_tris_[e];
    return et[0] == t ? et[1] : et[0];
  }

  bool contains(SimplexRef s) const {
    switch (s.dim) {
      case 0: return s.id >= 0 && s.id < num_vertices();
      case 1: return s.id >= 0 && s.id < num_edges();
      case 2: return s.id >= 0 && s.id < num_triangles();
      default: return false;
    }
  }

 private:
  std::vector<Vec2> coords_;
  std::vector<std::array<int32_t, 2>> edge_verts_;
  std::vector<std::array<int32_t, 3>> tri_verts_;
  std::vector<std::array<int32_t, 3>> tri_edges_;
  std::vector<std::array<int32_t, 2>> edge_tris_;
  std::unordered_map<uint64_t, int32_t> edge_of_pair_;
  std::vector<int32_t> v_edge_off_, v_edge_dat_;
  std::vector<int32_t> v_tri_off_, v_tri_dat_;
  std::vector<uint8_t> boundary_vertex_;
};

inline TriMesh2 build_from_arrays(std::vector<Vec2> coords,
                                  std::vector<std::array<int32_t, 3>> triangles) {
  return TriMesh2::from_arrays(std::move(coords), std::move(triangles));
}

enum class Diagonal { slash, backslash };

/// Regular grid triangulation with row-major vertex ids; every cell is split
/// by the same diagonal (default "/": the diagonal joins the lower-right and
/// upper-left cell corners).
inline TriMesh2 grid_triangulation(int32_t nx, int32_t ny, Vec2 origin, double spacing,
                                   Diagonal rule = Diagonal::slash) {
  if (nx < 2 || ny < 2)
    throw InvalidDimensions("grid needs nx,ny >= 2, got " + std::to_string(nx) + "x" +
                            std::to_string(ny));
  if (!(spacing > 0.0)) throw InvalidDimensions("grid spacing must be positive");

  std::vector<Vec2> coords;
  coords.reserve(static_cast<size_t>(nx) * ny);
  for (int32_t j = 0; j < ny; ++j)
    for (int32_t i = 0; i < nx; ++i)
      coords.push_back({origin.x + spacing * i, origin.y + spacing * j});

  std::vector<std::array<int32_t, 3>> tris;
  tris.reserve(static_cast<size_t>(nx - 1) * (ny - 1) * 2);
  auto vid = [nx](int32_t i, int32_t j) { return j * nx + i; };
  for (int32_t j = 0; j + 1 < ny; ++j) {
    for (int32_t i = 0; i + 1 < nx; ++i) {
      const int32_t v00 = vid(i, j), v10 = vid(i + 1, j);
      const int32_t v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (rule == Diagonal::slash) {
        tris.push_back({v00, v10, v01});
        tris.push_back({v10, v11, v01});
      } else {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
      }
    }
  }
  return TriMesh2::from_arrays(std::move(coords), std::move(tris));
}

/// All cofaces of s including s itself, sorted by (dim, id).
inline std::vector<SimplexRef> star(const TriMesh2& m, SimplexRef s) {
  if (!m.contains(s)) throw Error("star: invalid simplex reference");
  std::vector<SimplexRef> out;
  switch (s.dim) {
    case 0: {
      out.push_back(s);
      for (int32_t e : m.vertex_edges(s.id)) out.push_back(edge_ref(e));
      for (int32_t t : m.vertex_triangles(s.id)) out.push_back(triangle_ref(t));
      break;
    }
    case 1: {
      out.push_back(s);
      for (int32_t t : m.edge_triangles(s.id))
        if (t >= 0) out.push_back(triangle_ref(t));
      break;
    }
    default: out.push_back(s); break;
  }
  return out;
}

/// Proper faces of s, sorted by (dim, id). A vertex has none.
inline std::vector<SimplexRef> faces(const TriMesh2& m, SimplexRef s) {
  if (!m.contains(s)) throw Error("faces: invalid simplex reference");
  std::vector<SimplexRef> out;
  switch (s.dim) {
    case 1: {
      for (int32_t v : m.edge_vertices(s.id)) out.push_back(vertex_ref(v));
      break;
    }
    case 2: {
      for (int32_t v : m.triangle_vertices(s.id)) out.push_back(vertex_ref(v));
      auto es = m.triangle_edges(s.id);
      std::sort(es.begin(), es.end());
      for (int32_t e : es) out.push_back(edge_ref(e));
      break;
    }
    default: break;
  }
  return out;
}

}  // namespace dvf

template <>
struct std::hash<dvf::SimplexRef> {
  size_t operator()(dvf::SimplexRef s) const noexcept {
    const uint64_t k = (static_cast<uint64_t>(static_cast<uint8_t>(s.dim)) << 32) ^
                       static_cast<uint32_t>(s.id);
    return std::hash<uint64_t>{}(k);
  }
};

#endif
