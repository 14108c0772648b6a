#ifndef DVF_PL_HPP
#define DVF_PL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "assignment.hpp"
#include "field.hpp"
#include "mesh.hpp"

namespace dvf {

enum class PLKind : uint8_t {
  source_node,
  sink_node,
  saddle,
  repelling_focus,
  attracting_focus,
  center,
};

inline const char* to_string(PLKind k) {
  switch (k) {
    case PLKind::source_node: return "source-node";
    case PLKind::sink_node: return "sink-node";
    case PLKind::saddle: return "saddle";
    case PLKind::repelling_focus: return "repelling-focus";
    case PLKind::attracting_focus: return "attracting-focus";
    case PLKind::center: return "center";
  }
  return "?";
}

/// Zero of the piecewise-linear interpolated field inside a triangle,
/// classified by the eigenvalues of the interpolation Jacobian.
struct PLCriticalPoint {
  Vec2 position;
  int32_t triangle = -1;
  PLKind kind = PLKind::center;
  double jacobian_det = 0.0;
  double jacobian_trace = 0.0;
  double min_abs_eigenvalue = 0.0;
  double eigenvector_angle_deg = 90.0;
  bool degenerate = false;
};

namespace detail {

struct Affine2 {
  // F(x) = A x + b
  double a00, a01, a10, a11;
  Vec2 b;
};

inline bool triangle_affine(const TriMesh2& m, const VectorField& f, int32_t t, Affine2& out) {
  const auto& tv = m.triangle_vertices(t);
  const Vec2 p0 = m.position(tv[0]), p1 = m.position(tv[1]), p2 = m.position(tv[2]);
  const Vec2 f0 = f.vectors[tv[0]], f1 = f.vectors[tv[1]], f2 = f.vectors[tv[2]];
  const Vec2 d1 = p1 - p0, d2 = p2 - p0;
  const double det = cross(d1, d2);
  if (det == 0.0) return false;  // geometrically degenerate triangle
  const Vec2 g1 = f1 - f0, g2 = f2 - f0;
  // A = [g1 g2] * [d1 d2]^-1
  out.a00 = (g1.x * d2.y - g2.x * d1.y) / det;
  out.a01 = (g2.x * d1.x - g1.x * d2.x) / det;
  out.a10 = (g1.y * d2.y - g2.y * d1.y) / det;
  out.a11 = (g2.y * d1.x - g1.y * d2.x) / det;
  out.b = {f0.x - (out.a00 * p0.x + out.a01 * p0.y), f0.y - (out.a10 * p0.x + out.a11 * p0.y)};
  return true;
}

inline PLKind classify_jacobian(double a00, double a01, double a10, double a11, double& min_abs_eig,
                                double& eigvec_angle_deg) {
  const double tr = a00 + a11;
  const double det = a00 * a11 - a01 * a10;
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double l0 = 0.5 * (tr - sq), l1 = 0.5 * (tr + sq);
    min_abs_eig = std::min(std::abs(l0), std::abs(l1));
    // Eigenvector for lambda: (a01, lambda - a00) or (lambda - a11, a10).
    auto eigvec = [&](double l) {
      Vec2 v{a01, l - a00};
      if (v.x == 0.0 && v.y == 0.0) v = {l - a11, a10};
      if (v.x == 0.0 && v.y == 0.0) v = {1.0, 0.0};
      return v;
    };
    if (l0 != l1) {
      const Vec2 v0 = eigvec(l0), v1 = eigvec(l1);
      const double s = std::abs(cross(v0, v1)) / (norm(v0) * norm(v1));
      eigvec_angle_deg = std::asin(std::min(1.0, s)) * 180.0 / M_PI;
    } else {
      eigvec_angle_deg = 0.0;  // repeated root, defective in general
    }
    if (det < 0.0) return PLKind::saddle;
    if (l0 > 0.0) return PLKind::source_node;
    return PLKind::sink_node;
  }
  min_abs_eig = std::sqrt(det);  // complex pair, |lambda| = sqrt(det)
  eigvec_angle_deg = 90.0;
  if (tr > 0.0) return PLKind::repelling_focus;
  if (tr < 0.0) return PLKind::attracting_focus;
  return PLKind::center;
}

}  // namespace detail

/// Per-triangle PL critical point extraction. Each triangle with a
/// non-singular interpolation Jacobian holds at most one zero; zeros on a
/// shared edge or vertex are reported once, owned by the lowest-id containing
/// triangle. `singular_triangles`, when given, counts triangles whose
/// Jacobian is exactly singular (their zeros, if any, cannot be located).
inline std::vector<PLCriticalPoint> pl_critical_points(const TriMesh2& m, const VectorField& f,
                                                       int64_t* singular_triangles = nullptr) {
  constexpr double kBaryEps = 1e-12;
  constexpr double kDedupEps = 1e-9;
  std::vector<PLCriticalPoint> out;
  if (singular_triangles) *singular_triangles = 0;

  for (int32_t t = 0; t < m.num_triangles(); ++t) {
    detail::Affine2 A;
    if (!detail::triangle_affine(m, f, t, A)) continue;
    const double det = A.a00 * A.a11 - A.a01 * A.a10;
    if (det == 0.0) {
      if (singular_triangles) ++*singular_triangles;
      continue;
    }
    // Solve A x = -b.
    const Vec2 x{(-A.b.x * A.a11 + A.b.y * A.a01) / det, (-A.b.y * A.a00 + A.b.x * A.a10) / det};

    const auto& tv = m.triangle_vertices(t);
    const Vec2 p0 = m.position(tv[0]), p1 = m.position(tv[1]), p2 = m.position(tv[2]);
    const Vec2 d1 = p1 - p0, d2 = p2 - p0, r = x - p0;
    const double area = cross(d1, d2);
    const double l1 = cross(r, d2) / area;
    const double l2 = cross(d1, r) / area;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -kBaryEps || l1 < -kBaryEps || l2 < -kBaryEps) continue;

    // A zero on a shared simplex is owned by the lowest-id triangle.
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (distance(it->position, x) < kDedupEps) {
        dup = true;
        break;
      }
    }
    if (dup) continue;

    PLCriticalPoint cp;
    cp.position = x;
    cp.triangle = t;
    cp.jacobian_det = det;
    cp.jacobian_trace = A.a00 + A.a11;
    cp.kind = detail::classify_jacobian(A.a00, A.a01, A.a10, A.a11, cp.min_abs_eigenvalue,
                                        cp.eigenvector_angle_deg);
    cp.degenerate = std::abs(det) < 1e-12 || cp.eigenvector_angle_deg < 1.0;
    out.push_back(cp);
  }
  return out;
}

/// Proximity levels between PL critical points and type-compatible discrete
/// critical simplices (saddle -> dim 1, non-saddle -> dim 0 or 2):
///   L1 within the containing triangle (the triangle, its edges, vertices);
///   L2 within the star of one of that triangle's vertices;
///   L3 barycenter within 2 units; L4 within 3 units.
/// Levels are cumulative, so the counts are monotone.
struct ProximityResult {
  int64_t pl_total = 0;
  int64_t l1 = 0, l2 = 0, l3 = 0, l4 = 0;
  std::vector<uint8_t> best_level;  // per PL critical point; 0 = unmatched
};

inline ProximityResult proximity_match(const std::vector<PLCriticalPoint>& cps,
                                       const DiscretePairing& V, const TriMesh2& m) {
  ProximityResult r;
  r.pl_total = static_cast<int64_t>(cps.size());
  r.best_level.assign(cps.size(), 0);

  std::vector<Vec2> saddle_bc, extremum_bc;
  for (SimplexRef c : V.critical_set()) {
    if (c.dim == 1)
      saddle_bc.push_back(barycenter(m, c));
    else
      extremum_bc.push_back(barycenter(m, c));
  }

  for (size_t i = 0; i < cps.size(); ++i) {
    const PLCriticalPoint& cp = cps[i];
    const bool want_saddle = cp.kind == PLKind::saddle;
    auto compatible_critical = [&](SimplexRef s) {
      if (want_saddle != (s.dim == 1)) return false;
      return V.is_critical(s);
    };

    bool in_l1 = false;
    {
      const int32_t t = cp.triangle;
      if (compatible_critical(triangle_ref(t))) in_l1 = true;
      for (int32_t e : m.triangle_edges(t))
        if (compatible_critical(edge_ref(e))) in_l1 = true;
      for (int32_t v : m.triangle_vertices(t))
        if (compatible_critical(vertex_ref(v))) in_l1 = true;
    }
    bool in_l2 = in_l1;
    if (!in_l2) {
      for (int32_t v : m.triangle_vertices(cp.triangle)) {
        if (compatible_critical(vertex_ref(v))) in_l2 = true;
        for (int32_t e : m.vertex_edges(v))
          if (compatible_critical(edge_ref(e))) in_l2 = true;
        for (int32_t t : m.vertex_triangles(v))
          if (compatible_critical(triangle_ref(t))) in_l2 = true;
        if (in_l2) break;
      }
    }
    double dmin = std::numeric_limits<double>::infinity();
    for (const Vec2& b : (want_saddle ? saddle_bc : extremum_bc))
      dmin = std::min(dmin, distance(b, cp.position));
    const bool in_l3 = in_l2 || dmin <= 2.0;
    const bool in_l4 = in_l3 || dmin <= 3.0;

    if (in_l1) ++r.l1;
    if (in_l2) ++r.l2;
    if (in_l3) ++r.l3;
    if (in_l4) ++r.l4;
    r.best_level[i] = in_l1 ? 1 : in_l2 ? 2 : in_l3 ? 3 : in_l4 ? 4 : 0;
  }
  return r;
}

}  // namespace dvf

#endif
