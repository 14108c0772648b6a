#ifndef DVF_SKELETON_HPP
#define DVF_SKELETON_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "assignment.hpp"
#include "flow.hpp"
#include "vpath.hpp"

namespace dvf {

struct Orbit {
  int8_t index = 0;  // 0 = attracting, 1 = repelling
  std::vector<std::array<SimplexRef, 2>> cycle;  // rotated so the minimal tail is first
  bool attracting() const { return index == 0; }
};

struct Skeleton {
  std::vector<std::pair<SimplexRef, int8_t>> criticals;  // (simplex, index = dim)
  std::vector<VPath> separatrices;
  std::vector<Orbit> orbits;
};

/// Trace driver with reusable visit marks, so repeated traces on large
/// meshes do not reallocate.
class VPathTracer {
 public:
  VPathTracer(const TriMesh2& m, const DiscretePairing& V)
      : mesh_(&m), pairing_(&V), vmark_(m.num_vertices(), 0), vpos_(m.num_vertices(), 0),
        tmark_(m.num_triangles(), 0), tpos_(m.num_triangles(), 0) {}

  /// Follow vertex/edge pairs from a vertex until a critical vertex, a
  /// repeated pair (orbit), or never: every non-critical vertex is paired.
  VPath descend(int32_t start_vertex, SimplexRef source) {
    VPath p;
    p.index = 0;
    p.source = source;
    ++stamp_;
    int32_t cur = start_vertex;
    int32_t pos = 0;
    while (true) {
      const SimplexRef vr = vertex_ref(cur);
      if (pairing_->is_critical(vr)) {
        p.end = VPathEnd::critical_simplex;
        p.terminal = vr;
        break;
      }
      if (vmark_[cur] == stamp_) {
        p.end = VPathEnd::orbit;
        p.orbit_entry = vpos_[cur];
        break;
      }
      vmark_[cur] = stamp_;
      vpos_[cur] = pos++;
      const int32_t e = pairing_->pair_up(vr).id;
      p.steps.push_back(vr);
      p.steps.push_back(edge_ref(e));
      cur = mesh_->other_edge_vertex(e, cur);
    }
    return p;
  }

  /// Follow edge/triangle pairs from a triangle, crossing each paired edge,
  /// until a critical triangle, a boundary edge, or a repeated pair.
  VPath ascend(int32_t start_triangle, SimplexRef source) {
    VPath p;
    p.index = 1;
    p.source = source;
    ++stamp_;
    int32_t cur = start_triangle;
    int32_t pos = 0;
    while (true) {
      const SimplexRef tr = triangle_ref(cur);
      if (pairing_->is_critical(tr)) {
        p.end = VPathEnd::critical_simplex;
        p.terminal = tr;
        break;
      }
      if (tmark_[cur] == stamp_) {
        p.end = VPathEnd::orbit;
        p.orbit_entry = tpos_[cur];
        break;
      }
      tmark_[cur] = stamp_;
      tpos_[cur] = pos++;
      const int32_t e = pairing_->pair_down(tr).id;
      p.steps.push_back(edge_ref(e));
      p.steps.push_back(tr);
      if (mesh_->edge_on_boundary(e)) {
        p.end = VPathEnd::boundary_exit;
        break;
      }
      cur = mesh_->other_edge_triangle(e, cur);
    }
    return p;
  }

 private:
  const TriMesh2* mesh_;
  const DiscretePairing* pairing_;
  std::vector<uint32_t> vmark_;
  std::vector<int32_t> vpos_;
  std::vector<uint32_t> tmark_;
  std::vector<int32_t> tpos_;
  uint32_t stamp_ = 0;
};

/// The two index-0 separatrices of a saddle, one per endpoint vertex.
inline std::array<VPath, 2> trace_descending(const DiscretePairing& V, const TriMesh2& m,
                                             SimplexRef saddle) {
  VPathTracer tracer(m, V);
  const auto& ev = m.edge_vertices(saddle.id);
  return {tracer.descend(ev[0], saddle), tracer.descend(ev[1], saddle)};
}

/// The index-1 separatrices of a saddle, one per incident triangle (a single
/// one on the boundary).
inline std::vector<VPath> trace_ascending(const DiscretePairing& V, const TriMesh2& m,
                                          SimplexRef saddle) {
  VPathTracer tracer(m, V);
  std::vector<VPath> out;
  for (int32_t t : m.edge_triangles(saddle.id))
    if (t >= 0) out.push_back(tracer.ascend(t, saddle));
  return out;
}

namespace detail {

inline std::vector<std::array<SimplexRef, 2>> orbit_cycle_of(const VPath& p) {
  std::vector<std::array<SimplexRef, 2>> cycle;
  for (int64_t i = p.orbit_entry; i < p.pair_count(); ++i)
    cycle.push_back({p.steps[2 * i], p.steps[2 * i + 1]});
  canonicalize_cycle(cycle);
  return cycle;
}

}  // namespace detail

/// The full topological skeleton: all criticals, four traces per saddle with
/// weights attached, and deduplicated closed orbits.
inline Skeleton extract_skeleton(const DiscretePairing& V, const TriMesh2& m,
                                 const VectorField& f) {
  Skeleton s;
  for (SimplexRef c : V.critical_set()) s.criticals.emplace_back(c, c.dim);

  VPathTracer tracer(m, V);
  std::unordered_map<SimplexRef, int32_t> orbit_ids;

  auto finish = [&](VPath&& p) {
    p.weight = vpath_weight(m, f, p);
    if (p.end == VPathEnd::orbit) {
      auto cycle = detail::orbit_cycle_of(p);
      const SimplexRef key = cycle.front()[0];
      auto [it, inserted] = orbit_ids.try_emplace(key, static_cast<int32_t>(s.orbits.size()));
      if (inserted) s.orbits.push_back({p.index, std::move(cycle)});
      p.orbit_id = it->second;
    }
    s.separatrices.push_back(std::move(p));
  };

  for (const auto& [c, index] : s.criticals) {
    if (index != 1) continue;
    const auto& ev = m.edge_vertices(c.id);
    finish(tracer.descend(ev[0], c));
    finish(tracer.descend(ev[1], c));
    for (int32_t t : m.edge_triangles(c.id))
      if (t >= 0) finish(tracer.ascend(t, c));
  }
  return s;
}

/// Groups critical simplices whose barycenters sit within `max_link_distance`
/// of a critical simplex of adjacent index; reports the group sizes.
/// Diagnostic for the chaining artifact around under-resolved sharp turns.
struct ChainStats {
  std::vector<int32_t> sizes;  // descending
  int32_t longest = 0;
};

inline ChainStats count_chains(const Skeleton& s, const TriMesh2& m, double max_link_distance) {
  const size_t n = s.criticals.size();
  std::vector<Vec2> bc(n);
  for (size_t i = 0; i < n; ++i) bc[i] = barycenter(m, s.criticals[i].first);

  std::vector<int32_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int32_t>(i);
  std::function<int32_t(int32_t)> find = [&](int32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (std::abs(s.criticals[i].second - s.criticals[j].second) != 1) continue;
      if (distance(bc[i], bc[j]) > max_link_distance) continue;
      parent[find(static_cast<int32_t>(i))] = find(static_cast<int32_t>(j));
    }

  std::unordered_map<int32_t, int32_t> count;
  for (size_t i = 0; i < n; ++i) ++count[find(static_cast<int32_t>(i))];
  ChainStats stats;
  for (auto& [root, c] : count) stats.sizes.push_back(c);
  std::sort(stats.sizes.rbegin(), stats.sizes.rend());
  stats.longest = stats.sizes.empty() ? 0 : stats.sizes.front();
  return stats;
}

}  // namespace dvf

#endif
