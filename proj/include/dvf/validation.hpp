#ifndef DVF_VALIDATION_HPP
#define DVF_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "assignment.hpp"

namespace dvf {

struct CheckResult {
  std::string name;
  bool pass = true;
  SimplexRef witness_a;  // counterexample simplices when the check fails
  SimplexRef witness_b;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return c.name + ": " + c.detail;
    return {};
  }
};

/// Checks the matching property, pair legality, the paired/critical
/// partition, and the Euler identity.
inline ValidationReport validate_pairing(const TriMesh2& m, const DiscretePairing& V) {
  ValidationReport r;

  CheckResult matching{"matching", true, {}, {}, ""};
  CheckResult legality{"pair-legality", true, {}, {}, ""};
  CheckResult partition{"partition", true, {}, {}, ""};
  CheckResult euler{"euler-identity", true, {}, {}, ""};

  // Each simplex in at most one pair: an edge must not be both a pair head
  // and a pair tail, and the two directional maps must mirror each other.
  for (int32_t e = 0; e < m.num_edges(); ++e) {
    const SimplexRef er = edge_ref(e);
    const SimplexRef down = V.pair_down(er), up = V.pair_up(er);
    if (down.valid() && up.valid()) {
      matching = {"matching", false, er, down, "edge is head and tail simultaneously"};
      break;
    }
    if (down.valid() && V.pair_up(down) != er) {
      matching = {"matching", false, er, down, "tail does not point back to head"};
      break;
    }
    if (up.valid() && V.pair_down(up) != er) {
      matching = {"matching", false, er, up, "head does not point back to tail"};
      break;
    }
  }
  for (int32_t v = 0; matching.pass && v < m.num_vertices(); ++v) {
    const SimplexRef vr = vertex_ref(v);
    const SimplexRef up = V.pair_up(vr);
    if (up.valid() && V.pair_down(up) != vr)
      matching = {"matching", false, vr, up, "vertex pair not mirrored"};
  }

  for (const auto& [tail, head] : V.pairs()) {
    if (!detail::is_face_of(m, tail, head)) {
      legality = {"pair-legality", false, tail, head, "tail is not a face of head"};
      break;
    }
  }

  // Paired and critical must partition every simplex: each pair covers two.
  const int64_t covered = 2 * static_cast<int64_t>(V.pairs().size()) + V.critical_total();
  if (covered != m.num_simplices()) {
    partition.pass = false;
    partition.detail = "pairs and criticals cover " + std::to_string(covered) + " of " +
                       std::to_string(m.num_simplices()) + " simplices";
  }

  const auto c = V.critical_counts();
  const int64_t chi = m.euler_characteristic();
  if (c[0] - c[1] + c[2] != chi) {
    euler.pass = false;
    euler.detail = "critical counts " + std::to_string(c[0]) + " - " + std::to_string(c[1]) +
                   " + " + std::to_string(c[2]) + " != chi " + std::to_string(chi);
  }

  r.checks = {matching, legality, partition, euler};
  return r;
}

/// Independent re-derivation of every outward star by a direct predicate
/// scan. Deliberately re-implements the flow formula and the tie rule rather
/// than calling into flow.hpp, so it can serve as an oracle for it.
inline std::vector<OutwardStar> brute_force_outward(const TriMesh2& m, const VectorField& f) {
  auto outward_from = [&](int32_t x, int32_t other) {
    const Vec2 pa = m.position(x), pb = m.position(other);
    const Vec2 fa = f.vectors[x], fb = f.vectors[other];
    const double mean_u = (fa.x + fb.x) / 2.0, mean_v = (fa.y + fb.y) / 2.0;
    const double val = mean_u * (pb.x - pa.x) + mean_v * (pb.y - pa.y);
    if (val > 0.0) return true;
    if (val < 0.0) return false;
    return x < other;
  };

  std::vector<OutwardStar> stars(m.num_vertices());
  for (int32_t x = 0; x < m.num_vertices(); ++x) {
    OutwardStar& s = stars[x];
    s.center = x;
    for (SimplexRef cand : star(m, vertex_ref(x))) {
      bool all_out = true;
      if (cand.dim == 1) {
        all_out = outward_from(x, m.other_edge_vertex(cand.id, x));
      } else if (cand.dim == 2) {
        for (int32_t v : m.triangle_vertices(cand.id))
          if (v != x && (m.edge_between(x, v) < 0 || !outward_from(x, v))) all_out = false;
      }
      if (all_out) s.members.push_back(cand);
    }
  }
  return stars;
}

struct OrbitCycle {
  int8_t index = 0;
  std::vector<std::array<SimplexRef, 2>> pairs;  // rotated so the minimal tail is first
};

struct OrbitCensus {
  std::vector<OrbitCycle> cycles;
};

/// Enumerates every closed orbit by walking the full pair/anti-pair graph
/// from every pair. The successor of a pair is unique in the traversal
/// direction, so the graph is functional and standard cycle detection finds
/// all cycles. Intended for small meshes.
inline OrbitCensus exhaustive_vpath_audit(const TriMesh2& m, const DiscretePairing& V) {
  OrbitCensus census;

  // Index-0: nodes are paired vertices; successor crosses the paired edge.
  {
    std::vector<int8_t> color(m.num_vertices(), 0);  // 0 new, 1 active, 2 done
    std::vector<int32_t> order(m.num_vertices(), -1);
    std::vector<int32_t> walk;
    for (int32_t start = 0; start < m.num_vertices(); ++start) {
      if (color[start] != 0 || !V.pair_up(vertex_ref(start)).valid()) continue;
      walk.clear();
      int32_t cur = start;
      while (true) {
        if (cur < 0 || !V.pair_up(vertex_ref(cur)).valid()) break;  // terminal
        if (color[cur] == 2) break;                                 // joins known structure
        if (color[cur] == 1) {                                      // closed a new cycle
          OrbitCycle cy;
          cy.index = 0;
          for (size_t i = order[cur]; i < walk.size(); ++i) {
            const int32_t v = walk[i];
            cy.pairs.push_back({vertex_ref(v), V.pair_up(vertex_ref(v))});
          }
          detail::canonicalize_cycle(cy.pairs);
          census.cycles.push_back(std::move(cy));
          break;
        }
        color[cur] = 1;
        order[cur] = static_cast<int32_t>(walk.size());
        walk.push_back(cur);
        cur = m.other_edge_vertex(V.pair_up(vertex_ref(cur)).id, cur);
      }
      for (int32_t v : walk) color[v] = 2;
    }
  }

  // Index-1: nodes are down-paired triangles; successor crosses the paired
  // edge to the neighbouring triangle (the trace orientation).
  {
    std::vector<int8_t> color(m.num_triangles(), 0);
    std::vector<int32_t> order(m.num_triangles(), -1);
    std::vector<int32_t> walk;
    for (int32_t start = 0; start < m.num_triangles(); ++start) {
      if (color[start] != 0 || !V.pair_down(triangle_ref(start)).valid()) continue;
      walk.clear();
      int32_t cur = start;
      while (true) {
        if (cur < 0 || !V.pair_down(triangle_ref(cur)).valid()) break;
        if (color[cur] == 2) break;
        if (color[cur] == 1) {
          OrbitCycle cy;
          cy.index = 1;
          for (size_t i = order[cur]; i < walk.size(); ++i) {
            const int32_t t = walk[i];
            cy.pairs.push_back({V.pair_down(triangle_ref(t)), triangle_ref(t)});
          }
          detail::canonicalize_cycle(cy.pairs);
          census.cycles.push_back(std::move(cy));
          break;
        }
        color[cur] = 1;
        order[cur] = static_cast<int32_t>(walk.size());
        walk.push_back(cur);
        const int32_t e = V.pair_down(triangle_ref(cur)).id;
        cur = m.edge_on_boundary(e) ? -1 : m.other_edge_triangle(e, cur);
      }
      for (int32_t t : walk) color[t] = 2;
    }
  }

  return census;
}

}  // namespace dvf

#endif
