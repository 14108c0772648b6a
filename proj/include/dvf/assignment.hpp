#ifndef DVF_ASSIGNMENT_HPP
#define DVF_ASSIGNMENT_HPP

#include <array>
#include <cstdint>
#include <queue>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "flow.hpp"

namespace dvf {

struct IllegalReversal : Error { using Error::Error; };
struct StalePath : Error { using Error::Error; };

/// The discrete vector field: a partial matching of simplices with their
/// cofacets. Every simplex is in at most one pair; unpaired simplices are the
/// critical set. Stored as per-dimension partner arrays (-1 = none), which
/// makes the parallel driver lock-free: each entry is written by exactly one
/// outward-star owner.
class DiscretePairing {
 public:
  DiscretePairing() = default;
  explicit DiscretePairing(const TriMesh2& m)
      : v_up_(m.num_vertices(), -1),
        e_down_(m.num_edges(), -1),
        e_up_(m.num_edges(), -1),
        t_down_(m.num_triangles(), -1) {}

  SimplexRef pair_up(SimplexRef s) const {
    if (s.dim == 0 && v_up_[s.id] >= 0) return edge_ref(v_up_[s.id]);
    if (s.dim == 1 && e_up_[s.id] >= 0) return triangle_ref(e_up_[s.id]);
    return {};
  }
  SimplexRef pair_down(SimplexRef s) const {
    if (s.dim == 1 && e_down_[s.id] >= 0) return vertex_ref(e_down_[s.id]);
    if (s.dim == 2 && t_down_[s.id] >= 0) return edge_ref(t_down_[s.id]);
    return {};
  }
  SimplexRef partner(SimplexRef s) const {
    const SimplexRef up = pair_up(s);
    return up.valid() ? up : pair_down(s);
  }

  bool is_paired(SimplexRef s) const {
    switch (s.dim) {
      case 0: return v_up_[s.id] >= 0;
      case 1: return e_down_[s.id] >= 0 || e_up_[s.id] >= 0;
      case 2: return t_down_[s.id] >= 0;
      default: return false;
    }
  }
  bool is_critical(SimplexRef s) const { return !is_paired(s); }

  void set_pair(SimplexRef tail, SimplexRef head) {
    if (tail.dim + 1 != head.dim)
      throw IllegalReversal("set_pair: dimensions must differ by one");
    if (is_paired(tail) || is_paired(head))
      throw IllegalReversal("set_pair: simplex already in a pair");
    if (tail.dim == 0) {
      v_up_[tail.id] = head.id;
      e_down_[head.id] = tail.id;
    } else {
      e_up_[tail.id] = head.id;
      t_down_[head.id] = tail.id;
    }
  }

  void remove_pair(SimplexRef tail, SimplexRef head) {
    if (tail.dim == 0 && head.dim == 1 && v_up_[tail.id] == head.id) {
      v_up_[tail.id] = -1;
      e_down_[head.id] = -1;
      return;
    }
    if (tail.dim == 1 && head.dim == 2 && e_up_[tail.id] == head.id) {
      e_up_[tail.id] = -1;
      t_down_[head.id] = -1;
      return;
    }
    throw StalePath("remove_pair: pair not present");
  }

  int32_t num_vertices() const { return static_cast<int32_t>(v_up_.size()); }
  int32_t num_edges() const { return static_cast<int32_t>(e_up_.size()); }
  int32_t num_triangles() const { return static_cast<int32_t>(t_down_.size()); }

  std::array<int64_t, 3> critical_counts() const {
    std::array<int64_t, 3> c{0, 0, 0};
    for (int32_t v = 0; v < num_vertices(); ++v)
      if (v_up_[v] < 0) ++c[0];
    for (int32_t e = 0; e < num_edges(); ++e)
      if (e_down_[e] < 0 && e_up_[e] < 0) ++c[1];
    for (int32_t t = 0; t < num_triangles(); ++t)
      if (t_down_[t] < 0) ++c[2];
    return c;
  }
  int64_t critical_total() const {
    const auto c = critical_counts();
    return c[0] + c[1] + c[2];
  }

  std::vector<SimplexRef> critical_set() const {
    std::vector<SimplexRef> out;
    for (int32_t v = 0; v < num_vertices(); ++v)
      if (v_up_[v] < 0) out.push_back(vertex_ref(v));
    for (int32_t e = 0; e < num_edges(); ++e)
      if (e_down_[e] < 0 && e_up_[e] < 0) out.push_back(edge_ref(e));
    for (int32_t t = 0; t < num_triangles(); ++t)
      if (t_down_[t] < 0) out.push_back(triangle_ref(t));
    return out;
  }

  std::vector<std::pair<SimplexRef, SimplexRef>> pairs() const {
    std::vector<std::pair<SimplexRef, SimplexRef>> out;
    for (int32_t v = 0; v < num_vertices(); ++v)
      if (v_up_[v] >= 0) out.emplace_back(vertex_ref(v), edge_ref(v_up_[v]));
    for (int32_t e = 0; e < num_edges(); ++e)
      if (e_up_[e] >= 0) out.emplace_back(edge_ref(e), triangle_ref(e_up_[e]));
    return out;
  }

  friend bool operator==(const DiscretePairing&, const DiscretePairing&) = default;

 private:
  std::vector<int32_t> v_up_;    // vertex -> paired edge
  std::vector<int32_t> e_down_;  // edge   -> paired vertex
  std::vector<int32_t> e_up_;    // edge   -> paired triangle
  std::vector<int32_t> t_down_;  // triangle -> paired edge
};

namespace detail {

/// Priority key used by the per-star queues: the negated x-incident edge
/// flows sorted in decreasing order, compared lexicographically. A key that
/// is a strict prefix of another sorts first (so a simplex ranks after its
/// faces); exact ties fall back to (dim, id). The queues are min-queues, so
/// the most outward simplex pops first.
struct StarKey {
  double k0 = 0.0;
  double k1 = 0.0;
  uint8_t len = 1;
  SimplexRef ref;
  int32_t local = -1;

  friend bool operator<(const StarKey& a, const StarKey& b) {
    if (a.k0 != b.k0) return a.k0 < b.k0;
    if (a.len != b.len) return a.len < b.len;
    if (a.len == 2 && a.k1 != b.k1) return a.k1 < b.k1;
    return a.ref < b.ref;
  }
};

struct StarKeyGreater {
  bool operator()(const StarKey& a, const StarKey& b) const { return b < a; }
};

using StarQueue = std::priority_queue<StarKey, std::vector<StarKey>, StarKeyGreater>;

// Per-star simplex states.
// Edges:      0 = live in PQzero, 1 = paired, 2 = critical.
// Triangles:  0 = unqueued, 1 = in PQone, 2 = in PQzero, 3 = paired, 4 = critical.
struct StarEdge {
  int32_t edge = -1;
  double flow = 0.0;  // f(x, other endpoint)
  uint8_t state = 0;
};
struct StarTri {
  int32_t tri = -1;
  std::array<int32_t, 2> e_local{-1, -1};
  double k0 = 0.0, k1 = 0.0;
  uint8_t state = 0;
};

struct StarScratch {
  std::vector<StarEdge> edges;
  std::vector<StarTri> tris;
  StarQueue pq_one;
  StarQueue pq_zero;
};

/// Homotopy expansion over the outward star of x. Decisions depend only on
/// the star, so stars may be processed in any order or concurrently.
template <class PairSink, class CritSink>
void process_star_kernel(const TriMesh2& m, const VectorField& field, int32_t x, StarScratch& s,
                         PairSink&& emit_pair, CritSink&& emit_critical) {
  s.edges.clear();
  s.tris.clear();
  while (!s.pq_one.empty()) s.pq_one.pop();
  while (!s.pq_zero.empty()) s.pq_zero.pop();

  const Vec2 px = m.position(x);
  const Vec2 fx = field.vectors[x];
  for (int32_t e : m.vertex_edges(x)) {
    const int32_t o = m.other_edge_vertex(e, x);
    const double fl = flow_value(px, m.position(o), fx, field.vectors[o]);
    const bool mine = fl > 0.0 || (fl == 0.0 && x < o);
    if (mine) s.edges.push_back({e, fl, 0});
  }

  if (s.edges.empty()) {  // local sink
    emit_critical(vertex_ref(x));
    return;
  }

  // Steepest outward edge; flow ties go to the lowest edge id (edges arrive
  // in ascending id order, so strict > keeps the first maximum).
  int best = 0;
  for (int i = 1; i < static_cast<int>(s.edges.size()); ++i)
    if (s.edges[i].flow > s.edges[best].flow) best = i;
  s.edges[best].state = 1;
  emit_pair(vertex_ref(x), edge_ref(s.edges[best].edge));

  auto edge_local = [&s](int32_t e) {
    for (int i = 0; i < static_cast<int>(s.edges.size()); ++i)
      if (s.edges[i].edge == e) return i;
    return -1;
  };

  for (int32_t t : m.vertex_triangles(x)) {
    std::array<int32_t, 2> loc{-1, -1};
    int n = 0;
    bool member = true;
    for (int32_t te : m.triangle_edges(t)) {
      const auto& ev = m.edge_vertices(te);
      if (ev[0] != x && ev[1] != x) continue;
      const int li = edge_local(te);
      if (li < 0) {
        member = false;
        break;
      }
      loc[n++] = li;
    }
    if (!member || n != 2) continue;
    const double e0 = -s.edges[loc[0]].flow, e1 = -s.edges[loc[1]].flow;
    s.tris.push_back({t, loc, std::max(e0, e1), std::min(e0, e1), 0});
  }

  auto unpaired_faces = [&s](const StarTri& tr) {
    return static_cast<int>(s.edges[tr.e_local[0]].state == 0) +
           static_cast<int>(s.edges[tr.e_local[1]].state == 0);
  };
  auto push_tri = [&s](int j) {
    s.tris[j].state = 1;
    s.pq_one.push({s.tris[j].k0, s.tris[j].k1, 2, triangle_ref(s.tris[j].tri), j});
  };
  auto push_tris_of_edge = [&](int edge_local_idx) {
    for (int j = 0; j < static_cast<int>(s.tris.size()); ++j) {
      const StarTri& tr = s.tris[j];
      if (tr.state != 0) continue;
      if (tr.e_local[0] != edge_local_idx && tr.e_local[1] != edge_local_idx) continue;
      if (unpaired_faces(tr) == 1) push_tri(j);
    }
  };

  for (int i = 0; i < static_cast<int>(s.edges.size()); ++i)
    if (s.edges[i].state == 0)
      s.pq_zero.push({-s.edges[i].flow, 0.0, 1, edge_ref(s.edges[i].edge), i});
  push_tris_of_edge(best);

  while (!s.pq_one.empty() || !s.pq_zero.empty()) {
    while (!s.pq_one.empty()) {
      const StarKey top = s.pq_one.top();
      s.pq_one.pop();
      StarTri& tr = s.tris[top.local];
      if (tr.state != 1) continue;
      if (unpaired_faces(tr) == 0) {
        tr.state = 2;
        s.pq_zero.push({tr.k0, tr.k1, 2, triangle_ref(tr.tri), top.local});
        continue;
      }
      const int el = s.edges[tr.e_local[0]].state == 0 ? tr.e_local[0] : tr.e_local[1];
      tr.state = 3;
      s.edges[el].state = 1;
      emit_pair(edge_ref(s.edges[el].edge), triangle_ref(tr.tri));
      push_tris_of_edge(el);
    }
    bool made_critical = false;
    while (!s.pq_zero.empty()) {
      const StarKey top = s.pq_zero.top();
      s.pq_zero.pop();
      if (top.ref.dim == 1) {
        StarEdge& eg = s.edges[top.local];
        if (eg.state != 0) continue;
        eg.state = 2;
        emit_critical(edge_ref(eg.edge));
        push_tris_of_edge(top.local);
      } else {
        StarTri& tr = s.tris[top.local];
        if (tr.state != 2) continue;
        tr.state = 4;
        emit_critical(triangle_ref(tr.tri));
      }
      made_critical = true;
      break;
    }
    if (!made_critical && s.pq_one.empty()) break;
  }
}

}  // namespace detail

struct StarOutput {
  std::vector<std::pair<SimplexRef, SimplexRef>> pairs;
  std::vector<SimplexRef> criticals;
};

/// Pairing decisions for a single vertex. Merging the outputs of all vertices
/// (plus the simplices in no outward star, which stay unpaired) reproduces
/// process_outward_stars exactly, in any order.
inline StarOutput process_single_star(const TriMesh2& m, const VectorField& f, int32_t x) {
  StarOutput out;
  detail::StarScratch scratch;
  detail::process_star_kernel(
      m, f, x, scratch, [&](SimplexRef a, SimplexRef b) { out.pairs.emplace_back(a, b); },
      [&](SimplexRef c) { out.criticals.push_back(c); });
  return out;
}

/// ProcessOutwardStars: build the discrete vector field for the whole mesh.
/// Simplices that end up in no pair are the critical set (including every
/// simplex that belongs to no outward star). With num_threads > 1 vertices
/// are partitioned across threads; the result is bit-identical to the serial
/// run because each pairing slot has a unique owner.
inline DiscretePairing process_outward_stars(const TriMesh2& m, const VectorField& f,
                                             int num_threads = 1) {
  DiscretePairing V(m);
  auto run_range = [&](int32_t lo, int32_t hi) {
    detail::StarScratch scratch;
    for (int32_t x = lo; x < hi; ++x)
      detail::process_star_kernel(
          m, f, x, scratch, [&](SimplexRef a, SimplexRef b) { V.set_pair(a, b); },
          [](SimplexRef) {});
  };
  const int32_t nv = m.num_vertices();
  if (num_threads <= 1 || nv < 2 * num_threads) {
    run_range(0, nv);
  } else {
    std::vector<std::thread> workers;
    const int32_t chunk = (nv + num_threads - 1) / num_threads;
    for (int k = 0; k < num_threads; ++k) {
      const int32_t lo = k * chunk;
      const int32_t hi = std::min(nv, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(run_range, lo, hi);
    }
    for (auto& w : workers) w.join();
  }
  return V;
}

/// Triangles whose three edges flow outward from three different vertices;
/// they belong to no outward star and stay critical (the discrete analogue
/// of a center).
inline std::vector<SimplexRef> unassigned_triangles(const TriMesh2& m, const VectorField& f) {
  std::vector<int32_t> winner(m.num_edges());
  for (int32_t e = 0; e < m.num_edges(); ++e) winner[e] = edge_direction(m, f, e);
  std::vector<SimplexRef> out;
  for (int32_t t = 0; t < m.num_triangles(); ++t) {
    bool owned = false;
    for (int32_t v : m.triangle_vertices(t)) {
      int won = 0;
      for (int32_t te : m.triangle_edges(t)) {
        const auto& ev = m.edge_vertices(te);
        if ((ev[0] == v || ev[1] == v) && winner[te] == v) ++won;
      }
      if (won == 2) {
        owned = true;
        break;
      }
    }
    if (!owned) out.push_back(triangle_ref(t));
  }
  return out;
}

}  // namespace dvf

#endif
