#ifndef DVF_SIMPLIFY_HPP
#define DVF_SIMPLIFY_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "skeleton.hpp"

namespace dvf {

namespace detail {

struct ReversalPlan {
  std::vector<std::array<SimplexRef, 2>> removals;
  std::vector<std::array<SimplexRef, 2>> additions;
  SimplexRef new_saddle;  // set for orbit reversals (the slid saddle)
};

/// Swap pairs and anti-pairs along a traced path. For a saddle-extremum path
/// both end criticals join pairs; for a saddle-orbit path the saddle slides
/// onto the last cycle simplex, which stays unpaired (the final anti-pair of
/// the cycle is not reversed).
inline ReversalPlan make_reversal_plan(const VPath& p) {
  ReversalPlan plan;
  const int64_t n = p.pair_count();
  for (int64_t i = 0; i < n; ++i) plan.removals.push_back({p.steps[2 * i], p.steps[2 * i + 1]});

  if (p.end == VPathEnd::critical_simplex) {
    if (n == 0) {
      if (p.index == 0)
        plan.additions.push_back({p.terminal, p.source});
      else
        plan.additions.push_back({p.source, p.terminal});
      return plan;
    }
    if (p.index == 0) {
      plan.additions.push_back({p.steps[0], p.source});
      for (int64_t i = 1; i < n; ++i) plan.additions.push_back({p.steps[2 * i], p.steps[2 * i - 1]});
      plan.additions.push_back({p.terminal, p.steps[2 * n - 1]});
    } else {
      plan.additions.push_back({p.source, p.steps[1]});
      for (int64_t i = 1; i < n; ++i) plan.additions.push_back({p.steps[2 * i - 2], p.steps[2 * i + 1]});
      plan.additions.push_back({p.steps[2 * n - 2], p.terminal});
    }
    return plan;
  }

  if (p.end == VPathEnd::orbit) {
    if (p.index == 0) {
      plan.additions.push_back({p.steps[0], p.source});
      for (int64_t i = 1; i < n; ++i) plan.additions.push_back({p.steps[2 * i], p.steps[2 * i - 1]});
      plan.new_saddle = p.steps[2 * n - 1];
    } else {
      plan.additions.push_back({p.source, p.steps[1]});
      for (int64_t i = 1; i < n; ++i) plan.additions.push_back({p.steps[2 * i - 2], p.steps[2 * i + 1]});
      plan.new_saddle = p.steps[2 * n - 2];
    }
    return plan;
  }

  throw Error("reverse_pairs: boundary-exiting paths cannot be reversed");
}

}  // namespace detail

struct ReversalOutcome {
  SimplexRef new_saddle;  // valid only after a saddle-orbit reversal
};

/// Reverse the V-path in place. Requires the path to match the current
/// pairing (StalePath otherwise) and both endpoints to still be critical.
inline ReversalOutcome reverse_pairs(DiscretePairing& V, const VPath& p) {
  if (!p.source.valid() || !V.is_critical(p.source))
    throw StalePath("reverse_pairs: source is no longer critical");
  if (p.end == VPathEnd::critical_simplex && !V.is_critical(p.terminal))
    throw StalePath("reverse_pairs: terminal is no longer critical");

  const auto plan = detail::make_reversal_plan(p);
  for (const auto& [tail, head] : plan.removals)
    if (V.pair_up(tail) != head) throw StalePath("reverse_pairs: pairing changed since trace");

  for (const auto& [tail, head] : plan.removals) V.remove_pair(tail, head);
  for (const auto& [tail, head] : plan.additions) V.set_pair(tail, head);
  return {plan.new_saddle};
}

struct CurvePoint {
  int64_t num_criticals = 0;
  double cost = 0.0;
};

/// Rows `num_criticals,cost` in execution order.
inline std::string weight_curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "num_criticals,cost\n";
  char buf[64];
  for (const CurvePoint& c : curve) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g\n", static_cast<long long>(c.num_criticals),
                  c.cost);
    out += buf;
  }
  return out;
}

enum class CancelKind : uint8_t { extremum = 0, orbit = 1 };

struct CancellationCandidate {
  double cost = 0.0;
  SimplexRef saddle;
  CancelKind kind = CancelKind::extremum;
  SimplexRef partner;  // the extremum, or the orbit's canonical key (min cycle tail)
  VPath path;
  uint64_t stamp = 0;

  friend bool operator<(const CancellationCandidate& a, const CancellationCandidate& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.saddle != b.saddle) return a.saddle < b.saddle;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.path.index != b.path.index) return a.path.index < b.path.index;
    if (a.partner != b.partner) return a.partner < b.partner;
    return a.stamp < b.stamp;
  }
};

struct SimplifyOptions {
  double max_cost = std::numeric_limits<double>::infinity();
};

struct SimplifyResult {
  bool reached_target = false;
  bool stopped_by_cost = false;
  int64_t cancellations = 0;
  std::vector<CurvePoint> curve;
};

/// Weight-ranked cancellation driver: traces the four separatrices of every
/// saddle, queues candidates by ascending |path weight|, and repeatedly
/// reverses the cheapest valid one, re-tracing the saddles connected to the
/// cancelled endpoint. Lazy deletion: candidates carry the generation stamp
/// of their saddle and are skipped once it changes.
class SaddleSimplifier {
 public:
  SaddleSimplifier(DiscretePairing& V, const TriMesh2& m, const VectorField& f)
      : V_(V), mesh_(m), field_(f), tracer_(m, V), stamp_(m.num_edges(), 0) {
    const auto c = V.critical_counts();
    crit_count_ = c[0] + c[1] + c[2];
    saddle_count_ = c[1];
    for (int32_t e = 0; e < m.num_edges(); ++e)
      if (V.is_critical(edge_ref(e))) retrace(e);
  }

  int64_t saddle_count() const { return saddle_count_; }
  int64_t critical_count() const { return crit_count_; }

  SimplifyResult run_to_saddles(int64_t target_saddles, SimplifyOptions opts = {}) {
    SimplifyResult r;
    while (saddle_count_ > target_saddles && !heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), cmp_);
      CancellationCandidate c = std::move(heap_.back());
      heap_.pop_back();
      if (!candidate_valid(c)) continue;
      if (c.kind == CancelKind::orbit) {
        auto g = orbit_guard_.find(c.saddle.id);
        if (g != orbit_guard_.end() && g->second == c.path.index) continue;
      }
      if (!(c.cost <= opts.max_cost)) {
        r.stopped_by_cost = true;
        break;
      }
      execute(c, r);
    }
    r.reached_target = saddle_count_ <= target_saddles;
    return r;
  }

  std::vector<CancellationCandidate> sorted_candidates() const {
    std::vector<CancellationCandidate> out;
    for (const auto& c : heap_)
      if (candidate_valid(c)) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::map<SimplexRef, std::vector<SimplexRef>> connections() const {
    std::map<SimplexRef, std::vector<SimplexRef>> out;
    for (const auto& [e, eps] : conn_fwd_)
      if (!eps.empty()) out[edge_ref(e)] = eps;
    return out;
  }

 private:
  struct HeapGreater {
    bool operator()(const CancellationCandidate& a, const CancellationCandidate& b) const {
      return b < a;
    }
  };

  bool candidate_valid(const CancellationCandidate& c) const {
    if (!V_.is_critical(c.saddle)) return false;
    if (stamp_[c.saddle.id] != c.stamp) return false;
    if (c.kind == CancelKind::extremum && !V_.is_critical(c.partner)) return false;
    return true;
  }

  void link(int32_t saddle_edge, SimplexRef endpoint) {
    auto& fwd = conn_fwd_[saddle_edge];
    if (std::find(fwd.begin(), fwd.end(), endpoint) == fwd.end()) fwd.push_back(endpoint);
    auto& rev = conn_rev_[endpoint];
    if (std::find(rev.begin(), rev.end(), saddle_edge) == rev.end()) rev.push_back(saddle_edge);
  }

  void drop_links(int32_t saddle_edge) {
    auto it = conn_fwd_.find(saddle_edge);
    if (it == conn_fwd_.end()) return;
    for (SimplexRef ep : it->second) {
      auto rit = conn_rev_.find(ep);
      if (rit == conn_rev_.end()) continue;
      auto& v = rit->second;
      v.erase(std::remove(v.begin(), v.end(), saddle_edge), v.end());
      if (v.empty()) conn_rev_.erase(rit);
    }
    conn_fwd_.erase(it);
  }

  void push_candidate(CancellationCandidate&& c) {
    heap_.push_back(std::move(c));
    std::push_heap(heap_.begin(), heap_.end(), cmp_);
  }

  void retrace(int32_t e) {
    ++stamp_[e];
    drop_links(e);
    const SimplexRef saddle = edge_ref(e);
    const auto& ev = mesh_.edge_vertices(e);

    std::vector<VPath> paths;
    paths.push_back(tracer_.descend(ev[0], saddle));
    paths.push_back(tracer_.descend(ev[1], saddle));
    for (int32_t t : mesh_.edge_triangles(e))
      if (t >= 0) paths.push_back(tracer_.ascend(t, saddle));

    // Both same-index separatrices reaching the same extremum: connection is
    // recorded but the cancellation is suppressed (reversal would be illegal).
    auto same_terminal = [](const VPath& a, const VPath& b) {
      return a.end == VPathEnd::critical_simplex && b.end == VPathEnd::critical_simplex &&
             a.terminal == b.terminal;
    };
    const bool desc_dup = same_terminal(paths[0], paths[1]);
    const bool asc_dup = paths.size() == 4 && same_terminal(paths[2], paths[3]);

    for (size_t i = 0; i < paths.size(); ++i) {
      VPath& p = paths[i];
      if (p.end == VPathEnd::boundary_exit) continue;
      p.weight = vpath_weight(mesh_, field_, p);
      CancellationCandidate c;
      c.cost = std::abs(p.weight);
      c.saddle = saddle;
      c.stamp = stamp_[e];
      if (p.end == VPathEnd::critical_simplex) {
        c.kind = CancelKind::extremum;
        c.partner = p.terminal;
      } else {
        c.kind = CancelKind::orbit;
        auto cycle = detail::orbit_cycle_of(p);
        c.partner = cycle.front()[0];
      }
      link(e, c.partner);
      const bool suppressed =
          c.kind == CancelKind::extremum && ((i < 2 && desc_dup) || (i >= 2 && asc_dup));
      if (suppressed) continue;
      c.path = std::move(p);
      push_candidate(std::move(c));
    }
  }

  void execute(const CancellationCandidate& c, SimplifyResult& r) {
    const ReversalOutcome outcome = reverse_pairs(V_, c.path);
    ++r.cancellations;

    std::vector<int32_t> affected;
    auto rit = conn_rev_.find(c.partner);
    if (rit != conn_rev_.end()) affected = rit->second;
    conn_rev_.erase(c.partner);
    orbit_guard_.erase(c.saddle.id);

    if (c.kind == CancelKind::extremum) {
      crit_count_ -= 2;
      saddle_count_ -= 1;
    } else {
      orbit_guard_[outcome.new_saddle.id] = c.path.index;
      affected.push_back(outcome.new_saddle.id);
    }
    r.curve.push_back({crit_count_, c.cost});

    drop_links(c.saddle.id);
    for (int32_t s : affected) {
      if (s == c.saddle.id) continue;
      if (V_.is_critical(edge_ref(s))) retrace(s);
    }
  }

  DiscretePairing& V_;
  const TriMesh2& mesh_;
  const VectorField& field_;
  VPathTracer tracer_;
  std::vector<uint64_t> stamp_;
  std::vector<CancellationCandidate> heap_;
  HeapGreater cmp_;
  std::unordered_map<int32_t, std::vector<SimplexRef>> conn_fwd_;  // saddle edge -> endpoints
  std::unordered_map<SimplexRef, std::vector<int32_t>> conn_rev_;  // endpoint -> saddle edges
  std::unordered_map<int32_t, int8_t> orbit_guard_;  // saddle edge -> last-cancelled orbit index
  int64_t crit_count_ = 0;
  int64_t saddle_count_ = 0;
};

struct FollowResult {
  std::vector<CancellationCandidate> queue;  // ascending cost
  std::map<SimplexRef, std::vector<SimplexRef>> connections;
};

/// Trace all four separatrices of every saddle and build the candidate queue
/// plus the saddle-to-endpoint connection map. Boundary-exiting paths are
/// excluded.
inline FollowResult follow_vpaths(const DiscretePairing& V, const TriMesh2& m,
                                  const VectorField& f) {
  DiscretePairing copy = V;
  SaddleSimplifier engine(copy, m, f);
  return {engine.sorted_candidates(), engine.connections()};
}

/// Algorithm target: reduce the saddle count to `target_saddles` (or stop on
/// an exhausted queue / the cost ceiling). The weight curve records
/// (remaining critical count, executed cost) per cancellation.
inline SimplifyResult simplify_to(DiscretePairing& V, const TriMesh2& m, const VectorField& f,
                                  int64_t target_saddles, SimplifyOptions opts = {}) {
  if (target_saddles < 0) throw Error("simplify_to: negative saddle target");
  SaddleSimplifier engine(V, m, f);
  return engine.run_to_saddles(target_saddles, opts);
}

/// Translate a total-criticals target into a saddle target via the Euler
/// identity: |C| = chi + 2 * #saddles.
inline int64_t saddle_target_for_criticals(const TriMesh2& m, int64_t target_criticals) {
  const int64_t chi = m.euler_characteristic();
  if (target_criticals < chi || (target_criticals - chi) % 2 != 0)
    throw Error("target |C| = " + std::to_string(target_criticals) +
                " is not reachable: |C| = chi + 2k with chi = " + std::to_string(chi));
  return (target_criticals - chi) / 2;
}

}  // namespace dvf

#endif
