#include <gtest/gtest.h>

#include <dvf/simplify.hpp>
#include <dvf/validation.hpp>

#include "test_support.hpp"

using namespace dvf;
using namespace dvf_test;

// Randomized suite over small grids; the acceptance binary runs the same
// checks over >= 1000 seeds.

namespace {

constexpr int kSeeds = 200;

TriMesh2 property_mesh() { return grid_triangulation(16, 16, {0, 0}, 1.0); }

// structural variety: backslash diagonals, a thin strip, and the hexagon fan
std::vector<TriMesh2> variety_meshes() {
  std::vector<TriMesh2> out;
  out.push_back(grid_triangulation(12, 12, {0, 0}, 1.0, Diagonal::backslash));
  out.push_back(grid_triangulation(32, 3, {0, 0}, 0.7));
  out.push_back(hexagon_mesh());
  return out;
}

}  // namespace

TEST(Property, HoldsAcrossMeshShapes) {
  for (const TriMesh2& m : variety_meshes()) {
    for (uint64_t seed = 0; seed < 60; ++seed) {
      auto f = random_field(m, seed);
      auto V = process_outward_stars(m, f);
      auto rep = validate_pairing(m, V);
      ASSERT_TRUE(rep.all_pass()) << rep.first_failure();
      auto oracle = brute_force_outward(m, f);
      std::vector<int> edge_owner(m.num_edges(), 0);
      for (int32_t x = 0; x < m.num_vertices(); ++x) {
        auto s = outward_star(m, f, x);
        ASSERT_EQ(s.members, oracle[x].members) << "seed " << seed;
        for (SimplexRef r : s.members)
          if (r.dim == 1) ++edge_owner[r.id];
      }
      for (int32_t e = 0; e < m.num_edges(); ++e) ASSERT_EQ(edge_owner[e], 1);
      const int64_t saddles = V.critical_counts()[1];
      if (saddles > 0) {
        simplify_to(V, m, f, 0);
        auto after = validate_pairing(m, V);
        ASSERT_TRUE(after.all_pass()) << "seed " << seed << ": " << after.first_failure();
      }
      ASSERT_EQ(process_outward_stars(m, f, 3), process_outward_stars(m, f, 1));
    }
  }
}

TEST(Property, PairingValidOnRandomFields) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    auto rep = validate_pairing(m, V);
    ASSERT_TRUE(rep.all_pass()) << "seed " << seed << ": " << rep.first_failure();
  }
}

TEST(Property, OutwardStarOracleEquivalence) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    auto oracle = brute_force_outward(m, f);
    for (int32_t x = 0; x < m.num_vertices(); ++x)
      ASSERT_EQ(outward_star(m, f, x).members, oracle[x].members) << "seed " << seed;
  }
}

TEST(Property, StarDisjointnessAndEdgeCoverage) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    std::vector<int> edge_owner(m.num_edges(), 0);
    std::vector<int> tri_owner(m.num_triangles(), 0);
    for (int32_t x = 0; x < m.num_vertices(); ++x)
      for (SimplexRef r : outward_star(m, f, x).members) {
        if (r.dim == 1) ++edge_owner[r.id];
        if (r.dim == 2) ++tri_owner[r.id];
      }
    for (int32_t e = 0; e < m.num_edges(); ++e) ASSERT_EQ(edge_owner[e], 1) << "seed " << seed;
    for (int32_t t = 0; t < m.num_triangles(); ++t) ASSERT_LE(tri_owner[t], 1) << "seed " << seed;
  }
}

TEST(Property, EdgeFlowAntisymmetry) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    for (int32_t e = 0; e < m.num_edges(); ++e) {
      const auto& ev = m.edge_vertices(e);
      ASSERT_EQ(edge_flow(m, f, ev[0], ev[1]), -edge_flow(m, f, ev[1], ev[0]));
    }
  }
}

TEST(Property, AuditOrbitsCoverSkeletonOrbits) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    auto skel = extract_skeleton(V, m, f);
    auto census = exhaustive_vpath_audit(m, V);
    for (const Orbit& o : skel.orbits) {
      bool found = false;
      for (const OrbitCycle& c : census.cycles)
        if (c.index == o.index && c.pairs.size() == o.cycle.size() &&
            std::equal(c.pairs.begin(), c.pairs.end(), o.cycle.begin()))
          found = true;
      ASSERT_TRUE(found) << "seed " << seed;
    }
  }
}

TEST(Property, CancellationKeepsPairingValid) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    const auto saddles = V.critical_counts()[1];
    if (saddles == 0) continue;
    auto r = simplify_to(V, m, f, saddles > 3 ? saddles - 3 : 0);
    auto rep = validate_pairing(m, V);
    ASSERT_TRUE(rep.all_pass()) << "seed " << seed << ": " << rep.first_failure();
    for (size_t i = 1; i < r.curve.size(); ++i)
      ASSERT_LE(r.curve[i].num_criticals, r.curve[i - 1].num_criticals);
  }
}

TEST(Property, ReversalInvolution) {
  auto m = property_mesh();
  int replayed = 0;
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    auto fr = follow_vpaths(V, m, f);
    for (const auto& c : fr.queue) {
      if (c.kind != CancelKind::extremum) continue;
      const DiscretePairing before = V;
      auto plan = detail::make_reversal_plan(c.path);
      reverse_pairs(V, c.path);
      for (const auto& [tail, head] : plan.additions) V.remove_pair(tail, head);
      for (const auto& [tail, head] : plan.removals) V.set_pair(tail, head);
      ASSERT_EQ(V, before) << "seed " << seed;
      ++replayed;
      break;
    }
  }
  EXPECT_GT(replayed, kSeeds / 2);
}

TEST(Property, SerialParallelEquivalence) {
  auto m = property_mesh();
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto f = random_field(m, seed);
    ASSERT_EQ(process_outward_stars(m, f, 4), process_outward_stars(m, f, 1)) << "seed " << seed;
  }
}
