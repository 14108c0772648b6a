#include <gtest/gtest.h>

#include <dvf/generators.hpp>
#include <dvf/skeleton.hpp>
#include <dvf/validation.hpp>

#include "test_support.hpp"

using namespace dvf;
using namespace dvf_test;

namespace {

std::vector<SimplexRef> saddles_of(const DiscretePairing& V) {
  std::vector<SimplexRef> out;
  for (SimplexRef c : V.critical_set())
    if (c.dim == 1) out.push_back(c);
  return out;
}

}  // namespace

TEST(Trace, DescendingEndsAtCriticalVertices) {
  auto m = grid_triangulation(8, 8, {0, 0}, 1.0);
  auto f = constant_field(m, {1, 0.0625});  // slight tilt avoids symmetric ties
  auto V = process_outward_stars(m, f);
  for (SimplexRef s : saddles_of(V)) {
    auto paths = trace_descending(V, m, s);
    for (const VPath& p : paths) {
      ASSERT_EQ(p.end, VPathEnd::critical_simplex);
      EXPECT_TRUE(V.is_critical(p.terminal));
      EXPECT_EQ(p.terminal.dim, 0);
      // legality: consecutive steps are pairs of V
      for (int64_t i = 0; i < p.pair_count(); ++i)
        EXPECT_EQ(V.pair_up(p.steps[2 * i]), p.steps[2 * i + 1]);
    }
  }
}

TEST(Trace, AdjacentCriticalVertexGivesEmptyPath) {
  // saddles whose edge touches a critical vertex must yield a zero-pair path
  auto m = grid_triangulation(8, 8, {0, 0}, 1.0);
  int found = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    for (SimplexRef s : saddles_of(V)) {
      for (int32_t v : m.edge_vertices(s.id)) {
        if (!V.is_critical(vertex_ref(v))) continue;
        auto paths = trace_descending(V, m, s);
        bool empty_to_v = false;
        for (const VPath& p : paths)
          if (p.pair_count() == 0 && p.end == VPathEnd::critical_simplex &&
              p.terminal == vertex_ref(v))
            empty_to_v = true;
        EXPECT_TRUE(empty_to_v);
        ++found;
      }
    }
  }
  EXPECT_GE(found, 1);
}

TEST(Trace, OrbitDetectedAndReachableFromSaddle) {
  // rotation with a uniform drift: a center surrounded by an orbit, with
  // saddles outside whose traces spiral into it
  auto m = grid_triangulation(15, 15, {-7, -7}, 1.0);
  VectorField f;
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    const double g = 3.0 * std::exp(-(p.x * p.x + p.y * p.y) / 10.0);
    f.vectors.push_back({-p.y * g + 1.0, p.x * g});
  }
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  EXPECT_FALSE(skel.orbits.empty());
  auto census = exhaustive_vpath_audit(m, V);
  EXPECT_FALSE(census.cycles.empty());
  // every skeleton orbit appears in the exhaustive census
  for (const Orbit& o : skel.orbits) {
    bool found = false;
    for (const OrbitCycle& c : census.cycles)
      if (c.index == o.index && c.pairs.size() == o.cycle.size() &&
          std::equal(c.pairs.begin(), c.pairs.end(), o.cycle.begin()))
        found = true;
    EXPECT_TRUE(found);
  }
}

TEST(Trace, PureRotationHasCycleButNoSaddle) {
  auto m = grid_triangulation(9, 9, {-4, -4}, 1.0);
  auto f = dvf_test::rotation_field(m, {0.1, 0.1});
  auto V = process_outward_stars(m, f);
  auto census = exhaustive_vpath_audit(m, V);
  EXPECT_FALSE(census.cycles.empty());
  EXPECT_EQ(V.critical_counts()[1], 0);  // no saddle, so no separatrix reaches it
  EXPECT_TRUE(extract_skeleton(V, m, f).orbits.empty());
}

TEST(Trace, AscendingBoundaryExitAndTermination) {
  auto m = grid_triangulation(8, 8, {0, 0}, 1.0);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    for (SimplexRef s : saddles_of(V)) {
      auto asc = trace_ascending(V, m, s);
      EXPECT_LE(asc.size(), 2u);
      if (m.edge_on_boundary(s.id)) {
        EXPECT_EQ(asc.size(), 1u);
      }
      for (const VPath& p : asc) {
        EXPECT_LE(p.pair_count(), m.num_triangles());
        if (p.end == VPathEnd::critical_simplex) {
          EXPECT_EQ(p.terminal.dim, 2);
          EXPECT_TRUE(V.is_critical(p.terminal));
        }
        for (int64_t i = 0; i < p.pair_count(); ++i)
          EXPECT_EQ(V.pair_up(p.steps[2 * i]), p.steps[2 * i + 1]);
      }
    }
  }
}

TEST(Trace, SingleTriangleCycleIsAnAttractingOrbit) {
  auto [m, f] = single_triangle_rotation();
  auto V = process_outward_stars(m, f);
  auto census = exhaustive_vpath_audit(m, V);
  ASSERT_EQ(census.cycles.size(), 1u);
  EXPECT_EQ(census.cycles[0].index, 0);
  EXPECT_EQ(census.cycles[0].pairs.size(), 3u);
}

TEST(Skeleton, CriticalsCarryDimensionAsIndex) {
  auto m = grid_triangulation(10, 10, {0, 0}, 1.0);
  auto f = random_field(m, 4);
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  EXPECT_EQ(skel.criticals.size(), static_cast<size_t>(V.critical_total()));
  for (const auto& [c, index] : skel.criticals) {
    EXPECT_EQ(index, c.dim);
    EXPECT_TRUE(V.is_critical(c));
  }
  // four traces per interior saddle, endpoint soundness, weight attached
  size_t expected = 0;
  for (const auto& [c, index] : skel.criticals)
    if (index == 1) expected += 2 + (m.edge_on_boundary(c.id) ? 1 : 2);
  EXPECT_EQ(skel.separatrices.size(), expected);
  for (const VPath& p : skel.separatrices) {
    EXPECT_EQ(p.source.dim, 1);
    if (p.end == VPathEnd::critical_simplex) {
      EXPECT_TRUE(V.is_critical(p.terminal));
    }
    if (p.end == VPathEnd::orbit) {
      EXPECT_GE(p.orbit_id, 0);
    }
  }
}

TEST(Skeleton, OrbitsDeduplicatedAcrossSaddles) {
  auto m = grid_triangulation(11, 11, {-5, -5}, 1.0);
  auto f = rotation_field(m, {0.12, 0.03});
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  int orbit_refs = 0;
  for (const VPath& p : skel.separatrices)
    if (p.end == VPathEnd::orbit) ++orbit_refs;
  EXPECT_GE(orbit_refs, static_cast<int>(skel.orbits.size()));
  // index-0 orbit cycles form a closed vertex loop in the mesh
  for (const Orbit& o : skel.orbits) {
    if (o.index != 0) continue;
    const size_t n = o.cycle.size();
    for (size_t i = 0; i < n; ++i) {
      const SimplexRef edge = o.cycle[i][1];
      const SimplexRef next_tail = o.cycle[(i + 1) % n][0];
      EXPECT_EQ(m.other_edge_vertex(edge.id, o.cycle[i][0].id), next_tail.id);
    }
  }
}

TEST(Skeleton, FullySimplifiedDiskHasNoSeparatrices) {
  // constant field on a grid: one critical vertex, nothing else
  auto m = grid_triangulation(12, 12, {0, 0}, 1.0);
  auto f = constant_field(m, {1, 0.0625});
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  if (V.critical_total() == 1) {
    EXPECT_TRUE(skel.separatrices.empty());
    EXPECT_TRUE(skel.orbits.empty());
  }
  auto census = exhaustive_vpath_audit(m, V);
  EXPECT_TRUE(census.cycles.empty());
}

TEST(Skeleton, CosineCarriesOrbitsNearRotatingFeatures) {
  auto m = grid_triangulation(240, 240, {-119.5, -119.5}, 1.0);
  auto f = gen_cosine(m);
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  EXPECT_GT(skel.orbits.size(), 0u);
  for (const Orbit& o : skel.orbits) {
    EXPECT_EQ(o.attracting(), o.index == 0);
  }
}

TEST(Chains, ConstantFieldHasNoChains) {
  auto m = grid_triangulation(16, 16, {0, 0}, 1.0);
  auto f = constant_field(m, {1, 0.0625});
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  auto stats = count_chains(skel, m, 1.5);
  EXPECT_LE(stats.longest, 1);
}

TEST(Chains, UnderResolvedRotationProducesChains) {
  // the direction advances 150 degrees per cell row: far too sharp for the
  // mesh, so alternating criticals chain along the turns
  auto m = grid_triangulation(16, 16, {0, 0}, 1.0);
  VectorField f;
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    const double a = p.y * 150.0 * M_PI / 180.0;
    f.vectors.push_back({std::cos(a), std::sin(a)});
  }
  auto V = process_outward_stars(m, f);
  auto skel = extract_skeleton(V, m, f);
  auto stats = count_chains(skel, m, 1.5);
  EXPECT_GE(stats.longest, 3);
  auto again = count_chains(skel, m, 1.5);
  EXPECT_EQ(stats.sizes, again.sizes);
}

TEST(Trace, TerminationBoundOnRandomFields) {
  auto m = grid_triangulation(14, 14, {0, 0}, 1.0);
  for (uint64_t seed = 100; seed < 140; ++seed) {
    auto f = random_field(m, seed);
    auto V = process_outward_stars(m, f);
    const int64_t pair_bound = static_cast<int64_t>(V.pairs().size()) + 1;
    for (SimplexRef s : saddles_of(V)) {
      for (const VPath& p : trace_descending(V, m, s)) EXPECT_LE(p.pair_count(), pair_bound);
      for (const VPath& p : trace_ascending(V, m, s)) EXPECT_LE(p.pair_count(), pair_bound);
    }
  }
}
