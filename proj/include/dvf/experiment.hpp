#ifndef DVF_EXPERIMENT_HPP
#define DVF_EXPERIMENT_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "generators.hpp"
#include "pl.hpp"

namespace dvf {

struct ProximityFieldRow {
  uint64_t field_seed = 0;
  int64_t pl_cps = 0;
  int64_t discrete_cps = 0;
  int64_t match_l1 = 0, match_l2 = 0, match_l3 = 0, match_l4 = 0;
  bool target_reached = true;
};

struct ProximityReport {
  int32_t grid_size = 0;
  uint64_t master_seed = 0;
  std::vector<ProximityFieldRow> rows;
  int64_t total_pl = 0, total_discrete = 0;
  int64_t total_l1 = 0, total_l2 = 0, total_l3 = 0, total_l4 = 0;
  double rate_l1 = 0, rate_l2 = 0, rate_l3 = 0, rate_l4 = 0;
};

/// Random-field proximity experiment: `num_fields` seeded random smoothed
/// fields (target ~200 PL critical points each), discrete extraction, and
/// per-level type-compatible matching, aggregated into totals and rates.
inline ProximityReport run_proximity_experiment(int32_t num_fields, int32_t grid_size,
                                                uint64_t seed) {
  if (num_fields < 1) throw Error("run_proximity_experiment: need at least one field");
  ProximityReport rep;
  rep.grid_size = grid_size;
  rep.master_seed = seed;

  const TriMesh2 mesh = grid_triangulation(grid_size, grid_size, {0, 0}, 1.0);
  uint64_t state = seed;
  for (int32_t i = 0; i < num_fields; ++i) {
    const uint64_t field_seed = split_mix64(state);
    const SmoothedField sf = gen_random_smoothed(grid_size, grid_size, 200, 20, field_seed);
    const auto cps = pl_critical_points(mesh, sf.field);
    const DiscretePairing V = process_outward_stars(mesh, sf.field);
    const ProximityResult prox = proximity_match(cps, V, mesh);

    ProximityFieldRow row;
    row.field_seed = field_seed;
    row.pl_cps = prox.pl_total;
    row.discrete_cps = V.critical_total();
    row.match_l1 = prox.l1;
    row.match_l2 = prox.l2;
    row.match_l3 = prox.l3;
    row.match_l4 = prox.l4;
    row.target_reached = sf.in_range;
    rep.rows.push_back(row);

    rep.total_pl += row.pl_cps;
    rep.total_discrete += row.discrete_cps;
    rep.total_l1 += row.match_l1;
    rep.total_l2 += row.match_l2;
    rep.total_l3 += row.match_l3;
    rep.total_l4 += row.match_l4;
  }
  if (rep.total_pl > 0) {
    rep.rate_l1 = double(rep.total_l1) / double(rep.total_pl);
    rep.rate_l2 = double(rep.total_l2) / double(rep.total_pl);
    rep.rate_l3 = double(rep.total_l3) / double(rep.total_pl);
    rep.rate_l4 = double(rep.total_l4) / double(rep.total_pl);
  }
  return rep;
}

inline std::string proximity_report_csv(const ProximityReport& rep) {
  std::string out = "field_seed,pl_cps,discrete_cps,match_L1,match_L2,match_L3,match_L4\n";
  char buf[160];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof(buf), "%llu,%lld,%lld,%lld,%lld,%lld,%lld\n",
                  static_cast<unsigned long long>(r.field_seed),
                  static_cast<long long>(r.pl_cps), static_cast<long long>(r.discrete_cps),
                  static_cast<long long>(r.match_l1), static_cast<long long>(r.match_l2),
                  static_cast<long long>(r.match_l3), static_cast<long long>(r.match_l4));
    out += buf;
  }
  return out;
}

}  // namespace dvf

#endif
