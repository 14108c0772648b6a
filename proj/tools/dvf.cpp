// dvf: discrete vector field extraction, simplification, and experiments on
// 2D triangulated vector fields.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dvf/dvf.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int default_threads() {
  if (const char* env = std::getenv("DVF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct LoadedInput {
  dvf::TriMesh2 mesh;
  dvf::VectorField field;
};

LoadedInput load_input(const std::string& path) {
  auto contents = dvf::read_vtk_file(path);
  if (!contents.field) throw dvf::MissingVectors("no point-data VECTORS in " + path);
  if (contents.field->vectors.empty()) throw dvf::MissingVectors("empty VECTORS in " + path);
  dvf::validate_field(contents.mesh, *contents.field);
  return {std::move(contents.mesh), std::move(*contents.field)};
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw dvf::Error("cannot open for writing: " + path.string());
  out << text;
}

json critical_summary(const dvf::DiscretePairing& V) {
  const auto c = V.critical_counts();
  return json{{"index0", c[0]},
              {"index1", c[1]},
              {"index2", c[2]},
              {"total", c[0] + c[1] + c[2]}};
}

void export_pipeline(const fs::path& dir, const dvf::TriMesh2& mesh,
                     const dvf::VectorField& field, const dvf::DiscretePairing& V,
                     json& summary) {
  const auto t0 = Clock::now();
  const dvf::Skeleton skel = dvf::extract_skeleton(V, mesh, field);
  summary["wall_time_s"]["skeleton"] = seconds_since(t0);
  summary["criticals"] = critical_summary(V);
  summary["orbits"] = skel.orbits.size();
  summary["separatrices"] = skel.separatrices.size();
  summary["euler_characteristic"] = mesh.euler_characteristic();

  fs::create_directories(dir);
  {
    // criticals as a point cloud: one VERT per critical simplex
    dvf::Skeleton points_only;
    points_only.criticals = skel.criticals;
    std::ofstream out(dir / "criticals.vtk");
    dvf::write_skeleton_vtk(out, points_only, mesh);
  }
  {
    dvf::Skeleton lines_only = skel;
    lines_only.criticals.clear();
    std::ofstream out(dir / "separatrices.vtk");
    dvf::write_skeleton_vtk(out, lines_only, mesh);
  }
  {
    std::ofstream out(dir / "pairing.csv");
    dvf::write_pairing_csv(out, V);
  }
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

int run(int argc, char** argv) {
  CLI::App app{"discrete vector field topology for 2D triangulated flows"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "write an analytic or random dataset as VTK");
  std::string gen_name;
  std::string gen_out = "dataset.vtk";
  int32_t gen_nx = 0, gen_ny = 0;
  uint64_t gen_seed = 1;
  int32_t gen_target = 200, gen_tol = 20;
  double gen_noise = 0.0;
  uint64_t gen_noise_seed = 1;
  std::string gen_diagonal = "slash";
  gen->add_option("name", gen_name, "changes | cosine | random")->required();
  gen->add_option("-o,--output", gen_out, "output VTK path");
  gen->add_option("--nx", gen_nx, "grid points in x (dataset default when omitted)");
  gen->add_option("--ny", gen_ny, "grid points in y (defaults to nx)");
  gen->add_option("--seed", gen_seed, "random generator seed");
  gen->add_option("--target-cps", gen_target, "random: target PL critical point count");
  gen->add_option("--tol", gen_tol, "random: target window half-width");
  gen->add_option("--noise", gen_noise, "add uniform noise in [-a,a]^2 per component");
  gen->add_option("--noise-seed", gen_noise_seed, "noise seed");
  gen->add_option("--diagonal", gen_diagonal, "grid diagonal rule: slash | backslash");

  // ---- compute ----
  auto* cmp = app.add_subcommand("compute", "extract the discrete vector field and skeleton");
  std::string cmp_in, cmp_dir = ".", cmp_edge_flows;
  int cmp_threads = default_threads();
  cmp->add_option("input", cmp_in, "input VTK with triangles and vectors")->required();
  cmp->add_option("-o,--out-dir", cmp_dir, "output directory");
  cmp->add_option("--threads", cmp_threads, "threads for the assignment pass");
  cmp->add_option("--edge-flows", cmp_edge_flows, "also dump per-edge flow CSV to this path");

  // ---- simplify ----
  auto* smp = app.add_subcommand("simplify", "extract, then cancel critical pairs by weight");
  std::string smp_in, smp_dir = ".", smp_curve;
  int smp_threads = default_threads();
  int64_t smp_saddles = -1, smp_criticals = -1;
  double smp_max_cost = std::numeric_limits<double>::infinity();
  smp->add_option("input", smp_in, "input VTK with triangles and vectors")->required();
  smp->add_option("-o,--out-dir", smp_dir, "output directory");
  smp->add_option("--threads", smp_threads, "threads for the assignment pass");
  auto* opt_s = smp->add_option("--target-saddles", smp_saddles, "stop at this saddle count");
  auto* opt_c = smp->add_option("--target-criticals", smp_criticals,
                                "stop at this total critical count");
  opt_s->excludes(opt_c);
  opt_c->excludes(opt_s);
  smp->add_option("--max-cost", smp_max_cost, "stop when the next cancellation exceeds this");
  smp->add_option("--curve-out", smp_curve, "write the weight curve CSV here");

  // ---- skeleton ----
  auto* skl = app.add_subcommand("skeleton", "export the combined topological skeleton");
  std::string skl_in, skl_out = "skeleton.vtk";
  double skl_chains = 0.0;
  int skl_threads = default_threads();
  skl->add_option("input", skl_in, "input VTK with triangles and vectors")->required();
  skl->add_option("-o,--output", skl_out, "output polydata path");
  skl->add_option("--chains", skl_chains, "print chain statistics at this link distance");
  skl->add_option("--threads", skl_threads, "threads for the assignment pass");

  // ---- pl-cps ----
  auto* plc = app.add_subcommand("pl-cps", "extract piecewise-linear critical points");
  std::string plc_in, plc_out = "pl_cps.csv";
  plc->add_option("input", plc_in, "input VTK with triangles and vectors")->required();
  plc->add_option("-o,--output", plc_out, "output CSV path");

  // ---- proximity ----
  auto* prx = app.add_subcommand("proximity", "random-field PL/discrete proximity experiment");
  int32_t prx_fields = 20, prx_grid = 128;
  uint64_t prx_seed = 1;
  std::string prx_csv, prx_json;
  prx->add_option("--fields", prx_fields, "number of random fields");
  prx->add_option("--grid", prx_grid, "grid resolution");
  prx->add_option("--seed", prx_seed, "master seed");
  prx->add_option("--csv", prx_csv, "per-field CSV output path");
  prx->add_option("--json", prx_json, "aggregate JSON output path");

  // ---- bench ----
  auto* bch = app.add_subcommand("bench", "phase timings over growing grids");
  std::string bch_sizes = "64,128,256,512";
  std::string bch_out;
  int bch_threads = default_threads();
  bch->add_option("--sizes", bch_sizes, "comma-separated grid resolutions");
  bch->add_option("-o,--output", bch_out, "CSV output path (stdout when omitted)");
  bch->add_option("--threads", bch_threads, "threads for the assignment pass");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const dvf::Diagonal diag =
        gen_diagonal == "backslash" ? dvf::Diagonal::backslash : dvf::Diagonal::slash;
    if (gen_diagonal != "slash" && gen_diagonal != "backslash")
      throw dvf::Error("unknown diagonal rule: " + gen_diagonal);
    dvf::TriMesh2 mesh;
    dvf::VectorField field;
    if (gen_name == "changes") {
      const int32_t nx = gen_nx > 0 ? gen_nx : 301;
      const int32_t ny = gen_ny > 0 ? gen_ny : nx;
      const double spacing = 300.0 / (nx - 1);
      mesh = dvf::grid_triangulation(nx, ny, {0, 0}, spacing, diag);
      field = dvf::gen_changes(mesh);
    } else if (gen_name == "cosine") {
      // cell-centered unit sampling of [-120,120]^2
      const int32_t nx = gen_nx > 0 ? gen_nx : 240;
      const int32_t ny = gen_ny > 0 ? gen_ny : nx;
      const double spacing = 240.0 / nx;
      mesh = dvf::grid_triangulation(nx, ny, {-120.0 + spacing / 2, -120.0 + spacing / 2},
                                     spacing, diag);
      field = dvf::gen_cosine(mesh);
    } else if (gen_name == "random") {
      const int32_t nx = gen_nx > 0 ? gen_nx : 256;
      const int32_t ny = gen_ny > 0 ? gen_ny : nx;
      mesh = dvf::grid_triangulation(nx, ny, {0, 0}, 1.0, diag);
      auto sf = dvf::gen_random_smoothed(nx, ny, gen_target, gen_tol, gen_seed);
      if (!sf.in_range)
        std::cerr << "warning: PL critical point target window missed (count " << sf.pl_cp_count
                  << ")\n";
      field = std::move(sf.field);
    } else {
      std::cerr << "error: unknown generator '" << gen_name << "'\n";
      return 2;
    }
    if (gen_noise > 0.0) field = dvf::add_uniform_noise(field, gen_noise, gen_noise_seed);
    dvf::write_vtk_file(gen_out, mesh, &field, dvf::VtkDataset::unstructured_grid,
                        "dvf " + gen_name);
    std::cout << "wrote " << gen_out << " (" << mesh.num_vertices() << " vertices, "
              << mesh.num_triangles() << " triangles)\n";
    return 0;
  }

  if (cmp->parsed()) {
    json summary;
    summary["input"] = cmp_in;
    auto t0 = Clock::now();
    auto in = load_input(cmp_in);
    summary["wall_time_s"]["load"] = seconds_since(t0);
    summary["simplices"] = in.mesh.num_simplices();
    t0 = Clock::now();
    auto V = dvf::process_outward_stars(in.mesh, in.field, cmp_threads);
    summary["wall_time_s"]["assignment"] = seconds_since(t0);
    summary["threads"] = cmp_threads;
    if (!cmp_edge_flows.empty()) {
      std::ofstream out(cmp_edge_flows);
      dvf::write_edge_flow_csv(out, in.mesh, in.field);
    }
    export_pipeline(cmp_dir, in.mesh, in.field, V, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
  }

  if (smp->parsed()) {
    if (smp_saddles < 0 && smp_criticals < 0) {
      std::cerr << "error: simplify needs --target-saddles or --target-criticals\n";
      return 2;
    }
    json summary;
    summary["input"] = smp_in;
    auto t0 = Clock::now();
    auto in = load_input(smp_in);
    summary["wall_time_s"]["load"] = seconds_since(t0);
    t0 = Clock::now();
    auto V = dvf::process_outward_stars(in.mesh, in.field, smp_threads);
    summary["wall_time_s"]["assignment"] = seconds_since(t0);
    summary["criticals_before"] = critical_summary(V);

    const int64_t target_saddles =
        smp_saddles >= 0 ? smp_saddles
                         : dvf::saddle_target_for_criticals(in.mesh, smp_criticals);
    dvf::SimplifyOptions opts;
    opts.max_cost = smp_max_cost;
    t0 = Clock::now();
    auto result = dvf::simplify_to(V, in.mesh, in.field, target_saddles, opts);
    summary["wall_time_s"]["simplify"] = seconds_since(t0);
    summary["target_saddles"] = target_saddles;
    summary["cancellations"] = result.cancellations;
    summary["reached_target"] = result.reached_target;
    summary["stopped_by_cost"] = result.stopped_by_cost;
    if (!smp_curve.empty()) write_text_file(smp_curve, dvf::weight_curve_csv(result.curve));
    export_pipeline(smp_dir, in.mesh, in.field, V, summary);
    std::cout << summary.dump(2) << '\n';
    return result.reached_target || result.stopped_by_cost ? 0 : 3;
  }

  if (skl->parsed()) {
    auto in = load_input(skl_in);
    auto V = dvf::process_outward_stars(in.mesh, in.field, skl_threads);
    auto skeleton = dvf::extract_skeleton(V, in.mesh, in.field);
    std::ofstream out(skl_out);
    if (!out) throw dvf::Error("cannot open for writing: " + skl_out);
    dvf::write_skeleton_vtk(out, skeleton, in.mesh);
    std::cout << "wrote " << skl_out << " (" << skeleton.criticals.size() << " criticals, "
              << skeleton.separatrices.size() << " separatrices, " << skeleton.orbits.size()
              << " orbits)\n";
    if (skl_chains > 0.0) {
      auto stats = dvf::count_chains(skeleton, in.mesh, skl_chains);
      std::cout << "chains at distance " << skl_chains << ": longest " << stats.longest
                << ", groups";
      for (int32_t s : stats.sizes) std::cout << ' ' << s;
      std::cout << '\n';
    }
    return 0;
  }

  if (plc->parsed()) {
    auto in = load_input(plc_in);
    auto cps = dvf::pl_critical_points(in.mesh, in.field);
    std::ofstream out(plc_out);
    if (!out) throw dvf::Error("cannot open for writing: " + plc_out);
    out << "x,y,triangle,kind,jacobian_det,jacobian_trace,min_abs_eig,eigvec_angle_deg,"
           "degenerate\n";
    char buf[256];
    for (const auto& cp : cps) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%s,%.17g,%.17g,%.17g,%.17g,%d\n",
                    cp.position.x, cp.position.y, cp.triangle, dvf::to_string(cp.kind),
                    cp.jacobian_det, cp.jacobian_trace, cp.min_abs_eigenvalue,
                    cp.eigenvector_angle_deg, cp.degenerate ? 1 : 0);
      out << buf;
    }
    std::cout << "wrote " << plc_out << " (" << cps.size() << " critical points)\n";
    return 0;
  }

  if (prx->parsed()) {
    auto rep = dvf::run_proximity_experiment(prx_fields, prx_grid, prx_seed);
    if (!prx_csv.empty()) write_text_file(prx_csv, dvf::proximity_report_csv(rep));
    json j;
    j["fields"] = prx_fields;
    j["grid"] = rep.grid_size;
    j["seed"] = rep.master_seed;
    j["totals"] = {{"pl_cps", rep.total_pl},   {"discrete_cps", rep.total_discrete},
                   {"match_L1", rep.total_l1}, {"match_L2", rep.total_l2},
                   {"match_L3", rep.total_l3}, {"match_L4", rep.total_l4}};
    j["rates"] = {{"L1", rep.rate_l1}, {"L2", rep.rate_l2}, {"L3", rep.rate_l3},
                  {"L4", rep.rate_l4}};
    if (!prx_json.empty()) write_text_file(prx_json, j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  if (bch->parsed()) {
    std::vector<int32_t> sizes;
    std::stringstream ss(bch_sizes);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
    std::string csv = "grid,simplices,load_s,outward_s,assign_s,skeleton_s,simplify_s\n";
    for (int32_t n : sizes) {
      const int reps = n <= 64 ? 7 : n <= 128 ? 5 : n <= 256 ? 3 : 1;
      auto t0 = Clock::now();
      const double spacing = 240.0 / (n - 1);
      auto mesh = dvf::grid_triangulation(n, n, {-120, -120}, spacing);
      auto field = dvf::gen_cosine(mesh);
      const double load_s = seconds_since(t0);

      double outward_s = 1e30, assign_s = 1e30;
      int64_t sink = 0;
      for (int r = 0; r < reps; ++r) {
        t0 = Clock::now();
        for (int32_t x = 0; x < mesh.num_vertices(); ++x)
          sink += static_cast<int64_t>(dvf::outward_star(mesh, field, x).members.size());
        outward_s = std::min(outward_s, seconds_since(t0));
      }
      dvf::DiscretePairing V;
      for (int r = 0; r < reps; ++r) {
        t0 = Clock::now();
        V = dvf::process_outward_stars(mesh, field, bch_threads);
        assign_s = std::min(assign_s, seconds_since(t0));
      }
      t0 = Clock::now();
      auto skel = dvf::extract_skeleton(V, mesh, field);
      const double skeleton_s = seconds_since(t0);
      t0 = Clock::now();
      auto simplified = V;
      dvf::simplify_to(simplified, mesh, field, 0);
      const double simplify_s = seconds_since(t0);

      char row[256];
      std::snprintf(row, sizeof(row), "%d,%lld,%.6f,%.6f,%.6f,%.6f,%.6f\n", n,
                    static_cast<long long>(mesh.num_simplices()), load_s, outward_s, assign_s,
                    skeleton_s, simplify_s);
      csv += row;
      (void)sink;
    }
    if (bch_out.empty())
      std::cout << csv;
    else
      write_text_file(bch_out, csv);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dvf::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const dvf::NonTriangleCells& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const dvf::MissingVectors& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const dvf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
