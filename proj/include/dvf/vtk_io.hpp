#ifndef DVF_VTK_IO_HPP
#define DVF_VTK_IO_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "assignment.hpp"
#include "field.hpp"
#include "mesh.hpp"
#include "skeleton.hpp"

namespace dvf {

struct ParseError : Error { using Error::Error; };
struct NonTriangleCells : Error { using Error::Error; };
struct MissingVectors : Error { using Error::Error; };

namespace detail {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& tok) { return static_cast<bool>(in_ >> tok); }

  std::string expect_token(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("unexpected end of file, expected ") + what);
    return tok;
  }

  int64_t expect_int(const char* what) {
    const std::string tok = expect_token(what);
    try {
      size_t pos = 0;
      const int64_t v = std::stoll(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("expected integer for ") + what + ", got '" + tok + "'");
    }
  }

  double expect_double(const char* what) {
    const std::string tok = expect_token(what);
    try {
      size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("expected number for ") + what + ", got '" + tok + "'");
    }
  }

  void skip_line() {
    std::string line;
    std::getline(in_, line);
  }

 private:
  std::istream& in_;
};

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

}  // namespace detail

enum class VtkDataset { unstructured_grid, polydata };

/// Legacy ASCII VTK writer for the mesh, with the field attached as 3-component
/// point-data VECTORS (z = 0). Floats carry 17 significant digits so a
/// write/read round trip is bit-exact.
inline void write_vtk(std::ostream& out, const TriMesh2& m, const VectorField* field,
                      VtkDataset kind = VtkDataset::unstructured_grid,
                      const std::string& title = "dvf mesh") {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  out << (kind == VtkDataset::unstructured_grid ? "DATASET UNSTRUCTURED_GRID\n"
                                                : "DATASET POLYDATA\n");
  out << "POINTS " << m.num_vertices() << " double\n";
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    out << detail::fmt17(p.x) << ' ' << detail::fmt17(p.y) << " 0\n";
  }
  const int32_t nt = m.num_triangles();
  if (kind == VtkDataset::unstructured_grid) {
    out << "CELLS " << nt << ' ' << 4 * static_cast<int64_t>(nt) << '\n';
    for (int32_t t = 0; t < nt; ++t) {
      const auto& tv = m.triangle_vertices(t);
      out << "3 " << tv[0] << ' ' << tv[1] << ' ' << tv[2] << '\n';
    }
    out << "CELL_TYPES " << nt << '\n';
    for (int32_t t = 0; t < nt; ++t) out << "5\n";
  } else {
    out << "POLYGONS " << nt << ' ' << 4 * static_cast<int64_t>(nt) << '\n';
    for (int32_t t = 0; t < nt; ++t) {
      const auto& tv = m.triangle_vertices(t);
      out << "3 " << tv[0] << ' ' << tv[1] << ' ' << tv[2] << '\n';
    }
  }
  if (field) {
    out << "POINT_DATA " << m.num_vertices() << '\n';
    out << "VECTORS velocity double\n";
    for (const Vec2& v : field->vectors)
      out << detail::fmt17(v.x) << ' ' << detail::fmt17(v.y) << " 0\n";
  }
}

inline void write_vtk_file(const std::string& path, const TriMesh2& m, const VectorField* field,
                           VtkDataset kind = VtkDataset::unstructured_grid,
                           const std::string& title = "dvf mesh") {
  auto out = detail::open_out(path);
  write_vtk(out, m, field, kind, title);
}

struct VtkContents {
  TriMesh2 mesh;
  std::optional<VectorField> field;
};

/// Legacy ASCII VTK reader: UNSTRUCTURED_GRID with VTK_TRIANGLE cells or
/// POLYDATA with triangle polygons; reads the first point-data VECTORS array
/// (z ignored) and skips SCALARS/FIELD sections it does not know.
inline VtkContents read_vtk(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0)
    throw ParseError("not a legacy VTK file (missing '# vtk DataFile' header)");
  std::getline(in, line);  // title
  if (!std::getline(in, line) || line.rfind("ASCII", 0) != 0)
    throw ParseError("only ASCII VTK files are supported");

  detail::TokenReader tr(in);
  std::string tok = tr.expect_token("DATASET");
  if (tok != "DATASET") throw ParseError("expected DATASET, got '" + tok + "'");
  const std::string kind = tr.expect_token("dataset type");
  if (kind != "UNSTRUCTURED_GRID" && kind != "POLYDATA")
    throw ParseError("unsupported dataset type " + kind);

  std::vector<Vec2> coords;
  std::vector<std::array<int32_t, 3>> tris;
  std::optional<VectorField> field;
  int64_t num_points = -1;

  while (tr.next(tok)) {
    if (tok == "POINTS") {
      num_points = tr.expect_int("point count");
      tr.expect_token("point scalar type");
      coords.reserve(num_points);
      for (int64_t i = 0; i < num_points; ++i) {
        const double x = tr.expect_double("x");
        const double y = tr.expect_double("y");
        tr.expect_double("z");
        coords.push_back({x, y});
      }
    } else if (tok == "CELLS" || tok == "POLYGONS") {
      const int64_t n = tr.expect_int("cell count");
      tr.expect_int("cell list size");
      tris.reserve(n);
      for (int64_t i = 0; i < n; ++i) {
        const int64_t k = tr.expect_int("cell arity");
        if (k != 3) throw NonTriangleCells("cell with " + std::to_string(k) + " vertices");
        const auto a = static_cast<int32_t>(tr.expect_int("cell vertex"));
        const auto b = static_cast<int32_t>(tr.expect_int("cell vertex"));
        const auto c = static_cast<int32_t>(tr.expect_int("cell vertex"));
        tris.push_back({a, b, c});
      }
    } else if (tok == "CELL_TYPES") {
      const int64_t n = tr.expect_int("cell type count");
      for (int64_t i = 0; i < n; ++i)
        if (tr.expect_int("cell type") != 5)
          throw NonTriangleCells("CELL_TYPES entry other than VTK_TRIANGLE");
    } else if (tok == "POINT_DATA") {
      const int64_t n = tr.expect_int("point data count");
      if (n != num_points) throw ParseError("POINT_DATA count mismatch");
    } else if (tok == "CELL_DATA") {
      tr.expect_int("cell data count");
    } else if (tok == "VECTORS") {
      tr.expect_token("vectors name");
      tr.expect_token("vectors type");
      VectorField f;
      f.vectors.reserve(num_points);
      for (int64_t i = 0; i < num_points; ++i) {
        const double u = tr.expect_double("u");
        const double v = tr.expect_double("v");
        tr.expect_double("w");
        f.vectors.push_back({u, v});
      }
      if (!field) field = std::move(f);
    } else if (tok == "SCALARS") {
      tr.expect_token("scalars name");
      tr.expect_token("scalars type");
      tr.skip_line();
      std::string maybe = tr.expect_token("LOOKUP_TABLE");
      if (maybe != "LOOKUP_TABLE") throw ParseError("expected LOOKUP_TABLE after SCALARS");
      tr.expect_token("lookup table name");
      for (int64_t i = 0; i < num_points; ++i) tr.expect_double("scalar");
    } else if (tok == "METADATA") {
      tr.skip_line();
    } else {
      throw ParseError("unrecognized VTK section '" + tok + "'");
    }
  }

  if (num_points < 0) throw ParseError("VTK file has no POINTS section");
  VtkContents out;
  out.mesh = TriMesh2::from_arrays(std::move(coords), std::move(tris));
  out.field = std::move(field);
  return out;
}

inline VtkContents read_vtk_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_vtk(in);
}

/// Internal plain-text mesh format: header `ntv <V> <T>`, V coordinate lines,
/// then T index triples.
inline void write_ntv(std::ostream& out, const TriMesh2& m) {
  out << "ntv " << m.num_vertices() << ' ' << m.num_triangles() << '\n';
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    out << detail::fmt17(p.x) << ' ' << detail::fmt17(p.y) << '\n';
  }
  for (int32_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tv = m.triangle_vertices(t);
    out << tv[0] << ' ' << tv[1] << ' ' << tv[2] << '\n';
  }
}

inline TriMesh2 read_ntv(std::istream& in) {
  detail::TokenReader tr(in);
  if (tr.expect_token("ntv header") != "ntv") throw ParseError("missing ntv header");
  const int64_t nv = tr.expect_int("vertex count");
  const int64_t nt = tr.expect_int("triangle count");
  std::vector<Vec2> coords;
  coords.reserve(nv);
  for (int64_t i = 0; i < nv; ++i) {
    const double x = tr.expect_double("x");
    const double y = tr.expect_double("y");
    coords.push_back({x, y});
  }
  std::vector<std::array<int32_t, 3>> tris;
  tris.reserve(nt);
  for (int64_t i = 0; i < nt; ++i) {
    const auto a = static_cast<int32_t>(tr.expect_int("vertex id"));
    const auto b = static_cast<int32_t>(tr.expect_int("vertex id"));
    const auto c = static_cast<int32_t>(tr.expect_int("vertex id"));
    tris.push_back({a, b, c});
  }
  return TriMesh2::from_arrays(std::move(coords), std::move(tris));
}

inline TriMesh2 read_ntv_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_ntv(in);
}

/// Field CSV: header `vid,u,v`, one row per vertex.
inline void write_field_csv(std::ostream& out, const VectorField& f) {
  out << "vid,u,v\n";
  for (size_t i = 0; i < f.vectors.size(); ++i)
    out << i << ',' << detail::fmt17(f.vectors[i].x) << ',' << detail::fmt17(f.vectors[i].y)
        << '\n';
}

inline VectorField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("vid,u,v", 0) != 0)
    throw ParseError("field csv must start with 'vid,u,v'");
  VectorField f;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    const auto vid = static_cast<size_t>(std::stoll(cell));
    std::getline(row, cell, ',');
    const double u = std::stod(cell);
    std::getline(row, cell, ',');
    const double v = std::stod(cell);
    if (vid >= f.vectors.size()) f.vectors.resize(vid + 1);
    f.vectors[vid] = {u, v};
  }
  return f;
}

inline VectorField read_field_csv_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_field_csv(in);
}

/// Pairing dump: `dim,id,partner_dim,partner_id,role`; critical simplices
/// carry partner -1,-1.
inline void write_pairing_csv(std::ostream& out, const DiscretePairing& V) {
  out << "dim,id,partner_dim,partner_id,role\n";
  auto row = [&out](SimplexRef s, SimplexRef partner, const char* role) {
    out << int(s.dim) << ',' << s.id << ',' << int(partner.dim) << ',' << partner.id << ','
        << role << '\n';
  };
  auto emit = [&](SimplexRef s) {
    const SimplexRef up = V.pair_up(s), down = V.pair_down(s);
    if (up.valid())
      row(s, up, "tail");
    else if (down.valid())
      row(s, down, "head");
    else
      row(s, {}, "critical");
  };
  for (int32_t v = 0; v < V.num_vertices(); ++v) emit(vertex_ref(v));
  for (int32_t e = 0; e < V.num_edges(); ++e) emit(edge_ref(e));
  for (int32_t t = 0; t < V.num_triangles(); ++t) emit(triangle_ref(t));
}

/// Per-edge flow dump: `eid,v0,v1,f_value,winner`.
inline void write_edge_flow_csv(std::ostream& out, const TriMesh2& m, const VectorField& f) {
  out << "eid,v0,v1,f_value,winner\n";
  for (int32_t e = 0; e < m.num_edges(); ++e) {
    const auto& ev = m.edge_vertices(e);
    const double fl = edge_flow(m, f, ev[0], ev[1]);
    out << e << ',' << ev[0] << ',' << ev[1] << ',' << detail::fmt17(fl) << ','
        << edge_direction(m, f, e) << '\n';
  }
}

/// Skeleton export as VTK polydata. Criticals are VERTS with point data
/// cp_index/simplex_dim; separatrices and orbits are LINES through the step
/// barycenters with cell data sep_index (0 = index-0/forward, 1 = index-1/
/// backward), weight, and orbit_index (-1 for ordinary separatrices; orbits
/// are emitted as closed polylines).
inline void write_skeleton_vtk(std::ostream& out, const Skeleton& s, const TriMesh2& m) {
  std::vector<Vec2> points;
  std::vector<int32_t> cp_index, simplex_dim;
  std::vector<std::vector<int32_t>> verts, lines;
  std::vector<int32_t> cell_sep_index, cell_orbit_index;
  std::vector<double> cell_weight;

  auto add_point = [&](Vec2 p, int32_t cpi, int32_t dim) {
    points.push_back(p);
    cp_index.push_back(cpi);
    simplex_dim.push_back(dim);
    return static_cast<int32_t>(points.size()) - 1;
  };

  for (const auto& [c, index] : s.criticals) {
    const int32_t pid = add_point(barycenter(m, c), index, c.dim);
    verts.push_back({pid});
  }

  auto polyline_for = [&](const VPath& p) {
    std::vector<int32_t> pl;
    if (p.source.valid()) pl.push_back(add_point(barycenter(m, p.source), -1, -1));
    for (SimplexRef step : p.steps) pl.push_back(add_point(barycenter(m, step), -1, -1));
    if (p.end == VPathEnd::critical_simplex)
      pl.push_back(add_point(barycenter(m, p.terminal), -1, -1));
    return pl;
  };

  for (const VPath& p : s.separatrices) {
    auto pl = polyline_for(p);
    if (pl.size() < 2) continue;
    lines.push_back(std::move(pl));
    cell_sep_index.push_back(p.index);
    cell_weight.push_back(p.weight);
    cell_orbit_index.push_back(-1);
  }
  for (const Orbit& o : s.orbits) {
    std::vector<int32_t> pl;
    for (const auto& pr : o.cycle) {
      pl.push_back(add_point(barycenter(m, pr[0]), -1, -1));
      pl.push_back(add_point(barycenter(m, pr[1]), -1, -1));
    }
    if (pl.empty()) continue;
    pl.push_back(pl.front());  // closed
    lines.push_back(std::move(pl));
    cell_sep_index.push_back(-1);
    cell_weight.push_back(0.0);
    cell_orbit_index.push_back(o.index);
  }

  out << "# vtk DataFile Version 3.0\ndvf skeleton\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << points.size() << " double\n";
  for (const Vec2& p : points)
    out << detail::fmt17(p.x) << ' ' << detail::fmt17(p.y) << " 0\n";

  int64_t vsz = 0;
  for (const auto& c : verts) vsz += 1 + c.size();
  out << "VERTICES " << verts.size() << ' ' << vsz << '\n';
  for (const auto& c : verts) {
    out << c.size();
    for (int32_t p : c) out << ' ' << p;
    out << '\n';
  }
  int64_t lsz = 0;
  for (const auto& c : lines) lsz += 1 + c.size();
  out << "LINES " << lines.size() << ' ' << lsz << '\n';
  for (const auto& c : lines) {
    out << c.size();
    for (int32_t p : c) out << ' ' << p;
    out << '\n';
  }

  out << "POINT_DATA " << points.size() << '\n';
  out << "SCALARS cp_index int 1\nLOOKUP_TABLE default\n";
  for (int32_t v : cp_index) out << v << '\n';
  out << "SCALARS simplex_dim int 1\nLOOKUP_TABLE default\n";
  for (int32_t v : simplex_dim) out << v << '\n';

  out << "CELL_DATA " << verts.size() + lines.size() << '\n';
  out << "SCALARS sep_index int 1\nLOOKUP_TABLE default\n";
  for (size_t i = 0; i < verts.size(); ++i) out << "-1\n";
  for (int32_t v : cell_sep_index) out << v << '\n';
  out << "SCALARS weight double 1\nLOOKUP_TABLE default\n";
  for (size_t i = 0; i < verts.size(); ++i) out << "0\n";
  for (double v : cell_weight) out << detail::fmt17(v) << '\n';
  out << "SCALARS orbit_index int 1\nLOOKUP_TABLE default\n";
  for (size_t i = 0; i < verts.size(); ++i) out << "-1\n";
  for (int32_t v : cell_orbit_index) out << v << '\n';
}

}  // namespace dvf

#endif
