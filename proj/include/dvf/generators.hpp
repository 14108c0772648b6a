#ifndef DVF_GENERATORS_HPP
#define DVF_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "field.hpp"
#include "mesh.hpp"
#include "pl.hpp"
#include "rng.hpp"

namespace dvf {

/// The Changes dataset: two fields that are 90-degree rotations of each
/// other, blended by a position-dependent rotation over x in [100,200).
/// Intervals are half-open, so x = 100 takes the rotating branch.
inline VectorField gen_changes(const TriMesh2& m) {
  VectorField f;
  f.vectors.reserve(m.num_vertices());
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    const double a = 0.07 * (p.y + 15.0);
    const double b = 0.035 * (p.x - 17.5);
    const Vec2 base{std::sin(a), std::cos(b)};
    if (p.x < 100.0) {
      f.vectors.push_back(base);
    } else if (p.x < 200.0) {
      const double th = (p.x - 100.0) / 100.0 * (M_PI / 2.0);
      const double c = std::cos(th), s = std::sin(th);
      f.vectors.push_back({c * base.x - s * base.y, s * base.x + c * base.y});
    } else {
      f.vectors.push_back({-base.y, base.x});
    }
  }
  return f;
}

/// The Cosine dataset of Dey et al.: 50 (cos(0.06 r), cos(0.001 x y)).
inline VectorField gen_cosine(const TriMesh2& m) {
  VectorField f;
  f.vectors.reserve(m.num_vertices());
  for (int32_t v = 0; v < m.num_vertices(); ++v) {
    const Vec2 p = m.position(v);
    f.vectors.push_back({50.0 * std::cos(0.06 * std::sqrt(p.x * p.x + p.y * p.y)),
                         50.0 * std::cos(0.001 * p.x * p.y)});
  }
  return f;
}

/// Perturbs each component independently by a uniform sample in
/// [-amplitude, amplitude]. Deterministic for a fixed seed.
inline VectorField add_uniform_noise(const VectorField& f, double amplitude, uint64_t seed) {
  if (amplitude < 0.0) throw Error("add_uniform_noise: negative amplitude");
  Pcg32 rng(seed);
  VectorField out;
  out.vectors.reserve(f.vectors.size());
  for (const Vec2& v : f.vectors) {
    const double du = rng.uniform(-amplitude, amplitude);
    const double dv = rng.uniform(-amplitude, amplitude);
    out.vectors.push_back({v.x + du, v.y + dv});
  }
  return out;
}

struct SmoothedField {
  VectorField field;
  int32_t pl_cp_count = 0;
  int32_t blur_passes = 0;
  bool in_range = false;  // false: target window was skipped (best effort)
};

namespace detail {

// exp(-k^2/2) for k = -3..3 (sigma = 1 grid unit, truncated at 3 sigma),
// renormalized over in-domain taps at the boundary.
inline void gaussian_blur_grid(int32_t nx, int32_t ny, std::vector<Vec2>& v,
                               std::vector<Vec2>& tmp) {
  static const double w[7] = {0.011108996538242306, 0.1353352832366127, 0.6065306597126334,
                              1.0, 0.6065306597126334, 0.1353352832366127, 0.011108996538242306};
  tmp.resize(v.size());
  for (int32_t j = 0; j < ny; ++j) {
    for (int32_t i = 0; i < nx; ++i) {
      double su = 0, sv = 0, sw = 0;
      for (int k = -3; k <= 3; ++k) {
        const int32_t ii = i + k;
        if (ii < 0 || ii >= nx) continue;
        const Vec2& s = v[j * nx + ii];
        su += w[k + 3] * s.x;
        sv += w[k + 3] * s.y;
        sw += w[k + 3];
      }
      tmp[j * nx + i] = {su / sw, sv / sw};
    }
  }
  for (int32_t j = 0; j < ny; ++j) {
    for (int32_t i = 0; i < nx; ++i) {
      double su = 0, sv = 0, sw = 0;
      for (int k = -3; k <= 3; ++k) {
        const int32_t jj = j + k;
        if (jj < 0 || jj >= ny) continue;
        const Vec2& s = tmp[jj * nx + i];
        su += w[k + 3] * s.x;
        sv += w[k + 3] * s.y;
        sw += w[k + 3];
      }
      v[j * nx + i] = {su / sw, sv / sw};
    }
  }
}

}  // namespace detail

/// Random field for the proximity experiment: i.i.d. uniform [-1,1]^2 noise
/// on a unit-spaced nx x ny grid, repeatedly Gaussian-blurred until the PL
/// critical point count falls inside [target - tol, target + tol]. If a blur
/// pass jumps past the window the field from before that pass is returned
/// with in_range = false.
inline SmoothedField gen_random_smoothed(int32_t nx, int32_t ny, int32_t target, int32_t tol,
                                         uint64_t seed) {
  if (nx < 8 || ny < 8) throw InvalidDimensions("gen_random_smoothed: grid too small");
  const TriMesh2 mesh = grid_triangulation(nx, ny, {0, 0}, 1.0);

  SmoothedField out;
  Pcg32 rng(seed);
  out.field.vectors.resize(static_cast<size_t>(nx) * ny);
  for (auto& v : out.field.vectors) {
    v.x = rng.uniform(-1.0, 1.0);
    v.y = rng.uniform(-1.0, 1.0);
  }

  const int32_t lo = target - tol, hi = target + tol;
  out.pl_cp_count = static_cast<int32_t>(pl_critical_points(mesh, out.field).size());
  if (out.pl_cp_count >= lo && out.pl_cp_count <= hi) {
    out.in_range = true;
    return out;
  }
  if (out.pl_cp_count < lo) return out;  // already undershooting: best effort

  std::vector<Vec2> tmp;
  constexpr int32_t kMaxPasses = 10000;
  while (out.blur_passes < kMaxPasses) {
    VectorField prev = out.field;
    const int32_t prev_count = out.pl_cp_count;
    detail::gaussian_blur_grid(nx, ny, out.field.vectors, tmp);
    ++out.blur_passes;
    out.pl_cp_count = static_cast<int32_t>(pl_critical_points(mesh, out.field).size());
    if (out.pl_cp_count >= lo && out.pl_cp_count <= hi) {
      out.in_range = true;
      return out;
    }
    if (out.pl_cp_count < lo) {  // skipped the window; keep the last field above it
      out.field = std::move(prev);
      out.pl_cp_count = prev_count;
      --out.blur_passes;
      return out;
    }
  }
  return out;
}

}  // namespace dvf

#endif
