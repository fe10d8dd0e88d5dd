#pragma once

// Shared fixtures for the test binaries: seeded random liftings and small
// hand-made inputs.

#include "tropix/complex.hpp"

#include <algorithm>
#include <random>
#include <tuple>
#include <set>
#include <vector>

namespace tropix::testing_support {

inline LiftingFunction make_lifting(std::vector<LatticePoint> pts, std::vector<long long> vals) {
  std::vector<Rational> r;
  for (auto x : vals) r.emplace_back(x);
  return LiftingFunction(std::move(pts), std::move(r));
}

/// Random full-dimensional point set in [0, box]^dim with up to `count` points
/// and small rational values.
inline LiftingFunction random_lifting(std::mt19937& rng, int dim, int box, int count) {
  std::uniform_int_distribution<int> coord(0, box), value(-8, 8), den(1, 3);
  for (;;) {
    std::set<LatticePoint> pts;
    for (int i = 0; i < count; ++i) {
      LatticePoint p;
      for (int j = 0; j < dim; ++j) p.coords.emplace_back(coord(rng));
      pts.insert(p);
    }
    std::vector<LatticePoint> a(pts.begin(), pts.end());
    if (affine_rank(a) != dim) continue;
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < a.size(); ++i) vals.emplace_back(value(rng), den(rng));
    return LiftingFunction(a, vals);
  }
}

/// All lattice points of a random lattice polygon in [0, box]^2, lifted by a
/// perturbed paraboloid; retried until the lower hull is unimodular.
inline LiftingFunction random_unimodular_polygon(std::mt19937& rng, int box) {
  std::uniform_int_distribution<int> coord(0, box), noise(0, 9);
  for (;;) {
    std::vector<LatticePoint> seeds;
    for (int i = 0; i < 5; ++i) seeds.push_back(LatticePoint{coord(rng), coord(rng)});
    if (affine_rank(seeds) != 2) continue;
    auto pts = lattice_points(LatticePolytope(seeds));
    std::vector<Rational> vals;
    for (const auto& p : pts) vals.emplace_back(100 * (p[0] * p[0] + p[1] * p[1]) + noise(rng));
    LiftingFunction v(pts, vals);
    if (is_unimodular(lower_hull_subdivision(v)).unimodular) return v;
  }
}

inline LiftingFunction sigma_lifting(int n) {
  std::vector<LatticePoint> pts;
  pts.emplace_back(IntVector(static_cast<std::size_t>(n) + 1, Integer(0)));
  for (int i = 0; i <= n; ++i) {
    IntVector e(static_cast<std::size_t>(n) + 1, Integer(0));
    e[static_cast<std::size_t>(i)] = 1;
    pts.emplace_back(e);
  }
  return LiftingFunction(pts, std::vector<Rational>(pts.size(), Rational(0)));
}

}  // namespace tropix::testing_support

namespace tropix::testing_support {

/// Geometric fingerprint of one cell: dimension, vertex positions, recession
/// rays, weight and dual vertices shifted by -shift.
struct CellSignature {
  int dim;
  std::vector<RatVector> vertices;
  std::vector<IntVector> recession;
  Integer weight;
  std::vector<LatticePoint> dual;

  friend bool operator<(const CellSignature& a, const CellSignature& b) {
    return std::tie(a.dim, a.vertices, a.recession, a.weight, a.dual) <
           std::tie(b.dim, b.vertices, b.recession, b.weight, b.dual);
  }
  friend bool operator==(const CellSignature& a, const CellSignature& b) { return !(a < b) && !(b < a); }
};

inline std::set<CellSignature> complex_signature(const TropicalComplex& cx, const LatticePoint& shift) {
  std::set<CellSignature> out;
  for (const auto& c : cx.cells) {
    CellSignature s{c.dim, {}, c.recession, c.weight.value_or(Integer(0)), {}};
    for (auto v : c.vertices) s.vertices.push_back(cx.cells[v].point);
    for (auto i : c.dual_vertices) s.dual.push_back(cx.source->points[i] - shift);
    std::sort(s.vertices.begin(), s.vertices.end());
    std::sort(s.recession.begin(), s.recession.end());
    std::sort(s.dual.begin(), s.dual.end());
    out.insert(std::move(s));
  }
  return out;
}

}  // namespace tropix::testing_support
