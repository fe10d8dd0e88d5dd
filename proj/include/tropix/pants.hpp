#pragma once

// Cutting a maximal complex into primitive pieces, normalizing each piece to
// the primitive complex, homology of the compactified base and the numeric
// invariants of hypersurfaces in projective space.

#include "tropix/complex.hpp"
#include "tropix/homology.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tropix {

namespace detail {

inline void require_maximal(const TropicalComplex& cx) {
  if (!cx.subdivision) throw std::invalid_argument("complex carries no dual subdivision");
  if (!is_unimodular(*cx.subdivision).unimodular) throw std::invalid_argument("requires maximal complex");
}

/// Mean of the vertex positions of a bounded cell.
inline RatVector barycenter(const TropicalComplex& cx, std::size_t c) {
  const auto& cell = cx.cells[c];
  if (cell.dim == 0) return cell.point;
  RatVector p(cx.ambient_dim, Rational(0));
  for (auto v : cell.vertices)
    for (std::size_t j = 0; j < p.size(); ++j) p[j] += cx.cells[v].point[j];
  for (auto& x : p) x /= static_cast<long long>(cell.vertices.size());
  return p;
}

/// True when cell a lies in the closure of cell b (a != b).
inline bool in_closure(const TropicalComplex& cx, std::size_t a, std::size_t b) {
  if (a == b) return false;
  const auto& da = cx.cells[a].dual_points;
  const auto& db = cx.cells[b].dual_points;
  return da.size() > db.size() && std::includes(da.begin(), da.end(), db.begin(), db.end());
}

}  // namespace detail

struct CuttingLocus {
  /// Barycenters of the bounded positive-dimensional cells, keyed by cell.
  std::vector<std::size_t> cells;
  std::vector<RatVector> points;
  /// Each simplex lists indices into `points`; towers[i] is the chain of cells behind simplices[i].
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::vector<std::size_t>> towers;

  bool empty() const { return points.empty(); }
  int dimension() const {
    int d = -1;
    for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
  }
};

inline CuttingLocus cutting_locus(const TropicalComplex& cx) {
  detail::require_maximal(cx);
  CuttingLocus out;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t c = 0; c < cx.cells.size(); ++c)
    if (cx.cells[c].bounded && cx.cells[c].dim > 0) {
      slot[c] = out.cells.size();
      out.cells.push_back(c);
      out.points.push_back(detail::barycenter(cx, c));
    }
  std::vector<std::size_t> tower;
  std::function<void()> grow = [&]() {
    std::vector<std::size_t> simplex;
    for (auto c : tower) simplex.push_back(slot.at(c));
    out.simplices.push_back(simplex);
    out.towers.push_back(tower);
    for (auto c : out.cells)
      if (detail::in_closure(cx, tower.back(), c)) {
        tower.push_back(c);
        grow();
        tower.pop_back();
      }
  };
  for (auto c : out.cells) {
    tower = {c};
    grow();
  }
  return out;
}

/// The part of one cell of Π that belongs to a given piece, recorded by its
/// dual face and a direction from the owning vertex into the cell.
struct PieceFragment {
  std::size_t cell = 0;
  std::vector<LatticePoint> dual_points;
  RatVector direction;
};

struct PrimitivePiece {
  std::size_t vertex = 0;
  RatVector vertex_point;
  /// Vertices of the dual simplex: lexicographically smallest first, the rest in decreasing order.
  std::vector<LatticePoint> dual_simplex;
  std::vector<Rational> dual_values;
  std::vector<PieceFragment> fragments;
};

/// One piece per vertex of Π; the piece of B collects the germs at B of every
/// cell whose closure contains B.
inline std::vector<PrimitivePiece> primitive_pieces(const TropicalComplex& cx) {
  detail::require_maximal(cx);
  const auto& v = *cx.source;
  std::vector<PrimitivePiece> out;
  for (auto b : cx.cells_of_dim(0)) {
    PrimitivePiece p;
    p.vertex = b;
    p.vertex_point = cx.cells[b].point;
    auto ids = cx.cells[b].dual_vertices;
    std::vector<LatticePoint> pts;
    for (auto i : ids) pts.push_back(v.points[i]);
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return pts[y] < pts[x]; });
    std::rotate(order.begin(), order.end() - 1, order.end());
    for (auto i : order) {
      p.dual_simplex.push_back(pts[i]);
      p.dual_values.push_back(v.values[ids[i]]);
    }
    for (std::size_t c = 0; c < cx.cells.size(); ++c) {
      if (c != b && !std::binary_search(cx.cells[c].vertices.begin(), cx.cells[c].vertices.end(), b)) continue;
      PieceFragment f;
      f.cell = c;
      for (auto i : cx.cells[c].dual_points) f.dual_points.push_back(v.points[i]);
      f.direction = cx.cells[c].point;
      for (std::size_t j = 0; j < f.direction.size(); ++j) f.direction[j] -= p.vertex_point[j];
      p.fragments.push_back(std::move(f));
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct PieceNormalization {
  /// Affine unimodular map of the lattice taking the dual simplex onto Δ₁ = conv(0, e_1, ..., e_m).
  AffineUnimodularMap dual_map;
  /// Linear map on the Π side (inverse transpose of the dual map's linear part).
  IntMatrix chart;
  /// chart maps the piece into Σ_n + translate.
  RatVector translate;
  bool verified = false;
};

inline PieceNormalization normalize_piece(const PrimitivePiece& p) {
  const std::size_t m = p.vertex_point.size();
  if (p.dual_simplex.size() != m + 1) throw std::invalid_argument("dual cell is not a simplex");
  // E has columns a_i - a_0.
  IntMatrix e(m, m);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 0; j < m; ++j) e(j, i - 1) = p.dual_simplex[i][j] - p.dual_simplex[0][j];
  Integer det = determinant(e);
  if (det != 1 && det != -1) throw std::invalid_argument("dual cell not unimodular");
  AffineUnimodularMap e_map(e, p.dual_simplex[0].coords);
  AffineUnimodularMap g = e_map.inverse();
  PieceNormalization out{g, e.transpose(), {}, false};
  RatMatrix chart = to_rational(out.chart);
  out.translate = chart * p.vertex_point;

  // Σ_n + c with c_i = v(a_i) - v(a_0) is the corner locus of max(0, z_i - c_i).
  bool ok = true;
  for (std::size_t i = 1; i <= m; ++i)
    if (out.translate[i - 1] != p.dual_values[i] - p.dual_values[0]) ok = false;
  for (const auto& f : p.fragments) {
    RatVector w = chart * f.direction;
    Rational top = 0;
    for (const auto& x : w) top = std::max(top, x);
    std::vector<std::size_t> argmax;
    if (top == 0) argmax.push_back(0);
    for (std::size_t i = 0; i < m; ++i)
      if (w[i] == top) argmax.push_back(i + 1);
    std::vector<std::size_t> expected;
    for (const auto& q : f.dual_points) {
      auto it = std::find(p.dual_simplex.begin(), p.dual_simplex.end(), q);
      if (it == p.dual_simplex.end()) {
        ok = false;
        break;
      }
      expected.push_back(static_cast<std::size_t>(it - p.dual_simplex.begin()));
    }
    std::sort(expected.begin(), expected.end());
    if (expected != argmax) ok = false;
  }
  out.verified = ok;
  return out;
}

/// Integral homology of the compactified base, via the order complex of its closure poset.
inline HomologyGroups base_homology(const StratifiedComplex& s) { return order_complex_homology(s.closure_below); }

/// Number of components of the codimension-(j+1) boundary strata of the closed pair of pants.
inline Integer boundary_strata_count(int n, int j) {
  if (n < 1 || j < 0 || j > n - 1) throw std::invalid_argument("boundary_strata_count: need 0 <= j <= n-1");
  Integer out = 1;
  const int top = n + 2, k = j + 2;
  for (int i = 0; i < k; ++i) out = out * (top - i) / (i + 1);
  return out;
}

struct InvariantReport {
  int n = 0;
  int d = 0;
  Integer p_g;
  std::optional<Integer> chi;
  std::optional<Integer> sigma;
};

inline InvariantReport hypersurface_invariants(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("hypersurface_invariants: need n >= 1 and d >= 1");
  InvariantReport out;
  out.n = n;
  out.d = d;
  out.p_g = static_cast<long long>(interior_lattice_points(dilated_simplex(n, d)).size());
  if (n == 2) {
    const Integer dd = d;
    if (out.p_g != (dd - 1) * (dd - 2) * (dd - 3) / 6) throw std::logic_error("interior point count disagrees with the closed formula");
    out.chi = dd * dd * dd - 4 * dd * dd + 6 * dd;
    out.sigma = (4 * dd - dd * dd * dd) / 3;
  }
  return out;
}

}  // namespace tropix
