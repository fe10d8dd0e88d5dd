#pragma once

// Combinatorial patchworking in the positive orthant. A sign on each vertex of
// a unimodular triangulation cuts every mixed-sign simplex along the convex
// hull of the midpoints of its sign-changing edges; the union of these pieces
// is the sign membrane.

#include "tropix/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tropix {

struct SignDistribution {
  /// signs[i] in {+1, -1} for the i-th point of the lifting.
  std::vector<int> signs;

  std::size_t negatives() const { return static_cast<std::size_t>(std::count(signs.begin(), signs.end(), -1)); }
};

inline SignDistribution single_negative_signs(const RegularSubdivision& s, const LatticePoint& j) {
  const auto& pts = s.lifting().points;
  auto it = std::find(pts.begin(), pts.end(), j);
  if (it == pts.end()) throw std::invalid_argument("negative vertex is not a vertex of the triangulation");
  const auto idx = static_cast<std::size_t>(it - pts.begin());
  if (!s.face_index({idx})) throw std::invalid_argument("negative vertex is not a vertex of the triangulation");
  SignDistribution out;
  out.signs.assign(pts.size(), 1);
  out.signs[idx] = -1;
  return out;
}

/// The part of the membrane inside one mixed-sign face of the triangulation.
struct MembraneCell {
  std::size_t face = 0;
  int dim = 0;
  /// Sign-changing edges of the face (point ids, negative end first) and their midpoints.
  std::vector<std::pair<std::size_t, std::size_t>> crossed_edges;
  std::vector<RatVector> vertices;
};

struct SignMembrane {
  int n = 0;
  SignDistribution signs;
  /// Every cell of the membrane, one per mixed-sign face of dimension >= 1.
  std::vector<MembraneCell> cells;
  /// Indices into `cells`: the top pieces (one per mixed simplex) and the ridges between them.
  std::vector<std::size_t> facets;
  std::vector<std::size_t> ridges;
  /// ridge_facets[r] lists the positions in `facets` of the pieces containing ridges[r].
  std::vector<std::vector<std::size_t>> ridge_facets;
  /// Pairs of positions in `facets` whose pieces share a ridge.
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;

  bool empty() const { return facets.empty(); }
};

inline SignMembrane build_membrane(const RegularSubdivision& s, const SignDistribution& sigma) {
  const auto& v = s.lifting();
  if (sigma.signs.size() != v.size()) throw std::invalid_argument("sign distribution must cover every point");
  for (int x : sigma.signs)
    if (x != 1 && x != -1) throw std::invalid_argument("signs must be +1 or -1");
  auto report = is_unimodular(s);
  if (!report.unimodular) throw std::invalid_argument("build_membrane requires a unimodular triangulation");

  SignMembrane m;
  const int top = static_cast<int>(s.ambient_dim());
  m.n = top - 1;
  m.signs = sigma;
  std::map<std::size_t, std::size_t> cell_of_face;
  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const auto& face = s.faces()[f];
    if (face.dim < 1) continue;
    MembraneCell cell;
    cell.face = f;
    cell.dim = face.dim - 1;
    for (auto a : face.vertices)
      for (auto b : face.vertices)
        if (sigma.signs[a] == -1 && sigma.signs[b] == 1) {
          cell.crossed_edges.push_back({a, b});
          RatVector mid = to_rational(v.points[a]);
          for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = (mid[k] + v.points[b][k]) / 2;
          cell.vertices.push_back(std::move(mid));
        }
    if (cell.crossed_edges.empty()) continue;
    cell_of_face[f] = m.cells.size();
    m.cells.push_back(std::move(cell));
  }
  std::map<std::size_t, std::size_t> facet_pos;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    if (m.cells[c].dim == m.n) {
      facet_pos[m.cells[c].face] = m.facets.size();
      m.facets.push_back(c);
    } else if (m.cells[c].dim == m.n - 1) {
      m.ridges.push_back(c);
    }
  }
  for (auto r : m.ridges) {
    std::vector<std::size_t> around;
    for (auto g : s.cofaces(m.cells[r].face))
      if (s.faces()[g].dim == top) around.push_back(facet_pos.at(g));
    std::sort(around.begin(), around.end());
    if (around.size() == 2) m.adjacency.push_back({around[0], around[1]});
    m.ridge_facets.push_back(std::move(around));
  }
  return m;
}

struct SphereReport {
  bool closed = false;
  bool connected = false;
  Integer euler = 0;
  /// Closed, connected and the Euler characteristic of S^n (for n = 1 also a single cycle).
  /// Combinatorial evidence only, not a homeomorphism certificate.
  bool sphere_evidence = false;
};

inline SphereReport verify_sphere(const SignMembrane& m) {
  SphereReport out;
  if (m.empty()) return out;
  out.closed = true;
  for (const auto& around : m.ridge_facets)
    if (around.size() != 2) out.closed = false;

  std::vector<std::size_t> parent(m.facets.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : m.adjacency) parent[find(a)] = find(b);
  std::size_t roots = 0;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find(i) == i) ++roots;
  out.connected = roots == 1;

  for (const auto& c : m.cells) out.euler += (c.dim % 2 == 0) ? 1 : -1;
  // χ(S^n) = 1 + (-1)^n; for n = 1 closed + connected already forces one cycle.
  const Integer sphere_euler = (m.n % 2 == 0) ? 2 : 0;
  out.sphere_evidence = out.closed && out.connected && out.euler == sphere_euler;
  return out;
}

/// An n-chain of Π with integer coefficients, keyed by cell index.
struct BaseCycle {
  LatticePoint vertex;
  std::map<std::size_t, Integer> chain;
  bool is_cycle = false;
};

namespace detail {

inline RatVector difference(const RatVector& a, const RatVector& b) {
  RatVector out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

/// Sign of the ridge r in the boundary of the top cell f, with f oriented by
/// its stored covector and r by `ridge_basis`.
inline int incidence(const TropicalComplex& cx, std::size_t f, std::size_t r, const std::vector<RatVector>& ridge_basis) {
  const std::size_t dim = cx.ambient_dim;
  RatMatrix m(dim, dim);
  const auto& cov = *cx.cells[f].covector;
  const RatVector out = difference(cx.cells[r].point, cx.cells[f].point);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, 0) = cov[i];
    m(i, 1) = out[i];
    for (std::size_t k = 0; k < ridge_basis.size(); ++k) m(i, k + 2) = ridge_basis[k][i];
  }
  return sign_of(determinant(m));
}

inline std::vector<RatVector> linear_span(const TropicalCell& cell, std::size_t dim) {
  RatMatrix eq(cell.equalities.size(), dim);
  for (std::size_t i = 0; i < cell.equalities.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) eq(i, j) = cell.equalities[i].normal[j];
  return nullspace(eq);
}

}  // namespace detail

/// Cellular boundary check: every (n-1)-cell receives zero total coefficient.
inline bool is_cellular_cycle(const TropicalComplex& cx, const std::map<std::size_t, Integer>& chain) {
  if (cx.ambient_dim < 2) return true;
  std::map<std::size_t, Integer> boundary;
  for (const auto& [f, coef] : chain) {
    if (cx.cells[f].dim != cx.top_dim() || !cx.cells[f].covector) throw std::invalid_argument("chain must consist of top cells");
    for (auto r : cx.cells[f].facets)
      boundary[r] += coef * detail::incidence(cx, f, r, detail::linear_span(cx.cells[r], cx.ambient_dim));
  }
  for (const auto& [r, x] : boundary)
    if (x != 0) return false;
  return true;
}

/// The walls of the region of Π's complement dual to the single negative vertex,
/// oriented away from that region and weighted by Π's weights.
inline BaseCycle membrane_base_class(const SignMembrane& m, const TropicalComplex& cx) {
  if (!cx.subdivision || !cx.source) throw std::invalid_argument("complex carries no dual subdivision");
  const auto& s = *cx.subdivision;
  if (m.signs.signs.size() != s.lifting().size()) throw std::invalid_argument("membrane and complex come from different triangulations");
  if (m.signs.negatives() != 1) throw std::invalid_argument("membrane_base_class needs a single-negative distribution");
  const auto j = static_cast<std::size_t>(std::find(m.signs.signs.begin(), m.signs.signs.end(), -1) - m.signs.signs.begin());
  auto vertex_face = s.face_index({j});
  if (!vertex_face || s.faces()[*vertex_face].on_boundary)
    throw std::invalid_argument("membrane_base_class needs the negative vertex in the interior");
  BaseCycle out;
  out.vertex = s.lifting().points[j];
  for (const auto& c : m.cells) {
    if (c.dim != 0) continue;
    auto cell = cx.cell_of_dual(s.faces()[c.face].points);
    if (!cell) throw std::invalid_argument("membrane and complex come from different triangulations");
    const auto& tc = cx.cells[*cell];
    // weight·covector points from dual_edge.first to dual_edge.second.
    const int orient = tc.dual_edge->first == j ? 1 : -1;
    out.chain[*cell] = orient * *tc.weight;
  }
  out.is_cycle = is_cellular_cycle(cx, out.chain);
  return out;
}

/// pairing[i][k] = ⟨φ_i, z_k⟩ where φ_i is the cochain dual to the walls of
/// cycles[i] (same cells, same signs). Π has no cells above degree n, so any
/// n-cochain is a cocycle and the pairing is defined on homology.
inline IntMatrix pairing_matrix(const std::vector<BaseCycle>& cycles) {
  IntMatrix out(cycles.size(), cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t k = 0; k < cycles.size(); ++k)
      for (const auto& [cell, coef] : cycles[k].chain) {
        auto it = cycles[i].chain.find(cell);
        if (it != cycles[i].chain.end()) out(i, k) += sign_of(it->second) * coef;
      }
  return out;
}

}  // namespace tropix
