#pragma once

// Lifting functions, Legendre transforms and the regular subdivision D_v cut out
// by the lower hull of the lifted points {(x, v(x))}.

#include "tropix/lattice.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropix {

/// A finite set A of lattice points with rational values v.
struct LiftingFunction {
  std::vector<LatticePoint> points;
  std::vector<Rational> values;

  LiftingFunction() = default;
  LiftingFunction(std::vector<LatticePoint> pts, std::vector<Rational> vals)
      : points(std::move(pts)), values(std::move(vals)) {
    validate();
  }

  std::size_t size() const { return points.size(); }
  std::size_t ambient_dim() const { return points.empty() ? 0 : points.front().dim(); }

  void validate() const {
    if (points.empty()) throw std::invalid_argument("lifting function has no points");
    if (points.size() != values.size()) throw std::invalid_argument("points and values differ in length");
    std::set<LatticePoint> seen;
    for (const auto& p : points) {
      if (p.dim() != ambient_dim()) throw std::invalid_argument("inconsistent point dimensions");
      if (!seen.insert(p).second) throw std::invalid_argument("repeated lattice point in lifting");
    }
  }

  std::optional<std::size_t> index_of(const LatticePoint& p) const {
    auto it = std::find(points.begin(), points.end(), p);
    if (it == points.end()) return std::nullopt;
    return static_cast<std::size_t>(it - points.begin());
  }

  /// x·y - v(x), the affine form of monomial i in the Legendre transform.
  Rational form(std::size_t i, const RatVector& y) const { return pair(points[i], y) - values[i]; }
};

struct LegendreValue {
  Rational value;
  std::vector<std::size_t> argmax;
};

/// L_v(y) = max_{x in A} (x·y - v(x)) together with the maximizing indices.
inline LegendreValue legendre(const LiftingFunction& v, const RatVector& y) {
  if (v.points.empty()) throw std::invalid_argument("legendre of an empty lifting");
  if (y.size() != v.ambient_dim()) throw std::invalid_argument("legendre: dimension mismatch");
  LegendreValue out{v.form(0, y), {0}};
  for (std::size_t i = 1; i < v.size(); ++i) {
    Rational f = v.form(i, y);
    if (f > out.value) {
      out.value = f;
      out.argmax = {i};
    } else if (f == out.value) {
      out.argmax.push_back(i);
    }
  }
  return out;
}

/// A maximal cell of D_v: the indices of A whose lifts lie on one lower facet,
/// the slope y of that facet (x·y - v(x) = level on the cell) and the level.
struct MaximalCell {
  std::vector<std::size_t> points;
  RatVector slope;
  Rational level;
};

/// A face of D_v of any dimension, identified by the points of A it carries.
struct SubdivisionFace {
  std::vector<std::size_t> points;
  std::vector<std::size_t> vertices;
  int dim = 0;
  bool on_boundary = false;
  std::vector<std::size_t> maximal_cells;
};

/// A facet of the Newton polytope: normal·x <= offset with primitive outward normal.
struct HullFacet {
  Covector normal;
  Integer offset;
};

class RegularSubdivision {
 public:
  RegularSubdivision() = default;

  const LiftingFunction& lifting() const { return lifting_; }
  std::size_t ambient_dim() const { return lifting_.ambient_dim(); }
  const std::vector<MaximalCell>& cells() const { return cells_; }
  /// Pairs of maximal cells sharing a facet.
  const std::vector<std::pair<std::size_t, std::size_t>>& adjacency() const { return adjacency_; }
  const std::vector<HullFacet>& hull_facets() const { return hull_facets_; }

  /// All faces of D_v, including the maximal cells (dimension ambient_dim()).
  const std::vector<SubdivisionFace>& faces() const { return faces_; }
  std::vector<std::size_t> faces_of_dim(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < faces_.size(); ++i)
      if (faces_[i].dim == k) out.push_back(i);
    return out;
  }
  std::optional<std::size_t> face_index(const std::vector<std::size_t>& sorted_points) const {
    auto it = face_lookup_.find(sorted_points);
    if (it == face_lookup_.end()) return std::nullopt;
    return it->second;
  }
  /// Faces strictly containing face f.
  const std::vector<std::size_t>& cofaces(std::size_t f) const { return cofaces_[f]; }
  /// Faces strictly contained in face f.
  const std::vector<std::size_t>& subfaces(std::size_t f) const { return subfaces_[f]; }
  /// Face index of maximal cell c.
  std::size_t cell_face(std::size_t c) const { return cell_face_[c]; }

  std::vector<LatticePoint> points_of(const std::vector<std::size_t>& ids) const {
    std::vector<LatticePoint> out;
    for (auto i : ids) out.push_back(lifting_.points[i]);
    return out;
  }

  LatticePolytope cell_polytope(std::size_t c) const { return LatticePolytope(points_of(cells_[c].points)); }

  /// True iff every point of the set lies on a common facet of the Newton polytope.
  bool on_hull_boundary(const std::vector<std::size_t>& ids) const {
    for (const auto& f : hull_facets_) {
      bool all = true;
      for (auto i : ids)
        if (pair(f.normal, lifting_.points[i]) != f.offset) {
          all = false;
          break;
        }
      if (all) return true;
    }
    return false;
  }

  friend RegularSubdivision lower_hull_subdivision(const LiftingFunction& v);

 private:
  void build_faces();

  LiftingFunction lifting_;
  std::vector<MaximalCell> cells_;
  std::vector<std::pair<std::size_t, std::size_t>> adjacency_;
  std::vector<HullFacet> hull_facets_;
  std::vector<SubdivisionFace> faces_;
  std::map<std::vector<std::size_t>, std::size_t> face_lookup_;
  std::vector<std::vector<std::size_t>> cofaces_, subfaces_;
  std::vector<std::size_t> cell_face_;
};

namespace detail {

// Moves y along u until some point outside `active` ties the active points that
// grow fastest in direction u. Returns nullopt when no point can catch up.
inline std::optional<RatVector> shoot(const LiftingFunction& v, const RatVector& y, const std::vector<std::size_t>& active,
                                      const RatVector& u) {
  const Rational top = v.form(active.front(), y);
  Rational base = pair(v.points[active.front()], u);
  for (auto i : active) base = std::max(base, pair(v.points[i], u));
  std::optional<Rational> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::binary_search(active.begin(), active.end(), i)) continue;
    Rational rate = pair(v.points[i], u) - base;
    if (rate <= 0) continue;
    Rational step = (top - v.form(i, y)) / rate;
    if (!best || step < *best) best = step;
  }
  if (!best) return std::nullopt;
  RatVector out = y;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += *best * u[j];
  return out;
}

}  // namespace detail

/// D_v from the lower hull of the lifted points. Points tied on a lower facet
/// all belong to the cell, so non-generic liftings give non-simplicial cells.
inline RegularSubdivision lower_hull_subdivision(const LiftingFunction& v) {
  v.validate();
  const std::size_t dim = v.ambient_dim();
  if (dim == 0 || affine_rank(v.points) != static_cast<int>(dim))
    throw std::invalid_argument("degenerate Newton polytope: points do not affinely span the ambient space");
  RegularSubdivision s;
  s.lifting_ = v;

  // Walk from y = 0 to a vertex of Pi, growing the active set one dimension at a time.
  RatVector y(dim, Rational(0));
  auto active = legendre(v, y).argmax;
  while (affine_rank(s.points_of(active)) < static_cast<int>(dim)) {
    RatMatrix diffs(active.size(), dim);
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = 0; j < dim; ++j) diffs(i, j) = Rational(v.points[active[i]][j] - v.points[active[0]][j]);
    RatVector u = nullspace(diffs).front();
    auto next = detail::shoot(v, y, active, u);
    if (!next) {
      for (auto& c : u) c = -c;
      next = detail::shoot(v, y, active, u);
    }
    if (!next) throw std::logic_error("lower hull walk stalled");
    y = *next;
    active = legendre(v, y).argmax;
  }

  std::map<std::vector<std::size_t>, std::size_t> seen;
  std::set<std::pair<Covector, Integer>> hull;
  std::queue<std::size_t> todo;
  auto add_cell = [&](std::vector<std::size_t> pts, RatVector slope) {
    auto [it, fresh] = seen.emplace(pts, s.cells_.size());
    if (fresh) {
      Rational level = v.form(pts.front(), slope);
      s.cells_.push_back(MaximalCell{std::move(pts), std::move(slope), level});
      todo.push(it->second);
    }
    return it->second;
  };
  add_cell(active, y);
  std::set<std::pair<std::size_t, std::size_t>> adj;
  while (!todo.empty()) {
    const std::size_t c = todo.front();
    todo.pop();
    const MaximalCell cell = s.cells_[c];
    LatticePolytope poly(s.points_of(cell.points));
    for (const auto& f : poly.facets()) {
      RatVector u = to_rational(f.normal.components);
      auto next = detail::shoot(v, cell.slope, cell.points, u);
      if (!next) {
        // Facet offsets are intrinsic (relative to the frame origin).
        hull.insert({f.normal, pair(f.normal, poly.points()[f.points.front()])});
        continue;
      }
      std::size_t other = add_cell(legendre(v, *next).argmax, *next);
      adj.insert({std::min(c, other), std::max(c, other)});
    }
  }
  s.adjacency_.assign(adj.begin(), adj.end());
  for (const auto& [n, o] : hull) s.hull_facets_.push_back(HullFacet{n, o});
  s.build_faces();
  return s;
}

inline void RegularSubdivision::build_faces() {
  std::map<LatticePoint, std::size_t> index;
  for (std::size_t i = 0; i < lifting_.size(); ++i) index[lifting_.points[i]] = i;
  cell_face_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    LatticePolytope poly = cell_polytope(c);
    for (int k = 0; k <= poly.dim(); ++k)
      for (const auto& pf : poly.faces(k)) {
        std::vector<std::size_t> ids, verts;
        for (auto i : pf.points) ids.push_back(index.at(poly.points()[i]));
        for (auto i : pf.vertices) verts.push_back(index.at(poly.points()[i]));
        std::sort(ids.begin(), ids.end());
        std::sort(verts.begin(), verts.end());
        auto [it, fresh] = face_lookup_.emplace(ids, faces_.size());
        if (fresh) {
          SubdivisionFace face;
          face.points = ids;
          face.vertices = verts;
          face.dim = k;
          face.on_boundary = on_hull_boundary(ids);
          faces_.push_back(std::move(face));
        }
        faces_[it->second].maximal_cells.push_back(c);
        if (k == poly.dim()) cell_face_[c] = it->second;
      }
  }
  cofaces_.assign(faces_.size(), {});
  subfaces_.assign(faces_.size(), {});
  for (std::size_t a = 0; a < faces_.size(); ++a)
    for (std::size_t b = 0; b < faces_.size(); ++b) {
      if (faces_[a].dim >= faces_[b].dim) continue;
      const auto& pa = faces_[a].points;
      const auto& pb = faces_[b].points;
      if (std::includes(pb.begin(), pb.end(), pa.begin(), pa.end())) {
        cofaces_[a].push_back(b);
        subfaces_[b].push_back(a);
      }
    }
}

/// v̲ on A: the largest convex function below v, i.e. the lower hull evaluated on A.
inline LiftingFunction underlying_convex(const LiftingFunction& v) {
  auto s = lower_hull_subdivision(v);
  LiftingFunction out = v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::optional<Rational> best;
    for (const auto& c : s.cells()) {
      Rational h = pair(v.points[i], c.slope) - c.level;
      if (!best || h > *best) best = h;
    }
    out.values[i] = *best;
  }
  return out;
}

struct UnimodularityReport {
  bool unimodular = true;
  std::optional<std::size_t> offending_cell;
  Integer offending_volume = 0;
};

/// True iff every maximal cell is a simplex of normalized volume 1.
inline UnimodularityReport is_unimodular(const RegularSubdivision& s) {
  for (std::size_t c = 0; c < s.cells().size(); ++c) {
    const auto& cell = s.cells()[c];
    Integer vol = normalized_volume(s.cell_polytope(c));
    if (cell.points.size() != s.ambient_dim() + 1 || vol != 1) return {false, c, vol};
  }
  return {};
}

/// Lifting on Δ_d ∩ Z^{n+1} with a unimodular lower hull:
/// v(x) = sum over 1 <= i <= j <= n+1 of (x_i + ... + x_j)^2.
inline LiftingFunction build_maximal_lifting(int n, int d) {
  auto pts = lattice_points(dilated_simplex(n, d));
  std::vector<Rational> vals;
  for (const auto& p : pts) {
    Integer total = 0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      Integer run = 0;
      for (std::size_t j = i; j < p.dim(); ++j) {
        run += p[j];
        total += run * run;
      }
    }
    vals.emplace_back(total);
  }
  LiftingFunction v(std::move(pts), std::move(vals));
  auto report = is_unimodular(lower_hull_subdivision(v));
  if (!report.unimodular)
    throw std::logic_error("shipped maximal lifting is not unimodular for n=" + std::to_string(n) +
                           ", d=" + std::to_string(d));
  return v;
}

}  // namespace tropix
