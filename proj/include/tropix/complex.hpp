#pragma once

// The corner locus Π_v of L_v as a weighted rational polyhedral complex, built
// cell by cell from the faces of D_v, plus balancing, region graphs and
// reconstruction, face complexes, boundary stratification and Φ_Δ.

#include "tropix/subdivision.hpp"

#include <cmath>
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

/// normal·y = offset (equality) or normal·y <= offset (inequality).
struct LinearConstraint {
  Covector normal;
  Rational offset;

  friend bool operator==(const LinearConstraint& a, const LinearConstraint& b) {
    return a.normal == b.normal && a.offset == b.offset;
  }
};

struct TropicalCell {
  int dim = 0;
  /// Points of A spanning the dual face of D_v, and that face's vertices.
  std::vector<std::size_t> dual_points;
  std::vector<std::size_t> dual_vertices;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;
  bool bounded = true;
  /// 0-cells in the closure of this cell.
  std::vector<std::size_t> vertices;
  std::vector<IntVector> recession;
  /// Present on codimension-one cells: weight, primitive covector and the dual
  /// edge [a, b] of D_v (covector oriented from a to b, weight·covector = b - a).
  std::optional<Integer> weight;
  std::optional<Covector> covector;
  std::optional<std::pair<std::size_t, std::size_t>> dual_edge;
  /// Position for 0-cells; for other cells a point of the relative interior.
  RatVector point;
  /// Cells of dimension dim-1 in the boundary, and of dimension dim+1 around it.
  std::vector<std::size_t> facets;
  std::vector<std::size_t> cofacets;
};

class TropicalComplex {
 public:
  std::size_t ambient_dim = 0;
  std::vector<TropicalCell> cells;
  std::optional<LiftingFunction> source;
  std::optional<RegularSubdivision> subdivision;
  /// Set by face_complex: lattice frame of the face whose intrinsic coordinates are used.
  std::optional<LatticeFrame> face_frame;

  /// Top dimension n of the hypersurface.
  int top_dim() const { return static_cast<int>(ambient_dim) - 1; }

  std::vector<std::size_t> cells_of_dim(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].dim == k) out.push_back(i);
    return out;
  }

  /// Cell dual to the given face of D_v (by sorted point set).
  std::optional<std::size_t> cell_of_dual(const std::vector<std::size_t>& dual_points) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].dual_points == dual_points) return i;
    return std::nullopt;
  }

  bool contains(std::size_t c, const RatVector& y) const {
    const auto& cell = cells[c];
    for (const auto& e : cell.equalities)
      if (pair(e.normal, y) != e.offset) return false;
    for (const auto& e : cell.inequalities)
      if (pair(e.normal, y) > e.offset) return false;
    return true;
  }
};

/// Builds Π_v from an already computed subdivision.
inline TropicalComplex corner_locus(const RegularSubdivision& s) {
  const auto& v = s.lifting();
  const int dim = static_cast<int>(s.ambient_dim());
  TropicalComplex cx;
  cx.ambient_dim = s.ambient_dim();
  cx.source = v;
  cx.subdivision = s;

  std::map<std::size_t, std::size_t> cell_of_face;
  for (int fd = dim; fd >= 1; --fd)
    for (auto f : s.faces_of_dim(fd)) {
      cell_of_face[f] = cx.cells.size();
      TropicalCell cell;
      cell.dim = dim - fd;
      cell.dual_points = s.faces()[f].points;
      cell.dual_vertices = s.faces()[f].vertices;
      cx.cells.push_back(std::move(cell));
    }

  for (auto& [f, c] : cell_of_face) {
    TropicalCell& cell = cx.cells[c];
    const auto& face = s.faces()[f];
    const std::size_t x0 = face.vertices.front();

    // Equalities: x·y - v(x) is constant over the dual face.
    std::vector<std::vector<Rational>> kept;
    for (auto x : face.vertices) {
      if (x == x0) continue;
      Covector normal(IntVector((v.points[x] - v.points[x0]).coords));
      auto trial = kept;
      trial.push_back(to_rational(normal.components));
      if (rank_of(RatMatrix::from_rows(trial, s.ambient_dim())) == trial.size()) {
        kept = std::move(trial);
        cell.equalities.push_back({normal, v.values[x] - v.values[x0]});
      }
    }

    // Inequalities against every other vertex of the star of the dual face.
    std::set<std::size_t> star;
    for (auto m : face.maximal_cells) {
      const auto& mf = s.faces()[s.cell_face(m)];
      star.insert(mf.vertices.begin(), mf.vertices.end());
    }
    for (auto z : star) {
      if (std::binary_search(face.points.begin(), face.points.end(), z)) continue;
      Covector normal(IntVector((v.points[z] - v.points[x0]).coords));
      cell.inequalities.push_back({normal, v.values[z] - v.values[x0]});
    }

    for (auto m : face.maximal_cells) cell.vertices.push_back(cell_of_face.at(s.cell_face(m)));
    std::sort(cell.vertices.begin(), cell.vertices.end());

    cell.bounded = !face.on_boundary;
    for (const auto& hf : s.hull_facets()) {
      bool all = true;
      for (auto i : face.points)
        if (pair(hf.normal, v.points[i]) != hf.offset) {
          all = false;
          break;
        }
      if (all) cell.recession.push_back(hf.normal.components);
    }

    if (cell.dim == dim - 1) {
      std::size_t a = face.vertices.front(), b = face.vertices.back();
      Covector diff(IntVector((v.points[b] - v.points[a]).coords));
      auto [prim, w] = primitive_and_weight(diff);
      cell.weight = w;
      cell.covector = prim;
      cell.dual_edge = std::make_pair(a, b);
    }

    for (auto g : s.cofaces(f))
      if (s.faces()[g].dim == face.dim + 1) cell.facets.push_back(cell_of_face.at(g));
    for (auto g : s.subfaces(f))
      if (s.faces()[g].dim == face.dim - 1 && s.faces()[g].dim >= 1) cell.cofacets.push_back(cell_of_face.at(g));
    std::sort(cell.facets.begin(), cell.facets.end());
    std::sort(cell.cofacets.begin(), cell.cofacets.end());
  }

  // Vertex positions are the maximal-cell slopes; other cells get a relative interior point.
  for (std::size_t m = 0; m < s.cells().size(); ++m) cx.cells[cell_of_face.at(s.cell_face(m))].point = s.cells()[m].slope;
  for (auto& cell : cx.cells) {
    if (cell.dim == 0) continue;
    RatVector p(s.ambient_dim(), Rational(0));
    for (auto vtx : cell.vertices)
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += cx.cells[vtx].point[j];
    for (auto& x : p) x /= static_cast<long long>(cell.vertices.size());
    for (const auto& r : cell.recession)
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += r[j];
    cell.point = std::move(p);
  }
  return cx;
}

inline TropicalComplex corner_locus(const LiftingFunction& v) { return corner_locus(lower_hull_subdivision(v)); }

struct BalanceReport {
  bool balanced = true;
  std::optional<std::size_t> failing_cell;
  IntVector residual;
};

/// Checks that around every (n-1)-cell the coherently co-oriented weighted
/// covectors of the adjacent n-cells sum to zero.
inline BalanceReport check_balanced(const TropicalComplex& cx) {
  const int n = cx.top_dim();
  for (auto c : cx.cells_of_dim(n))
    if (!cx.cells[c].weight || !cx.cells[c].covector) throw std::invalid_argument("missing weight on cell " + std::to_string(c));
  if (n < 1) return {};
  const std::size_t m = cx.ambient_dim;
  for (auto t : cx.cells_of_dim(n - 1)) {
    const auto& tau = cx.cells[t];
    if (tau.equalities.size() < 2) throw std::invalid_argument("cell " + std::to_string(t) + " lacks two independent equalities");
    const auto& psi1 = tau.equalities[0].normal;
    const auto& psi2 = tau.equalities[1].normal;
    RatMatrix basis(m, 2);
    for (std::size_t j = 0; j < m; ++j) {
      basis(j, 0) = Rational(psi1[j]);
      basis(j, 1) = Rational(psi2[j]);
    }
    IntVector total(m, Integer(0));
    for (auto f : tau.cofacets) {
      const auto& cell = cx.cells[f];
      RatVector r(m);
      for (std::size_t j = 0; j < m; ++j) r[j] = cell.point[j] - tau.point[j];
      Rational p = pair(psi1, r), q = pair(psi2, r);
      Covector c = *cell.weight * *cell.covector;
      auto coords = solve_linear(basis, to_rational(c.components));
      if (!coords) throw std::invalid_argument("covector of cell " + std::to_string(f) + " is not normal to cell " + std::to_string(t));
      int s = sign_of(Rational(-(*coords)[0] * q + (*coords)[1] * p));
      if (s == 0) throw std::invalid_argument("cell " + std::to_string(f) + " has a covector not transverse to its direction");
      for (std::size_t j = 0; j < m; ++j) total[j] += s * c[j];
    }
    for (const auto& x : total)
      if (x != 0) return {false, t, total};
  }
  return {};
}

/// Complement components with the walls between them. Each wall separates
/// region `from` and region `to`; on the wall covector·y = offset, and the
/// affine function of `to` is that of `from` plus covector·y - offset.
struct RegionWall {
  std::size_t from = 0, to = 0;
  Covector covector;
  Rational offset;
};

struct RegionGraph {
  std::size_t region_count = 0;
  std::vector<RegionWall> walls;
  std::size_t reference = 0;
  /// Lattice point labelling each region when extracted from a corner locus.
  std::vector<LatticePoint> labels;
};

inline RegionGraph extract_region_graph(const TropicalComplex& cx) {
  if (!cx.subdivision) throw std::invalid_argument("complex carries no dual subdivision");
  const auto& s = *cx.subdivision;
  const auto& v = s.lifting();
  RegionGraph g;
  std::map<std::size_t, std::size_t> region_of_point;
  for (auto f : s.faces_of_dim(0)) {
    std::size_t p = s.faces()[f].vertices.front();
    region_of_point[p] = 0;
  }
  for (auto& [p, r] : region_of_point) {
    r = g.labels.size();
    g.labels.push_back(v.points[p]);
  }
  g.region_count = g.labels.size();
  for (auto c : cx.cells_of_dim(cx.top_dim())) {
    const auto& cell = cx.cells[c];
    auto [a, b] = *cell.dual_edge;
    g.walls.push_back({region_of_point.at(a), region_of_point.at(b), *cell.weight * *cell.covector, v.values[b] - v.values[a]});
  }
  return g;
}

/// Affine function per region, found by propagation from the reference region
/// (where it is zero). A = region gradients, v = minus the constant terms.
inline LiftingFunction reconstruct_lifting(const RegionGraph& g) {
  if (g.region_count == 0) throw std::invalid_argument("region graph has no regions");
  if (g.reference >= g.region_count) throw std::invalid_argument("reference region out of range");
  std::size_t m = 0;
  for (const auto& w : g.walls) {
    if (w.covector.is_zero()) throw std::invalid_argument("wall with zero covector");
    if (m == 0) m = w.covector.dim();
    if (w.covector.dim() != m) throw std::invalid_argument("walls of mixed dimension");
    if (w.from >= g.region_count || w.to >= g.region_count) throw std::invalid_argument("wall references unknown region");
  }
  if (m == 0) throw std::invalid_argument("region graph has no walls");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.region_count);
  for (std::size_t i = 0; i < g.walls.size(); ++i) {
    adj[g.walls[i].from].push_back({i, g.walls[i].to});
    adj[g.walls[i].to].push_back({i, g.walls[i].from});
  }
  struct Affine {
    IntVector grad;
    Rational constant;
  };
  std::vector<std::optional<Affine>> fn(g.region_count);
  fn[g.reference] = Affine{IntVector(m, Integer(0)), Rational(0)};
  auto across = [&](const Affine& a, const RegionWall& w, bool forward) {
    Affine b = a;
    for (std::size_t j = 0; j < m; ++j) b.grad[j] += forward ? w.covector[j] : Integer(-w.covector[j]);
    b.constant += forward ? Rational(-w.offset) : w.offset;
    return b;
  };
  std::queue<std::size_t> todo;
  todo.push(g.reference);
  while (!todo.empty()) {
    std::size_t r = todo.front();
    todo.pop();
    for (auto [wi, other] : adj[r]) {
      const auto& w = g.walls[wi];
      Affine next = across(*fn[r], w, w.from == r);
      if (!fn[other]) {
        fn[other] = next;
        todo.push(other);
      } else if (fn[other]->grad != next.grad || fn[other]->constant != next.constant) {
        throw std::invalid_argument("unbalanced or non-realizable region graph");
      }
    }
  }
  LiftingFunction out;
  std::set<LatticePoint> seen;
  for (const auto& a : fn) {
    if (!a) throw std::invalid_argument("region graph is not connected");
    LatticePoint p(a->grad);
    if (!seen.insert(p).second) throw std::invalid_argument("unbalanced or non-realizable region graph");
    out.points.push_back(p);
    out.values.push_back(-a->constant);
  }
  out.validate();
  return out;
}

/// The dual complex of a face F of Δ, given by F's vertices: corner locus of v
/// restricted to A ∩ F, written in the lattice coordinates of F.
inline TropicalComplex face_complex(const LiftingFunction& v, const std::vector<LatticePoint>& face_vertices) {
  if (face_vertices.empty()) throw std::invalid_argument("empty face");
  if (affine_rank(face_vertices) == 0) throw std::invalid_argument("face complex of a vertex is empty");
  auto s = lower_hull_subdivision(v);
  // The facets of Δ through F cut out exactly F when F is a face.
  std::vector<std::size_t> tight;
  for (std::size_t i = 0; i < v.size(); ++i) tight.push_back(i);
  bool proper = false;
  for (const auto& hf : s.hull_facets()) {
    bool holds = true;
    for (const auto& p : face_vertices)
      if (pair(hf.normal, p) != hf.offset) {
        holds = false;
        break;
      }
    if (!holds) continue;
    proper = true;
    std::vector<std::size_t> keep;
    for (auto i : tight)
      if (pair(hf.normal, v.points[i]) == hf.offset) keep.push_back(i);
    tight = std::move(keep);
  }
  if (!proper) throw std::invalid_argument("not a proper face of the Newton polytope");
  std::vector<LatticePoint> on_face;
  for (auto i : tight) on_face.push_back(v.points[i]);
  if (affine_rank(on_face) != affine_rank(face_vertices)) throw std::invalid_argument("vertex set does not span a face of the Newton polytope");
  for (const auto& p : face_vertices)
    if (std::find(on_face.begin(), on_face.end(), p) == on_face.end())
      throw std::invalid_argument("vertex set does not span a face of the Newton polytope");
  LatticeFrame frame = LatticeFrame::of(on_face);
  LiftingFunction restricted;
  for (auto i : tight) {
    restricted.points.push_back(frame.intrinsic(v.points[i]));
    restricted.values.push_back(v.values[i]);
  }
  auto cx = corner_locus(restricted);
  cx.face_frame = frame;
  return cx;
}

/// One cell of the combinatorial closure of Π in Δ: the pair (dual face τ of D_v,
/// face G of Δ containing it). Label (k, l) with k the cell dimension and l+1 = dim G.
struct StratumCell {
  std::size_t dual_face = 0;
  std::size_t delta_face = 0;
  int k = 0;
  int l = 0;
};

struct StratifiedComplex {
  TropicalComplex complex;
  /// Faces of Δ of dimension >= 1, as sorted point sets of A.
  std::vector<std::vector<std::size_t>> delta_faces;
  std::vector<int> delta_face_dims;
  std::vector<StratumCell> cells;
  /// closure_below[i]: cells strictly contained in the closure of cell i.
  std::vector<std::vector<std::size_t>> closure_below;

  std::set<std::pair<int, int>> label_types() const {
    std::set<std::pair<int, int>> out;
    for (const auto& c : cells) out.insert({c.k, c.l});
    return out;
  }
  std::map<std::pair<int, int>, std::size_t> label_census() const {
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& c : cells) ++out[{c.k, c.l}];
    return out;
  }
};

inline StratifiedComplex stratify(const LiftingFunction& v) {
  auto s = lower_hull_subdivision(v);
  if (!is_unimodular(s).unimodular) throw std::invalid_argument("stratification requires maximal complex");
  StratifiedComplex out;
  out.complex = corner_locus(s);

  // Faces of Δ as intersections of hull facets, plus Δ itself.
  std::set<std::vector<std::size_t>> found;
  std::vector<std::size_t> all(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> frontier;
  for (const auto& hf : s.hull_facets()) {
    std::vector<std::size_t> on;
    for (auto i : all)
      if (pair(hf.normal, v.points[i]) == hf.offset) on.push_back(i);
    if (found.insert(on).second) frontier.push_back(on);
  }
  std::vector<std::vector<std::size_t>> facet_sets(frontier.begin(), frontier.end());
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& a : frontier)
      for (const auto& f : facet_sets) {
        std::vector<std::size_t> meet;
        std::set_intersection(a.begin(), a.end(), f.begin(), f.end(), std::back_inserter(meet));
        if (meet.empty() || meet == a) continue;
        if (found.insert(meet).second) next.push_back(meet);
      }
    frontier = std::move(next);
  }
  found.insert(all);
  for (const auto& f : found) {
    int d = affine_rank(s.points_of(f));
    if (d < 1) continue;
    out.delta_faces.push_back(f);
    out.delta_face_dims.push_back(d);
  }

  for (std::size_t g = 0; g < out.delta_faces.size(); ++g) {
    const auto& gp = out.delta_faces[g];
    for (std::size_t f = 0; f < s.faces().size(); ++f) {
      const auto& face = s.faces()[f];
      if (face.dim < 1) continue;
      if (!std::includes(gp.begin(), gp.end(), face.points.begin(), face.points.end())) continue;
      out.cells.push_back({f, g, out.delta_face_dims[g] - face.dim, out.delta_face_dims[g] - 1});
    }
  }

  out.closure_below.assign(out.cells.size(), {});
  for (std::size_t a = 0; a < out.cells.size(); ++a)
    for (std::size_t b = 0; b < out.cells.size(); ++b) {
      if (a == b) continue;
      const auto& lo = out.cells[a];
      const auto& hi = out.cells[b];
      const auto& ga = out.delta_faces[lo.delta_face];
      const auto& gb = out.delta_faces[hi.delta_face];
      const auto& ta = s.faces()[lo.dual_face].points;
      const auto& tb = s.faces()[hi.dual_face].points;
      if (std::includes(gb.begin(), gb.end(), ga.begin(), ga.end()) && std::includes(ta.begin(), ta.end(), tb.begin(), tb.end()))
        out.closure_below[b].push_back(a);
    }
  return out;
}

/// Φ_Δ(x) = Σ j e^{2 j·x} / Σ e^{2 j·x} over the lattice points j of Δ.
inline std::vector<double> phi_delta(const std::vector<double>& x, const LatticePolytope& delta) {
  if (!delta.full_dimensional()) throw std::invalid_argument("phi_delta needs a full-dimensional polytope");
  if (x.size() != delta.ambient_dim()) throw std::invalid_argument("phi_delta: dimension mismatch");
  auto pts = lattice_points(delta);
  std::vector<double> expo;
  double top = -INFINITY;
  for (const auto& j : pts) {
    double e = 0;
    for (std::size_t i = 0; i < x.size(); ++i) e += 2.0 * to_double(j[i]) * x[i];
    expo.push_back(e);
    top = std::max(top, e);
  }
  std::vector<double> num(x.size(), 0.0);
  double den = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double w = std::exp(expo[k] - top);
    den += w;
    for (std::size_t i = 0; i < x.size(); ++i) num[i] += w * to_double(pts[k][i]);
  }
  for (auto& c : num) c /= den;
  return num;
}

struct VertexStar {
  std::vector<std::size_t> edges;
  std::vector<IntVector> directions;
  std::vector<Integer> weights;
};

/// Weights on the edges at a vertex B whose dual cell is a simplex: the edge
/// dual to a facet of that simplex gets the facet's intrinsic normalized volume.
/// The relation Σ w_j v_j = 0 is checked with v_j the primitive edge directions.
inline VertexStar vertex_edge_weights(const TropicalComplex& cx, std::size_t b) {
  if (b >= cx.cells.size() || cx.cells[b].dim != 0) throw std::invalid_argument("not a vertex of the complex");
  if (!cx.source) throw std::invalid_argument("complex carries no lifting");
  const auto& v = *cx.source;
  const auto& vert = cx.cells[b];
  const std::size_t m = cx.ambient_dim;
  if (vert.dual_points.size() != m + 1 || vert.dual_vertices.size() != m + 1)
    throw std::invalid_argument("non-generic vertex: dual cell is not a simplex");
  VertexStar out;
  IntVector total(m, Integer(0));
  for (auto e : vert.cofacets) {
    const auto& edge = cx.cells[e];
    if (edge.dim != 1) continue;
    IntVector dir;
    if (edge.bounded) {
      std::size_t other = edge.vertices[0] == b ? edge.vertices[1] : edge.vertices[0];
      RatVector diff(m);
      for (std::size_t j = 0; j < m; ++j) diff[j] = cx.cells[other].point[j] - vert.point[j];
      dir = primitive_direction(diff);
    } else {
      if (edge.recession.size() != 1) throw std::invalid_argument("non-generic vertex: edge with several recession rays");
      dir = edge.recession.front();
    }
    std::vector<LatticePoint> facet;
    for (auto i : edge.dual_points) facet.push_back(v.points[i]);
    Integer w = simplex_intrinsic_volume(facet);
    out.edges.push_back(e);
    out.directions.push_back(dir);
    out.weights.push_back(w);
    for (std::size_t j = 0; j < m; ++j) total[j] += w * dir[j];
  }
  if (out.edges.size() != m + 1) throw std::invalid_argument("non-generic vertex: expected n+2 edges");
  for (const auto& x : total)
    if (x != 0) throw std::logic_error("weighted edge directions do not sum to zero");
  return out;
}

}  // namespace tropix
