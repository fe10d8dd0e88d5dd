#pragma once

// Exact lattice geometry: points, covectors, lattice polytopes with their face
// lattice, normalized volumes, lattice-point enumeration and unimodular maps.

#include "tropix/linalg.hpp"
#include "tropix/number.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropix {

/// A point of Z^m. The ambient dimension is the coordinate count.
struct LatticePoint {
  IntVector coords;

  LatticePoint() = default;
  explicit LatticePoint(IntVector c) : coords(std::move(c)) {}
  LatticePoint(std::initializer_list<long long> c) {
    for (auto x : c) coords.emplace_back(x);
  }

  std::size_t dim() const { return coords.size(); }
  const Integer& operator[](std::size_t i) const { return coords[i]; }
  Integer& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.coords == b.coords; }
  friend bool operator<(const LatticePoint& a, const LatticePoint& b) { return a.coords < b.coords; }

  friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r.coords[i] += b.coords[i];
    return r;
  }
  friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r.coords[i] -= b.coords[i];
    return r;
  }
};

/// An integer linear functional on Z^m.
struct Covector {
  IntVector components;

  Covector() = default;
  explicit Covector(IntVector c) : components(std::move(c)) {}
  Covector(std::initializer_list<long long> c) {
    for (auto x : c) components.emplace_back(x);
  }

  std::size_t dim() const { return components.size(); }
  const Integer& operator[](std::size_t i) const { return components[i]; }
  bool is_zero() const {
    return std::all_of(components.begin(), components.end(), [](const Integer& x) { return x == 0; });
  }

  friend bool operator==(const Covector& a, const Covector& b) { return a.components == b.components; }
  friend bool operator<(const Covector& a, const Covector& b) { return a.components < b.components; }
  friend Covector operator-(const Covector& a) {
    Covector r = a;
    for (auto& x : r.components) x = -x;
    return r;
  }
  friend Covector operator*(const Integer& s, const Covector& a) {
    Covector r = a;
    for (auto& x : r.components) x *= s;
    return r;
  }
};

inline Integer pair(const Covector& c, const LatticePoint& p) {
  Integer s = 0;
  for (std::size_t i = 0; i < c.dim(); ++i) s += c[i] * p[i];
  return s;
}

inline Rational pair(const Covector& c, const RatVector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.dim(); ++i) s += c[i] * y[i];
  return s;
}

inline Rational pair(const LatticePoint& x, const RatVector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

inline RatVector to_rational(const LatticePoint& p) { return to_rational(p.coords); }

/// Splits c into its primitive direction and the gcd of its components.
inline std::pair<Covector, Integer> primitive_and_weight(const Covector& c) {
  if (c.is_zero()) throw std::invalid_argument("degenerate covector");
  Integer g = 0;
  for (const auto& x : c.components) g = gcd_of(g, x);
  Covector p = c;
  for (auto& x : p.components) x /= g;
  return {p, g};
}

/// Affine rank of a point set (dimension of its affine span); -1 for the empty set.
inline int affine_rank(const std::vector<LatticePoint>& pts) {
  if (pts.empty()) return -1;
  const std::size_t m = pts.front().dim();
  RatMatrix diffs(pts.size() - 1, m);
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) diffs(i - 1, j) = Rational(pts[i][j] - pts[0][j]);
  return static_cast<int>(rank_of(diffs));
}

/// An affine lattice frame: origin plus a Z-basis of (affine span - origin) ∩ Z^m.
/// Points of the span get integer intrinsic coordinates.
class LatticeFrame {
 public:
  LatticeFrame() = default;

  static LatticeFrame of(const std::vector<LatticePoint>& pts) {
    if (pts.empty()) throw std::invalid_argument("lattice frame of empty point set");
    LatticeFrame f;
    f.origin_ = pts.front();
    const std::size_t m = f.origin_.dim();
    RatMatrix diffs(pts.size(), m);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < m; ++j) diffs(i, j) = Rational(pts[i][j] - f.origin_[j]);
    const std::size_t k = rank_of(diffs);
    if (k == m) {
      f.basis_ = IntMatrix::identity(m);
    } else {
      // Saturated lattice = integer kernel of the orthogonal complement of the span.
      auto ortho = nullspace(diffs);
      IntMatrix normals(ortho.size(), m);
      for (std::size_t i = 0; i < ortho.size(); ++i) {
        auto prim = primitive_direction(ortho[i]);
        for (std::size_t j = 0; j < m; ++j) normals(i, j) = prim[j];
      }
      f.basis_ = integer_kernel(normals);
    }
    f.gram_solver_ = to_rational(f.basis_.transpose());
    return f;
  }

  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return origin_.dim(); }
  const LatticePoint& origin() const { return origin_; }
  /// Rows are the lattice basis vectors.
  const IntMatrix& basis() const { return basis_; }

  LatticePoint intrinsic(const LatticePoint& p) const {
    RatVector rhs(ambient_dim());
    for (std::size_t j = 0; j < ambient_dim(); ++j) rhs[j] = Rational(p[j] - origin_[j]);
    auto sol = solve_linear(gram_solver_, rhs);
    if (!sol) throw std::invalid_argument("point outside the affine span of the frame");
    LatticePoint out;
    for (const auto& c : *sol) {
      if (denominator_of(c) != 1) throw std::logic_error("frame basis is not saturated");
      out.coords.push_back(numerator_of(c));
    }
    return out;
  }

  LatticePoint ambient(const LatticePoint& c) const {
    LatticePoint p = origin_;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < ambient_dim(); ++j) p.coords[j] += c[i] * basis_(i, j);
    return p;
  }

 private:
  LatticePoint origin_;
  IntMatrix basis_;
  RatMatrix gram_solver_;
};

/// A face of a lattice polytope: the input points lying on it (indices), which
/// of those are vertices, and its affine dimension.
struct PolytopeFace {
  std::vector<std::size_t> points;
  std::vector<std::size_t> vertices;
  int dim = 0;
};

/// A facet in intrinsic coordinates: normal·c <= offset, equality on the facet.
/// normal·c <= offset for intrinsic coordinates c (relative to the frame origin).
struct PolytopeFacet {
  Covector normal;
  Integer offset;
  std::vector<std::size_t> points;
};

/// Exact convex lattice polytope given as the hull of a finite point set.
/// Facets are found by brute-force enumeration of affinely independent point
/// subsets in intrinsic lattice coordinates.
class LatticePolytope {
 public:
  LatticePolytope() = default;

  explicit LatticePolytope(std::vector<LatticePoint> pts) {
    if (pts.empty()) throw std::invalid_argument("lattice polytope needs at least one point");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.front().dim();
    for (const auto& p : pts)
      if (p.dim() != m) throw std::invalid_argument("inconsistent point dimensions");
    points_ = std::move(pts);
    frame_ = LatticeFrame::of(points_);
    intrinsic_.reserve(points_.size());
    for (const auto& p : points_) intrinsic_.push_back(frame_.intrinsic(p));
    build_facets();
    build_faces();
  }

  std::size_t ambient_dim() const { return frame_.ambient_dim(); }
  int dim() const { return static_cast<int>(frame_.dim()); }
  bool full_dimensional() const { return frame_.dim() == frame_.ambient_dim(); }

  /// The generating points (sorted, deduplicated).
  const std::vector<LatticePoint>& points() const { return points_; }
  const std::vector<LatticePoint>& intrinsic_points() const { return intrinsic_; }
  const LatticeFrame& frame() const { return frame_; }

  std::vector<LatticePoint> vertices() const {
    std::vector<LatticePoint> out;
    for (auto i : vertex_ids_) out.push_back(points_[i]);
    return out;
  }
  const std::vector<std::size_t>& vertex_ids() const { return vertex_ids_; }
  const std::vector<PolytopeFacet>& facets() const { return facets_; }

  /// Faces of the given dimension (0..dim()); dim() returns the polytope itself.
  const std::vector<PolytopeFace>& faces(int k) const {
    static const std::vector<PolytopeFace> none;
    if (k < 0 || k > dim()) return none;
    return faces_[static_cast<std::size_t>(k)];
  }

  /// Facet inequality slack of an intrinsic point: offset - normal·c (>= 0 inside).
  Integer slack(const PolytopeFacet& f, const LatticePoint& c) const { return f.offset - pair(f.normal, c); }

  bool contains(const LatticePoint& p) const { return classify(p) >= 0; }
  bool strictly_contains(const LatticePoint& p) const { return classify(p) > 0; }

  /// Outer normal of a facet expressed as an ambient covector. Only meaningful
  /// for full-dimensional polytopes (the frame is then the identity).
  Covector ambient_normal(const PolytopeFacet& f) const {
    if (!full_dimensional()) throw std::logic_error("ambient normals need a full-dimensional polytope");
    return f.normal;
  }

 private:
  // -1 outside, 0 on the relative boundary, 1 in the relative interior.
  int classify(const LatticePoint& p) const {
    if (p.dim() != ambient_dim()) throw std::invalid_argument("point dimension mismatch");
    LatticePoint c;
    try {
      c = frame_.intrinsic(p);
    } catch (const std::invalid_argument&) {
      return -1;
    } catch (const std::logic_error&) {
      return -1;
    }
    if (dim() == 0) return 1;
    int result = 1;
    for (const auto& f : facets_) {
      Integer s = slack(f, c);
      if (s < 0) return -1;
      if (s == 0) result = 0;
    }
    return result;
  }

  void build_facets() {
    const std::size_t k = frame_.dim();
    const std::size_t npts = intrinsic_.size();
    if (k == 0) {
      vertex_ids_ = {0};
      return;
    }
    std::set<std::pair<Covector, Integer>> seen;
    auto add_facet = [&](const Covector& normal, const Integer& offset) {
      if (!seen.insert({normal, offset}).second) return;
      PolytopeFacet f{normal, offset, {}};
      for (std::size_t i = 0; i < npts; ++i)
        if (pair(normal, intrinsic_[i]) == offset) f.points.push_back(i);
      facets_.push_back(std::move(f));
    };
    if (k == 1) {
      add_facet(Covector{-1}, -std::min_element(intrinsic_.begin(), intrinsic_.end())->coords[0]);
      add_facet(Covector{1}, std::max_element(intrinsic_.begin(), intrinsic_.end())->coords[0]);
    } else {
      std::vector<std::vector<bool>> on_facet;
      std::vector<std::size_t> pick(k);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
        if (depth == k) {
          for (const auto& mask : on_facet) {
            bool all = true;
            for (auto i : pick)
              if (!mask[i]) {
                all = false;
                break;
              }
            if (all) return;
          }
          RatMatrix diffs(k - 1, k);
          for (std::size_t r = 1; r < k; ++r)
            for (std::size_t j = 0; j < k; ++j)
              diffs(r - 1, j) = Rational(intrinsic_[pick[r]][j] - intrinsic_[pick[0]][j]);
          auto ns = nullspace(diffs);
          if (ns.size() != 1) return;
          Covector normal(primitive_direction(ns.front()));
          Integer offset = pair(normal, intrinsic_[pick[0]]);
          bool above = false, below = false;
          for (std::size_t i = 0; i < npts; ++i) {
            Integer v = pair(normal, intrinsic_[i]);
            if (v > offset) above = true;
            if (v < offset) below = true;
            if (above && below) return;
          }
          if (above) {
            normal = -normal;
            offset = -offset;
          }
          std::size_t before = facets_.size();
          add_facet(normal, offset);
          if (facets_.size() != before) {
            std::vector<bool> mask(npts, false);
            for (auto i : facets_.back().points) mask[i] = true;
            on_facet.push_back(std::move(mask));
          }
          return;
        }
        for (std::size_t i = start; i + (k - depth) <= npts; ++i) {
          pick[depth] = i;
          rec(depth + 1, i + 1);
        }
      };
      rec(0, 0);
    }
    // A point is a vertex iff the normals of the facets through it have full rank.
    for (std::size_t i = 0; i < npts; ++i) {
      std::vector<std::vector<Rational>> rows;
      for (const auto& f : facets_)
        if (std::binary_search(f.points.begin(), f.points.end(), i)) rows.push_back(to_rational(f.normal.components));
      if (rows.size() < k) continue;
      if (rank_of(RatMatrix::from_rows(rows, k)) == k) vertex_ids_.push_back(i);
    }
  }

  void build_faces() {
    const int k = dim();
    faces_.assign(static_cast<std::size_t>(k) + 1, {});
    std::vector<std::size_t> all(points_.size());
    std::iota(all.begin(), all.end(), 0);
    std::set<std::vector<std::size_t>> sets;
    std::vector<std::vector<std::size_t>> frontier;
    for (const auto& f : facets_)
      if (sets.insert(f.points).second) frontier.push_back(f.points);
    while (!frontier.empty()) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& a : frontier)
        for (const auto& f : facets_) {
          std::vector<std::size_t> meet;
          std::set_intersection(a.begin(), a.end(), f.points.begin(), f.points.end(), std::back_inserter(meet));
          if (meet.empty() || meet == a) continue;
          if (sets.insert(meet).second) next.push_back(meet);
        }
      frontier = std::move(next);
    }
    sets.insert(all);
    for (const auto& s : sets) {
      std::vector<LatticePoint> sub;
      for (auto i : s) sub.push_back(points_[i]);
      PolytopeFace face;
      face.points = s;
      face.dim = affine_rank(sub);
      for (auto v : vertex_ids_)
        if (std::binary_search(s.begin(), s.end(), v)) face.vertices.push_back(v);
      faces_[static_cast<std::size_t>(face.dim)].push_back(std::move(face));
    }
  }

  std::vector<LatticePoint> points_;
  std::vector<LatticePoint> intrinsic_;
  LatticeFrame frame_;
  std::vector<std::size_t> vertex_ids_;
  std::vector<PolytopeFacet> facets_;
  std::vector<std::vector<PolytopeFace>> faces_;
};

namespace detail {

// dim! * volume in the polytope's own lattice, by coning over facets from a vertex.
inline Integer intrinsic_volume(const LatticePolytope& p) {
  const int k = p.dim();
  if (k == 0) return 1;
  const auto& c = p.intrinsic_points();
  if (k == 1) {
    auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    return hi->coords[0] - lo->coords[0];
  }
  const std::size_t apex = p.vertex_ids().front();
  Integer total = 0;
  for (const auto& f : p.facets()) {
    if (std::binary_search(f.points.begin(), f.points.end(), apex)) continue;
    std::vector<LatticePoint> sub;
    for (auto i : f.points) sub.push_back(c[i]);
    total += p.slack(f, c[apex]) * intrinsic_volume(LatticePolytope(sub));
  }
  return total;
}

}  // namespace detail

/// (n+1)! times the Euclidean volume; 0 for polytopes that are not full-dimensional.
inline Integer normalized_volume(const LatticePolytope& p) {
  if (!p.full_dimensional()) return 0;
  return detail::intrinsic_volume(p);
}

/// Normalized volume measured in the lattice of the polytope's own affine span.
inline Integer intrinsic_normalized_volume(const LatticePolytope& p) { return detail::intrinsic_volume(p); }

/// k! * volume of the lattice simplex spanned by the given k+1 points, measured in
/// the lattice of its affine span (gcd of the maximal minors of the edge matrix).
inline Integer simplex_intrinsic_volume(const std::vector<LatticePoint>& pts) {
  if (pts.size() < 2) return 1;
  const std::size_t k = pts.size() - 1, m = pts.front().dim();
  if (k > m) return 0;
  IntMatrix edges(k, m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) edges(i, j) = pts[i + 1][j] - pts[0][j];
  Integer g = 0;
  std::vector<std::size_t> cols(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == k) {
      IntMatrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = edges(i, cols[j]);
      g = gcd_of(g, determinant(minor));
      return;
    }
    for (std::size_t c = start; c + (k - depth) <= m; ++c) {
      cols[depth] = c;
      rec(depth + 1, c + 1);
    }
  };
  rec(0, 0);
  return g;
}

/// All lattice points of the polytope (bounding-box enumeration).
inline std::vector<LatticePoint> lattice_points(const LatticePolytope& p, bool interior_only = false) {
  const std::size_t m = p.ambient_dim();
  IntVector lo = p.points().front().coords, hi = lo;
  for (const auto& q : p.points())
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = std::min(lo[j], q[j]);
      hi[j] = std::max(hi[j], q[j]);
    }
  std::vector<LatticePoint> out;
  LatticePoint cur;
  cur.coords.assign(m, Integer(0));
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == m) {
      if (interior_only ? p.strictly_contains(cur) : p.contains(cur)) out.push_back(cur);
      return;
    }
    for (Integer x = lo[j]; x <= hi[j]; ++x) {
      cur.coords[j] = x;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

/// Lattice points strictly inside every facet inequality (relative interior).
inline std::vector<LatticePoint> interior_lattice_points(const LatticePolytope& p) { return lattice_points(p, true); }

/// The dilated standard simplex {x_j >= 0, sum x_j <= d} in Z^{n+1}.
inline LatticePolytope dilated_simplex(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("dilated_simplex needs n >= 1 and d >= 1");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  std::vector<LatticePoint> verts;
  verts.emplace_back(IntVector(m, Integer(0)));
  for (std::size_t i = 0; i < m; ++i) {
    IntVector c(m, Integer(0));
    c[i] = d;
    verts.emplace_back(std::move(c));
  }
  return LatticePolytope(std::move(verts));
}

/// x -> M x + b with M an integer matrix of determinant +-1.
class AffineUnimodularMap {
 public:
  AffineUnimodularMap() = default;
  AffineUnimodularMap(IntMatrix matrix, IntVector translation)
      : matrix_(std::move(matrix)), translation_(std::move(translation)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != translation_.size())
      throw std::invalid_argument("affine map shape mismatch");
    Integer det = determinant(matrix_);
    if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular (det " + det.str() + ")");
  }

  static AffineUnimodularMap identity(std::size_t m) {
    return AffineUnimodularMap(IntMatrix::identity(m), IntVector(m, Integer(0)));
  }

  const IntMatrix& matrix() const { return matrix_; }
  const IntVector& translation() const { return translation_; }
  std::size_t dim() const { return translation_.size(); }
  Integer determinant_sign() const { return determinant(matrix_); }

  LatticePoint operator()(const LatticePoint& p) const {
    LatticePoint r;
    r.coords = matrix_ * p.coords;
    for (std::size_t i = 0; i < dim(); ++i) r.coords[i] += translation_[i];
    return r;
  }

  RatVector operator()(const RatVector& p) const {
    RatVector r = to_rational(matrix_) * p;
    for (std::size_t i = 0; i < dim(); ++i) r[i] += translation_[i];
    return r;
  }

  /// Linear part only (for direction vectors).
  RatVector linear(const RatVector& v) const { return to_rational(matrix_) * v; }

  AffineUnimodularMap inverse() const {
    // Integer inverse via the adjugate; det is +-1.
    const std::size_t m = dim();
    Integer det = determinant(matrix_);
    IntMatrix inv(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        IntMatrix minor(m - 1, m - 1);
        for (std::size_t r = 0, rr = 0; r < m; ++r) {
          if (r == j) continue;
          for (std::size_t c = 0, cc = 0; c < m; ++c) {
            if (c == i) continue;
            minor(rr, cc++) = matrix_(r, c);
          }
          ++rr;
        }
        Integer cof = determinant(minor);
        if ((i + j) % 2 == 1) cof = -cof;
        inv(i, j) = cof * det;
      }
    IntVector t = inv * translation_;
    for (auto& x : t) x = -x;
    return AffineUnimodularMap(inv, t);
  }

  friend AffineUnimodularMap compose(const AffineUnimodularMap& outer, const AffineUnimodularMap& inner) {
    IntVector t = outer.matrix_ * inner.translation_;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += outer.translation_[i];
    return AffineUnimodularMap(outer.matrix_ * inner.matrix_, t);
  }

  LatticePolytope apply(const LatticePolytope& p) const {
    std::vector<LatticePoint> img;
    for (const auto& q : p.points()) img.push_back((*this)(q));
    return LatticePolytope(std::move(img));
  }

 private:
  IntMatrix matrix_;
  IntVector translation_;
};

}  // namespace tropix
