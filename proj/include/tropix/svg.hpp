#pragma once

// Deterministic SVG drawings of plane complexes, amoeba samples and sign
// membranes. Every coordinate is printed with six fixed decimals.

#include "tropix/dequantization.hpp"
#include "tropix/patchwork.hpp"

#include <array>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropix {

struct Viewport {
  double x0 = -5, y0 = -5, x1 = 5, y1 = 5;

  static Viewport parse(const std::string& text) {
    Viewport v;
    std::array<double, 4> xs{};
    std::istringstream in(text);
    std::string part;
    std::size_t i = 0;
    while (std::getline(in, part, ',')) {
      if (i == 4) throw std::invalid_argument("viewport must look like x0,y0,x1,y1");
      try {
        xs[i++] = std::stod(part);
      } catch (const std::exception&) {
        throw std::invalid_argument("viewport must look like x0,y0,x1,y1");
      }
    }
    if (i != 4) throw std::invalid_argument("viewport must look like x0,y0,x1,y1");
    v = {xs[0], xs[1], xs[2], xs[3]};
    if (!(v.x1 > v.x0) || !(v.y1 > v.y0)) throw std::invalid_argument("viewport must have x1 > x0 and y1 > y0");
    return v;
  }
};

/// Linear map R^m -> R^2 used to draw complexes in higher ambient dimension.
struct Projection {
  std::array<std::vector<double>, 2> rows;
};

struct SvgLayers {
  /// Top cells to highlight, e.g. a cycle from membrane_base_class.
  const std::map<std::size_t, Integer>* highlight = nullptr;
  const std::vector<AmoebaSample>* samples = nullptr;
  std::optional<Projection> projection;
};

namespace detail {

inline std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x == 0 ? 0.0 : x);
  return buf;
}

using Point2 = std::array<double, 2>;

/// Clips p + u·d, u in [lo, hi], to the box; nullopt when nothing is visible.
inline std::optional<std::array<Point2, 2>> clip(Point2 p, Point2 d, double lo, double hi, const Viewport& vp) {
  const std::array<double, 4> q{-d[0], d[0], -d[1], d[1]};
  const std::array<double, 4> r{p[0] - vp.x0, vp.x1 - p[0], p[1] - vp.y0, vp.y1 - p[1]};
  for (std::size_t i = 0; i < 4; ++i) {
    if (q[i] == 0) {
      if (r[i] < 0) return std::nullopt;
      continue;
    }
    const double u = r[i] / q[i];
    if (q[i] < 0)
      lo = std::max(lo, u);
    else
      hi = std::min(hi, u);
  }
  if (lo > hi) return std::nullopt;
  return std::array<Point2, 2>{Point2{p[0] + lo * d[0], p[1] + lo * d[1]}, Point2{p[0] + hi * d[0], p[1] + hi * d[1]}};
}

class Canvas {
 public:
  explicit Canvas(const Viewport& vp) : vp_(vp) {
    width_ = 600;
    height_ = width_ * (vp.y1 - vp.y0) / (vp.x1 - vp.x0);
  }

  double px(double x) const { return (x - vp_.x0) / (vp_.x1 - vp_.x0) * width_; }
  double py(double y) const { return (vp_.y1 - y) / (vp_.y1 - vp_.y0) * height_; }

  void open_layer(const std::string& id) { body_ << "<g id=\"" << id << "\">\n"; }
  void close_layer() { body_ << "</g>\n"; }

  void line(const Point2& a, const Point2& b, const std::string& cls) {
    body_ << "<line class=\"" << cls << "\" x1=\"" << fixed(px(a[0])) << "\" y1=\"" << fixed(py(a[1])) << "\" x2=\""
          << fixed(px(b[0])) << "\" y2=\"" << fixed(py(b[1])) << "\"/>\n";
  }
  void dot(const Point2& a, double r, const std::string& cls) {
    if (a[0] < vp_.x0 || a[0] > vp_.x1 || a[1] < vp_.y0 || a[1] > vp_.y1) return;
    body_ << "<circle class=\"" << cls << "\" cx=\"" << fixed(px(a[0])) << "\" cy=\"" << fixed(py(a[1])) << "\" r=\"" << fixed(r)
          << "\"/>\n";
  }
  void label(const Point2& a, const std::string& text, const std::string& cls) {
    body_ << "<text class=\"" << cls << "\" x=\"" << fixed(px(a[0]) + 4) << "\" y=\"" << fixed(py(a[1]) - 4) << "\">" << text
          << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width_) << "\" height=\"" << fixed(height_)
        << "\" viewBox=\"0 0 " << fixed(width_) << " " << fixed(height_) << "\">\n"
        << "<style>.edge{stroke:#222;stroke-width:1.5}.cycle{stroke:#c0392b;stroke-width:3.5}"
        << ".mesh{stroke:#aaa;stroke-width:1}.membrane{stroke:#c0392b;stroke-width:2.5}"
        << ".vertex{fill:#222}.sample{fill:#2e86c1;fill-opacity:0.5}.plus{fill:#27ae60}.minus{fill:#c0392b}"
        << ".weight{font-family:sans-serif;font-size:12px}</style>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fixed(width_) << "\" height=\"" << fixed(height_) << "\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  Viewport vp_;
  double width_ = 0, height_ = 0;
  std::ostringstream body_;
};

}  // namespace detail

/// Draws the 1-skeleton of a complex: in the plane directly, otherwise through
/// an explicit projection. Rays and lines are clipped to the viewport, which
/// defaults to the vertices' bounding box with a margin.
inline std::string render_complex_svg(const TropicalComplex& cx, std::optional<Viewport> viewport = std::nullopt, const SvgLayers& layers = {}) {
  const std::size_t m = cx.ambient_dim;
  if (m != 2 && !layers.projection) throw std::invalid_argument("unsupported dimension without projection");
  if (layers.projection)
    for (const auto& row : layers.projection->rows)
      if (row.size() != m) throw std::invalid_argument("projection does not match the ambient dimension");
  auto project = [&](const std::vector<double>& x) -> detail::Point2 {
    if (!layers.projection) return {x[0], x[1]};
    detail::Point2 out{0, 0};
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t j = 0; j < m; ++j) out[r] += layers.projection->rows[r][j] * x[j];
    return out;
  };
  auto at = [&](const RatVector& y) {
    std::vector<double> x;
    for (const auto& c : y) x.push_back(to_double(c));
    return project(x);
  };
  auto along = [&](const IntVector& d) {
    std::vector<double> x;
    for (const auto& c : d) x.push_back(to_double(c));
    return project(x);
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!viewport) {
    Viewport box{inf, inf, -inf, -inf};
    for (auto v : cx.cells_of_dim(0)) {
      auto p = at(cx.cells[v].point);
      box = {std::min(box.x0, p[0]), std::min(box.y0, p[1]), std::max(box.x1, p[0]), std::max(box.y1, p[1])};
    }
    if (box.x0 > box.x1) box = {0, 0, 0, 0};
    const double margin = std::max({2.0, (box.x1 - box.x0) / 4, (box.y1 - box.y0) / 4});
    viewport = Viewport{box.x0 - margin, box.y0 - margin, box.x1 + margin, box.y1 + margin};
  }
  const Viewport& vp = *viewport;

  detail::Canvas canvas(vp);
  if (layers.samples) {
    canvas.open_layer("samples");
    for (const auto& s : *layers.samples) canvas.dot({s.x, s.y}, 1.2, "sample");
    canvas.close_layer();
  }
  canvas.open_layer("complex");
  std::vector<std::pair<detail::Point2, Integer>> weights;
  for (auto e : cx.cells_of_dim(1)) {
    const auto& cell = cx.cells[e];
    std::optional<std::array<detail::Point2, 2>> seg;
    if (cell.bounded) {
      if (cell.vertices.size() != 2) throw std::invalid_argument("bounded edge without two vertices");
      auto a = at(cx.cells[cell.vertices[0]].point), b = at(cx.cells[cell.vertices[1]].point);
      seg = detail::clip(a, {b[0] - a[0], b[1] - a[1]}, 0, 1, vp);
    } else {
      if (cell.recession.empty()) throw std::invalid_argument("unbounded edge without recession direction");
      auto d = along(cell.recession.front());
      if (cell.vertices.size() == 1)
        seg = detail::clip(at(cx.cells[cell.vertices[0]].point), d, 0, inf, vp);
      else
        seg = detail::clip(at(cell.point), d, -inf, inf, vp);
    }
    if (!seg) continue;
    bool hot = layers.highlight && layers.highlight->count(e) && cell.dim == cx.top_dim();
    canvas.line((*seg)[0], (*seg)[1], hot ? "cycle" : "edge");
    if (cell.weight && *cell.weight >= 2)
      weights.push_back({{((*seg)[0][0] + (*seg)[1][0]) / 2, ((*seg)[0][1] + (*seg)[1][1]) / 2}, *cell.weight});
  }
  for (auto v : cx.cells_of_dim(0)) canvas.dot(at(cx.cells[v].point), 2.5, "vertex");
  for (const auto& [p, w] : weights) canvas.label(p, w.str(), "weight");
  canvas.close_layer();
  return canvas.str();
}

/// Triangulation of a plane Newton polygon with signed vertices and the membrane on top.
inline std::string render_membrane_svg(const RegularSubdivision& s, const SignMembrane& mem, std::optional<Viewport> vp = std::nullopt) {
  if (s.ambient_dim() != 2) throw std::invalid_argument("membrane drawings need a plane triangulation");
  const auto& pts = s.lifting().points;
  if (!vp) {
    Viewport box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
    for (const auto& p : pts) {
      box.x0 = std::min(box.x0, to_double(p[0]));
      box.y0 = std::min(box.y0, to_double(p[1]));
      box.x1 = std::max(box.x1, to_double(p[0]));
      box.y1 = std::max(box.y1, to_double(p[1]));
    }
    vp = Viewport{box.x0 - 0.5, box.y0 - 0.5, box.x1 + 0.5, box.y1 + 0.5};
  }
  auto at = [&](std::size_t i) { return detail::Point2{to_double(pts[i][0]), to_double(pts[i][1])}; };
  detail::Canvas canvas(*vp);
  canvas.open_layer("triangulation");
  for (auto e : s.faces_of_dim(1)) {
    const auto& f = s.faces()[e];
    canvas.line(at(f.vertices[0]), at(f.vertices[1]), "mesh");
  }
  for (auto v : s.faces_of_dim(0)) {
    const auto i = s.faces()[v].vertices.front();
    canvas.dot(at(i), 4, mem.signs.signs.at(i) < 0 ? "minus" : "plus");
  }
  canvas.close_layer();
  canvas.open_layer("membrane");
  for (auto f : mem.facets) {
    const auto& c = mem.cells[f];
    if (c.vertices.size() != 2) continue;
    canvas.line({to_double(c.vertices[0][0]), to_double(c.vertices[0][1])}, {to_double(c.vertices[1][0]), to_double(c.vertices[1][1])},
                "membrane");
  }
  canvas.close_layer();
  return canvas.str();
}

}  // namespace tropix
