#pragma once

// Canonical JSON and CSV for the toolkit's objects. Objects serialize with
// sorted keys, rationals as "p/q" strings and lattice data as integer arrays,
// so emitting what was read reproduces the input byte for byte.

#include "tropix/dequantization.hpp"
#include "tropix/homology.hpp"
#include "tropix/pants.hpp"
#include "tropix/patchwork.hpp"

#include "json.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropix::io {

using Json = nlohmann::json;

/// Malformed input: where it happened (JSON path, and line for syntax errors).
struct InputError : std::runtime_error {
  std::string field;
  std::size_t line = 0;
  InputError(const std::string& message, std::string where, std::size_t at_line = 0)
      : std::runtime_error(message), field(std::move(where)), line(at_line) {}
};

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw InputError(std::string("malformed JSON: ") + e.what(), "", line);
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Output files wrap the payload as {"command", "seed", "result"}; readers accept either form.
inline const Json& payload(const Json& j) {
  if (j.is_object() && j.contains("result")) return j.at("result");
  return j;
}

inline Json envelope(const std::string& command, std::uint64_t seed, Json result) {
  return Json{{"command", command}, {"seed", seed}, {"result", std::move(result)}};
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError("expected an object", path);
  auto it = j.find(key);
  if (it == j.end()) throw InputError("missing field '" + key + "'", path);
  return *it;
}

inline const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError("expected an array", path);
  return j;
}

// ---- scalars -------------------------------------------------------------

inline Json to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return x.convert_to<std::int64_t>();
  return x.str();
}

inline Integer integer_of(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_integer(j.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError(e.what(), path);
    }
  }
  throw InputError("expected an integer", path);
}

inline Json to_json(const Rational& r) { return format_rational(r); }

inline Rational rational_of(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw InputError("expected a rational string \"p/q\"", path);
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw InputError(e.what(), path);
  }
}

inline std::size_t index_of(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw InputError("expected a non-negative index", path);
  return j.get<std::size_t>();
}

inline double real_of(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError("expected a number", path);
  return j.get<double>();
}

// ---- vectors -------------------------------------------------------------

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}
inline Json to_json(const LatticePoint& p) { return to_json(p.coords); }
inline Json to_json(const Covector& c) { return to_json(c.components); }

inline Json to_json(const RatVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const std::vector<std::size_t>& v) { return Json(v); }

inline IntVector int_vector_of(const Json& j, const std::string& path) {
  IntVector out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) out.push_back(integer_of(x, path + "[" + std::to_string(i++) + "]"));
  return out;
}

inline LatticePoint point_of(const Json& j, const std::string& path) { return LatticePoint(int_vector_of(j, path)); }

inline RatVector rat_vector_of(const Json& j, const std::string& path) {
  RatVector out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) out.push_back(rational_of(x, path + "[" + std::to_string(i++) + "]"));
  return out;
}

inline std::vector<std::size_t> indices_of(const Json& j, const std::string& path) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) out.push_back(index_of(x, path + "[" + std::to_string(i++) + "]"));
  return out;
}

inline Json to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

// ---- liftings and subdivisions ------------------------------------------

inline Json to_json(const LiftingFunction& v) {
  Json pts = Json::array(), vals = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    pts.push_back(to_json(v.points[i]));
    vals.push_back(to_json(v.values[i]));
  }
  return Json{{"ambient_dim", v.ambient_dim()}, {"points", pts}, {"values", vals}};
}

inline LiftingFunction lifting_of(const Json& j, const std::string& path = "lifting") {
  const auto& pts = array_at(field(j, "points", path), path + ".points");
  const auto& vals = array_at(field(j, "values", path), path + ".values");
  std::vector<LatticePoint> points;
  std::vector<Rational> values;
  for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(point_of(pts[i], path + ".points[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(rational_of(vals[i], path + ".values[" + std::to_string(i) + "]"));
  if (j.contains("ambient_dim"))
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i].dim() != index_of(j.at("ambient_dim"), path + ".ambient_dim"))
        throw InputError("point dimension differs from ambient_dim", path + ".points[" + std::to_string(i) + "]");
  try {
    return LiftingFunction(std::move(points), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what(), path);
  }
}

inline Json to_json(const RegularSubdivision& s) {
  Json cells = Json::array();
  for (const auto& c : s.cells()) cells.push_back(to_json(c.points));
  auto report = is_unimodular(s);
  return Json{{"cells", cells}, {"lifting", to_json(s.lifting())}, {"unimodular", report.unimodular}};
}

// ---- complexes -----------------------------------------------------------

inline Json to_json(const LinearConstraint& c) { return Json{{"normal", to_json(c.normal)}, {"offset", to_json(c.offset)}}; }

inline Json to_json(const TropicalComplex& cx) {
  Json cells = Json::array();
  for (const auto& c : cx.cells) {
    Json e = Json::array(), in = Json::array(), rec = Json::array();
    for (const auto& x : c.equalities) e.push_back(to_json(x));
    for (const auto& x : c.inequalities) in.push_back(to_json(x));
    for (const auto& r : c.recession) rec.push_back(to_json(r));
    Json cell{{"bounded", c.bounded},
              {"cofacets", to_json(c.cofacets)},
              {"dim", c.dim},
              {"dual_points", to_json(c.dual_points)},
              {"dual_vertices", to_json(c.dual_vertices)},
              {"equalities", e},
              {"facets", to_json(c.facets)},
              {"inequalities", in},
              {"point", to_json(c.point)},
              {"recession", rec},
              {"vertices", to_json(c.vertices)}};
    if (c.weight) cell["weight"] = to_json(*c.weight);
    if (c.covector) cell["covector"] = to_json(*c.covector);
    if (c.dual_edge) cell["dual_edge"] = Json::array({c.dual_edge->first, c.dual_edge->second});
    cells.push_back(std::move(cell));
  }
  Json out{{"ambient_dim", cx.ambient_dim}, {"cells", cells}};
  if (cx.source) out["lifting"] = to_json(*cx.source);
  return out;
}

inline std::vector<LinearConstraint> constraints_of(const Json& j, const std::string& path) {
  std::vector<LinearConstraint> out;
  std::size_t i = 0;
  for (const auto& x : array_at(j, path)) {
    const auto p = path + "[" + std::to_string(i++) + "]";
    out.push_back({Covector(int_vector_of(field(x, "normal", p), p + ".normal")), rational_of(field(x, "offset", p), p + ".offset")});
  }
  return out;
}

/// Reads a complex as written; the dual subdivision is recomputed from the
/// embedded lifting (when present) but the cells are taken verbatim.
inline TropicalComplex complex_of(const Json& j, const std::string& path = "complex") {
  TropicalComplex cx;
  cx.ambient_dim = index_of(field(j, "ambient_dim", path), path + ".ambient_dim");
  const auto& cells = array_at(field(j, "cells", path), path + ".cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = path + ".cells[" + std::to_string(i) + "]";
    const auto& x = cells[i];
    TropicalCell c;
    c.dim = static_cast<int>(integer_of(field(x, "dim", p), p + ".dim"));
    c.dual_points = indices_of(field(x, "dual_points", p), p + ".dual_points");
    c.dual_vertices = indices_of(field(x, "dual_vertices", p), p + ".dual_vertices");
    c.equalities = constraints_of(field(x, "equalities", p), p + ".equalities");
    c.inequalities = constraints_of(field(x, "inequalities", p), p + ".inequalities");
    if (!field(x, "bounded", p).is_boolean()) throw InputError("expected a boolean", p + ".bounded");
    c.bounded = x.at("bounded").get<bool>();
    c.vertices = indices_of(field(x, "vertices", p), p + ".vertices");
    std::size_t r = 0;
    for (const auto& ray : array_at(field(x, "recession", p), p + ".recession"))
      c.recession.push_back(int_vector_of(ray, p + ".recession[" + std::to_string(r++) + "]"));
    if (x.contains("weight")) c.weight = integer_of(x.at("weight"), p + ".weight");
    if (x.contains("covector")) c.covector = Covector(int_vector_of(x.at("covector"), p + ".covector"));
    if (x.contains("dual_edge")) {
      auto e = indices_of(x.at("dual_edge"), p + ".dual_edge");
      if (e.size() != 2) throw InputError("dual_edge needs two indices", p + ".dual_edge");
      c.dual_edge = std::pair{e[0], e[1]};
    }
    c.point = rat_vector_of(field(x, "point", p), p + ".point");
    if (c.point.size() != cx.ambient_dim) throw InputError("point dimension differs from ambient_dim", p + ".point");
    c.facets = indices_of(field(x, "facets", p), p + ".facets");
    c.cofacets = indices_of(field(x, "cofacets", p), p + ".cofacets");
    for (auto k : c.facets)
      if (k >= cells.size()) throw InputError("cell index out of range", p + ".facets");
    for (auto k : c.cofacets)
      if (k >= cells.size()) throw InputError("cell index out of range", p + ".cofacets");
    for (auto k : c.vertices)
      if (k >= cells.size()) throw InputError("cell index out of range", p + ".vertices");
    cx.cells.push_back(std::move(c));
  }
  if (j.contains("lifting")) {
    cx.source = lifting_of(j.at("lifting"), path + ".lifting");
    cx.subdivision = lower_hull_subdivision(*cx.source);
  }
  return cx;
}

inline Json to_json(const BalanceReport& r) {
  Json out{{"balanced", r.balanced}};
  if (r.failing_cell) {
    out["failing_cell"] = *r.failing_cell;
    out["residual"] = to_json(r.residual);
  }
  return out;
}

// ---- region graphs -------------------------------------------------------

inline Json to_json(const RegionGraph& g) {
  Json walls = Json::array(), labels = Json::array();
  for (const auto& w : g.walls)
    walls.push_back(Json{{"covector", to_json(w.covector)}, {"from", w.from}, {"offset", to_json(w.offset)}, {"to", w.to}});
  for (const auto& l : g.labels) labels.push_back(to_json(l));
  return Json{{"labels", labels}, {"reference", g.reference}, {"region_count", g.region_count}, {"walls", walls}};
}

inline RegionGraph region_graph_of(const Json& j, const std::string& path = "region_graph") {
  RegionGraph g;
  g.region_count = index_of(field(j, "region_count", path), path + ".region_count");
  if (j.contains("reference")) g.reference = index_of(j.at("reference"), path + ".reference");
  if (j.contains("labels")) {
    std::size_t i = 0;
    for (const auto& l : array_at(j.at("labels"), path + ".labels"))
      g.labels.push_back(point_of(l, path + ".labels[" + std::to_string(i++) + "]"));
  }
  const auto& walls = array_at(field(j, "walls", path), path + ".walls");
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto p = path + ".walls[" + std::to_string(i) + "]";
    RegionWall w;
    w.from = index_of(field(walls[i], "from", p), p + ".from");
    w.to = index_of(field(walls[i], "to", p), p + ".to");
    w.covector = Covector(int_vector_of(field(walls[i], "covector", p), p + ".covector"));
    w.offset = rational_of(field(walls[i], "offset", p), p + ".offset");
    g.walls.push_back(std::move(w));
  }
  return g;
}

// ---- pants, homology, invariants ----------------------------------------

inline Json to_json(const HomologyGroups& h) {
  Json torsion = Json::array();
  for (const auto& t : h.torsion) {
    Json row = Json::array();
    for (const auto& x : t) row.push_back(to_json(x));
    torsion.push_back(row);
  }
  return Json{{"betti", h.betti}, {"torsion", torsion}};
}

inline Json to_json(const InvariantReport& r) {
  Json out{{"d", r.d}, {"n", r.n}, {"p_g", to_json(r.p_g)}, {"chi", nullptr}, {"sigma", nullptr}};
  if (r.chi) out["chi"] = to_json(*r.chi);
  if (r.sigma) out["sigma"] = to_json(*r.sigma);
  return out;
}

inline Json decomposition_json(const TropicalComplex& cx) {
  auto pieces = primitive_pieces(cx);
  Json table = Json::array();
  for (const auto& p : pieces) {
    auto norm = normalize_piece(p);
    Json simplex = Json::array();
    for (const auto& q : p.dual_simplex) simplex.push_back(to_json(q));
    table.push_back(Json{{"chart", to_json(norm.chart)},
                         {"dual_simplex", simplex},
                         {"translate", to_json(norm.translate)},
                         {"verified", norm.verified},
                         {"vertex", p.vertex},
                         {"vertex_point", to_json(p.vertex_point)}});
  }
  const Integer volume = normalized_volume(LatticePolytope(cx.source->points));
  return Json{{"normalized_volume", to_json(volume)}, {"pieces", pieces.size()}, {"table", table}};
}

// ---- Puiseux input -------------------------------------------------------

inline Json to_json(const PuiseuxSeries& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms())
    terms.push_back(Json{{"exp", to_json(t.exponent)}, {"im", t.coefficient.imag()}, {"re", t.coefficient.real()}});
  return Json{{"terms", terms}, {"trunc", to_json(s.truncation())}};
}

inline PuiseuxSeries series_of(const Json& j, const std::string& path) {
  std::vector<PuiseuxTerm> terms;
  const auto& ts = array_at(field(j, "terms", path), path + ".terms");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto p = path + ".terms[" + std::to_string(i) + "]";
    const double re = real_of(field(ts[i], "re", p), p + ".re");
    const double im = ts[i].contains("im") ? real_of(ts[i].at("im"), p + ".im") : 0.0;
    terms.push_back({rational_of(field(ts[i], "exp", p), p + ".exp"), Complex(re, im)});
  }
  return PuiseuxSeries(std::move(terms), rational_of(field(j, "trunc", path), path + ".trunc"));
}

inline Json to_json(const PuiseuxPolynomial& f) {
  Json terms = Json::array();
  for (const auto& [j, a] : f.terms) terms.push_back(Json{{"coefficient", to_json(a)}, {"exponent", to_json(j)}});
  return Json{{"terms", terms}};
}

inline PuiseuxPolynomial puiseux_polynomial_of(const Json& j, const std::string& path = "polynomial") {
  PuiseuxPolynomial f;
  const auto& ts = array_at(field(j, "terms", path), path + ".terms");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto p = path + ".terms[" + std::to_string(i) + "]";
    f.terms.push_back({point_of(field(ts[i], "exponent", p), p + ".exponent"), series_of(field(ts[i], "coefficient", p), p + ".coefficient")});
  }
  return f;
}

inline Json to_json(const KapranovResult& k) {
  Json trop = Json::array();
  for (const auto& t : k.poly.terms) trop.push_back(Json{{"coefficient", t.coefficient}, {"exponent", to_json(t.exponent)}});
  Json out{{"complex", to_json(k.complex)}, {"lifting", to_json(k.lifting)}, {"tropical", trop}};
  if (k.complex.ambient_dim == 1) {
    Json bps = Json::array();
    for (const auto& [x, w] : k.breakpoints()) bps.push_back(Json{{"point", to_json(x)}, {"weight", to_json(w)}});
    out["breakpoints"] = bps;
  }
  return out;
}

// ---- amoeba curves -------------------------------------------------------

struct CurveInput {
  LiftingFunction lifting;
  std::vector<Complex> coefficients;
};

/// {"lifting": ..., "coefficients": [[re, im], ...]} in the lifting's point order.
inline CurveInput curve_of(const Json& j, const std::string& path = "curve") {
  CurveInput c;
  c.lifting = lifting_of(field(j, "lifting", path), path + ".lifting");
  const auto& cs = array_at(field(j, "coefficients", path), path + ".coefficients");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto p = path + ".coefficients[" + std::to_string(i) + "]";
    if (cs[i].is_number()) {
      c.coefficients.emplace_back(cs[i].get<double>(), 0.0);
    } else {
      if (!cs[i].is_array() || cs[i].size() != 2) throw InputError("expected [re, im]", p);
      c.coefficients.emplace_back(real_of(cs[i][0], p + "[0]"), real_of(cs[i][1], p + "[1]"));
    }
  }
  if (c.coefficients.size() != c.lifting.size()) throw InputError("one coefficient per lifting point is required", path + ".coefficients");
  return c;
}

inline std::string format_fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x == 0 ? 0.0 : x);
  return buf;
}

/// CSV with a comment header carrying the run parameters.
inline std::string samples_csv(const std::vector<AmoebaSamples>& runs, std::uint64_t seed) {
  std::ostringstream out;
  out << "# amoeba-sample seed=" << seed;
  if (!runs.empty()) out << " grid=" << runs.front().grid.radial << "x" << runs.front().grid.angular;
  out << "\n";
  out << "t,log_t_z1,log_t_z2,in_tube\n";
  for (const auto& run : runs)
    for (const auto& s : run.points) out << run.t << "," << format_fixed(s.x) << "," << format_fixed(s.y) << "," << (s.in_tube ? 1 : 0) << "\n";
  return out.str();
}

/// Reads the (x, y) columns back from samples_csv output.
inline std::vector<AmoebaSample> samples_of_csv(const std::string& text) {
  std::vector<AmoebaSample> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
    std::istringstream row(line);
    std::string t, x, y, flag;
    if (!std::getline(row, t, ',') || !std::getline(row, x, ',') || !std::getline(row, y, ',') || !std::getline(row, flag))
      throw InputError("expected four CSV columns", "samples", number);
    try {
      out.push_back({std::stod(x), std::stod(y), flag == "1"});
    } catch (const std::exception&) {
      throw InputError("non-numeric CSV field", "samples", number);
    }
  }
  return out;
}

// ---- patchworking --------------------------------------------------------

inline Json to_json(const SignMembrane& m) {
  Json cells = Json::array();
  for (const auto& c : m.cells) {
    Json edges = Json::array(), verts = Json::array();
    for (const auto& [a, b] : c.crossed_edges) edges.push_back(Json::array({a, b}));
    for (const auto& v : c.vertices) verts.push_back(to_json(v));
    cells.push_back(Json{{"crossed_edges", edges}, {"dim", c.dim}, {"face", c.face}, {"vertices", verts}});
  }
  Json adjacency = Json::array();
  for (const auto& [a, b] : m.adjacency) adjacency.push_back(Json::array({a, b}));
  return Json{{"adjacency", adjacency},
              {"cells", cells},
              {"facets", to_json(m.facets)},
              {"n", m.n},
              {"ridges", to_json(m.ridges)},
              {"signs", m.signs.signs}};
}

inline Json to_json(const SphereReport& r) {
  return Json{{"closed", r.closed}, {"connected", r.connected}, {"euler", to_json(r.euler)}, {"sphere_evidence", r.sphere_evidence}};
}

inline Json to_json(const BaseCycle& z) {
  Json chain = Json::array();
  for (const auto& [c, x] : z.chain) chain.push_back(Json{{"cell", c}, {"coefficient", to_json(x)}});
  return Json{{"chain", chain}, {"is_cycle", z.is_cycle}, {"vertex", to_json(z.vertex)}};
}

}  // namespace tropix::io
