#pragma once

// Maslov dequantization, amoebas of plane curves, Puiseux series with their
// valuation and phase, Kapranov tropicalization and the phase limit of a line.
//
// Series are in a small parameter t; numerically they are evaluated at
// t = 1/T with T large, so log_T|b(1/T)| tends to val(b) = -(lowest exponent).

#include "tropix/complex.hpp"


#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropix {

using Complex = std::complex<double>;

inline constexpr double kInfiniteT = std::numeric_limits<double>::infinity();

inline void check_semiring_parameter(double t) {
  if (!(t > 1.0)) throw std::invalid_argument("semiring parameter t must exceed 1");
}

/// x ⊕_t y = log_t(t^x + t^y); max at t = ∞.
inline double t_plus(double x, double y, double t) {
  check_semiring_parameter(t);
  const double hi = std::max(x, y), lo = std::min(x, y);
  if (std::isinf(t) || std::isinf(lo)) return hi;
  return hi + std::log1p(std::pow(t, lo - hi)) / std::log(t);
}

/// Folded ⊕_t over a nonempty list.
inline double t_sum(const std::vector<double>& xs, double t) {
  if (xs.empty()) throw std::invalid_argument("t_sum of an empty list");
  check_semiring_parameter(t);
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(t)) return hi;
  double acc = 0;
  for (double x : xs) acc += std::pow(t, x - hi);
  return hi + std::log(acc) / std::log(t);
}

/// The semiring R_t: ⊕ = t_plus, ⊙ = ordinary addition.
struct MaslovSemiring {
  double t = kInfiniteT;

  double add(double x, double y) const { return t_plus(x, y, t); }
  double mul(double x, double y) const { return x + y; }
};

struct TropicalTerm {
  LatticePoint exponent;
  double coefficient = 0;
};

/// max_j(c_j + j·x).
struct TropicalizedPoly {
  std::vector<TropicalTerm> terms;
  std::string provenance;

  void validate() const {
    std::set<LatticePoint> seen;
    for (const auto& term : terms)
      if (!seen.insert(term.exponent).second) throw std::invalid_argument("repeated exponent in tropical polynomial");
  }
  double term_value(std::size_t k, const std::vector<double>& x) const {
    double out = terms[k].coefficient;
    for (std::size_t i = 0; i < x.size(); ++i) out += to_double(terms[k].exponent[i]) * x[i];
    return out;
  }
  double evaluate(const std::vector<double>& x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms.size(); ++k) best = std::max(best, term_value(k, x));
    return best;
  }
};

/// Generalized triangle inequality: c_k + k·x <= max_{j≠k}(c_j + j·x) + log_t N
/// for every k, with N + 1 the number of monomials. `slack` widens the tube.
inline bool in_tube(const std::vector<double>& x, const TropicalizedPoly& p, double t, double slack = 0.0) {
  if (p.terms.size() < 2) throw std::invalid_argument("tube undefined for a single monomial");
  check_semiring_parameter(t);
  const double n = static_cast<double>(p.terms.size() - 1);
  const double width = std::isinf(t) ? 0.0 : std::log(n) / std::log(t);
  std::vector<double> values;
  for (std::size_t k = 0; k < p.terms.size(); ++k) values.push_back(p.term_value(k, x));
  for (std::size_t k = 0; k < values.size(); ++k) {
    double rest = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < values.size(); ++j)
      if (j != k) rest = std::max(rest, values[j]);
    if (values[k] > rest + width + slack) return false;
  }
  return true;
}

/// Roots of Σ c_k w^k by Aberth iteration. Starting points sit on circles
/// whose radii come from the upper hull of (k, log|c_k|), so roots many orders of
/// magnitude apart all converge.
inline std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex(0)) coeffs.pop_back();
  if (coeffs.size() < 2) return {};
  const std::size_t deg = coeffs.size() - 1;
  std::vector<Complex> w;
  std::size_t zeros = 0;
  while (coeffs[zeros] == Complex(0)) ++zeros;
  w.assign(zeros, Complex(0));
  std::vector<std::size_t> hull;
  for (std::size_t k = zeros; k <= deg; ++k) {
    if (coeffs[k] == Complex(0)) continue;
    auto height = [&](std::size_t i) { return std::log(std::abs(coeffs[i])); };
    while (hull.size() >= 2) {
      auto i = hull[hull.size() - 2], j = hull.back();
      double cross = (height(j) - height(i)) * double(k - i) - (height(k) - height(i)) * double(j - i);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    auto i = hull[e], j = hull[e + 1];
    const double span = double(j - i);
    const double radius = std::exp((std::log(std::abs(coeffs[i])) - std::log(std::abs(coeffs[j]))) / span);
    for (std::size_t s = 0; s < j - i; ++s)
      w.push_back(std::polar(radius, 2 * std::numbers::pi * (double(s) + 0.25 * double(e + 1)) / span + 0.4));
  }
  const std::size_t first = zeros;
  for (int iter = 0; iter < 1000; ++iter) {
    double largest_step = 0;
    for (std::size_t i = first; i < deg; ++i) {
      Complex p = 0, dp = 0;
      for (std::size_t k = deg + 1; k-- > 0;) {
        dp = dp * w[i] + p;
        p = p * w[i] + coeffs[k];
      }
      if (p == Complex(0)) continue;
      Complex ratio = p / dp;
      Complex repulsion = 0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) repulsion += 1.0 / (w[i] - w[j]);
      Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      w[i] -= step;
      largest_step = std::max(largest_step, std::abs(step) / std::max(std::abs(w[i]), 1e-300));
    }
    if (largest_step < 1e-15) break;
  }
  return w;
}

/// Relative residual |p(w)| / Σ|c_k||w|^k.
inline double relative_residual(const std::vector<Complex>& coeffs, Complex w) {
  Complex p = 0;
  double scale = 0, power = 1;
  for (std::size_t k = coeffs.size(); k-- > 0;) p = p * w + coeffs[k];
  for (const auto& c : coeffs) {
    scale += std::abs(c) * power;
    power *= std::abs(w);
  }
  return scale == 0 ? 0 : std::abs(p) / scale;
}

/// Samples of log_t|z₁| times samples of arg z₁.
struct GridSpec {
  std::size_t radial = 200;
  std::size_t angular = 64;
  double lo = -3;
  double hi = 3;

  double pitch() const { return radial > 1 ? (hi - lo) / static_cast<double>(radial - 1) : 0.0; }

  /// Parses "RxA", e.g. "200x64".
  static GridSpec parse(const std::string& text) {
    auto x = text.find('x');
    if (x == std::string::npos) throw std::invalid_argument("grid must look like 200x64");
    GridSpec g;
    try {
      g.radial = std::stoul(text.substr(0, x));
      g.angular = std::stoul(text.substr(x + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("grid must look like 200x64");
    }
    if (g.radial == 0 || g.angular == 0) throw std::invalid_argument("grid counts must be positive");
    return g;
  }
};

inline constexpr double kResidualTolerance = 1e-9;
/// Absolute slack (in log_t units) allowed for rounding in the tube test of samples.
inline constexpr double kTubeSlack = 1e-9;

struct AmoebaSample {
  double x = 0;
  double y = 0;
  bool in_tube = false;
};

struct AmoebaSamples {
  double t = 0;
  GridSpec grid;
  TropicalizedPoly tropical;
  std::vector<AmoebaSample> points;
  std::size_t dropped = 0;
};

/// c_j = -v(j) + log_t|a_j| for the patchworking polynomial Σ a_j t^{-v(j)} z^j.
inline TropicalizedPoly patchwork_tropicalization(const LiftingFunction& v, const std::vector<Complex>& coeffs, double t) {
  TropicalizedPoly p;
  p.provenance = "patchworking coefficients";
  for (std::size_t i = 0; i < v.size(); ++i)
    p.terms.push_back({v.points[i], -to_double(v.values[i]) + (std::isinf(t) ? 0.0 : std::log(std::abs(coeffs[i])) / std::log(t))});
  return p;
}

/// Points (log_t|z₁|, log_t|z₂|) of the curve Σ a_j t^{-v(j)} z^j = 0 over a grid in z₁.
inline AmoebaSamples sample_amoeba_curve(const LiftingFunction& v, const std::vector<Complex>& coeffs, double t, const GridSpec& grid) {
  v.validate();
  check_semiring_parameter(t);
  if (std::isinf(t)) throw std::invalid_argument("sampling needs a finite t");
  if (v.ambient_dim() != 2) throw std::invalid_argument("amoeba sampling is implemented for plane curves only");
  if (coeffs.size() != v.size()) throw std::invalid_argument("one coefficient per point of A is required");
  for (const auto& c : coeffs)
    if (c == Complex(0)) throw std::invalid_argument("coefficients must be nonzero");
  AmoebaSamples out;
  out.t = t;
  out.grid = grid;
  out.tropical = patchwork_tropicalization(v, coeffs, t);
  const double lnt = std::log(t);
  // One pass per axis: grid the free coordinate, solve for the other. The
  // second pass reaches arms that are nearly parallel to the first axis.
  for (std::size_t free = 0; free < 2; ++free) {
    const std::size_t solved = 1 - free;
    Integer min_free = v.points[0][free], min_solved = v.points[0][solved], max_solved = v.points[0][solved];
    for (const auto& p : v.points) {
      min_free = std::min(min_free, p[free]);
      min_solved = std::min(min_solved, p[solved]);
      max_solved = std::max(max_solved, p[solved]);
    }
    const auto deg = static_cast<std::size_t>(max_solved - min_solved);
    if (deg == 0) continue;
    for (std::size_t r = 0; r < grid.radial; ++r) {
      const double s = grid.radial == 1 ? grid.lo : grid.lo + grid.pitch() * static_cast<double>(r);
      for (std::size_t a = 0; a < grid.angular; ++a) {
        const double theta = 2 * std::numbers::pi * (static_cast<double>(a) + 0.5) / static_cast<double>(grid.angular);
        std::vector<Complex> q(deg + 1, Complex(0));
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double j = to_double(Integer(v.points[i][free] - min_free));
          const auto k = static_cast<std::size_t>(v.points[i][solved] - min_solved);
          q[k] += coeffs[i] * std::exp(Complex((-to_double(v.values[i]) + j * s) * lnt, j * theta));
        }
        // Roots at w = 0 are outside the torus.
        std::size_t low = 0;
        while (low < q.size() && q[low] == Complex(0)) ++low;
        std::vector<Complex> trimmed(q.begin() + static_cast<std::ptrdiff_t>(low), q.end());
        for (const auto& w : polynomial_roots(trimmed)) {
          if (w == Complex(0) || !std::isfinite(std::abs(w)) || relative_residual(trimmed, w) > kResidualTolerance) {
            ++out.dropped;
            continue;
          }
          std::array<double, 2> xy{};
          xy[free] = s;
          xy[solved] = std::log(std::abs(w)) / lnt;
          AmoebaSample sample{xy[0], xy[1], false};
          sample.in_tube = in_tube({xy[0], xy[1]}, out.tropical, t, kTubeSlack);
          out.points.push_back(sample);
        }
      }
    }
  }
  return out;
}

namespace detail {

inline double distance_to_segment(const std::array<double, 2>& p, const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double u = len2 == 0 ? 0 : ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - u * dx, p[1] - a[1] - u * dy);
}

inline double distance_to_ray(const std::array<double, 2>& p, const std::array<double, 2>& a, const std::array<double, 2>& dir) {
  const double len2 = dir[0] * dir[0] + dir[1] * dir[1];
  const double u = std::max(0.0, ((p[0] - a[0]) * dir[0] + (p[1] - a[1]) * dir[1]) / len2);
  return std::hypot(p[0] - a[0] - u * dir[0], p[1] - a[1] - u * dir[1]);
}

}  // namespace detail

/// Euclidean distance from a point to a corner locus in the plane.
inline double distance_to_complex(const std::array<double, 2>& p, const TropicalComplex& cx) {
  if (cx.ambient_dim != 2) throw std::invalid_argument("distance_to_complex needs a plane complex");
  double best = std::numeric_limits<double>::infinity();
  auto at = [&](std::size_t c) { return std::array<double, 2>{to_double(cx.cells[c].point[0]), to_double(cx.cells[c].point[1])}; };
  for (auto c : cx.cells_of_dim(1)) {
    const auto& cell = cx.cells[c];
    if (cell.bounded) {
      best = std::min(best, detail::distance_to_segment(p, at(cell.vertices[0]), at(cell.vertices[1])));
    } else if (cell.vertices.size() == 1) {
      const auto& r = cell.recession.front();
      best = std::min(best, detail::distance_to_ray(p, at(cell.vertices[0]), {to_double(r[0]), to_double(r[1])}));
    } else {
      throw std::invalid_argument("distance_to_complex: edge without a vertex");
    }
  }
  for (auto c : cx.cells_of_dim(0)) {
    auto q = at(c);
    best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
  }
  return best;
}

/// sup over samples of the distance to the complex.
inline double directed_hausdorff(const std::vector<AmoebaSample>& samples, const TropicalComplex& cx) {
  double worst = 0;
  for (const auto& s : samples) worst = std::max(worst, distance_to_complex({s.x, s.y}, cx));
  return worst;
}

struct PuiseuxTerm {
  Rational exponent;
  Complex coefficient;
};

/// Finite Puiseux series Σ b_k t^k, known up to (excluding) the truncation order.
class PuiseuxSeries {
 public:
  PuiseuxSeries() = default;
  PuiseuxSeries(std::vector<PuiseuxTerm> terms, Rational truncation) : terms_(std::move(terms)), truncation_(std::move(truncation)) {
    normalize();
  }

  static PuiseuxSeries monomial(Complex coefficient, Rational exponent, Rational truncation) {
    return PuiseuxSeries({{std::move(exponent), coefficient}}, std::move(truncation));
  }

  const std::vector<PuiseuxTerm>& terms() const { return terms_; }
  const Rational& truncation() const { return truncation_; }
  bool is_zero() const { return terms_.empty(); }
  const PuiseuxTerm& leading() const {
    if (terms_.empty()) throw std::invalid_argument("zero Puiseux series has no leading term");
    return terms_.front();
  }

  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    std::vector<PuiseuxTerm> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return PuiseuxSeries(std::move(all), std::min(a.truncation_, b.truncation_));
  }
  PuiseuxSeries operator-() const {
    PuiseuxSeries out = *this;
    for (auto& term : out.terms_) term.coefficient = -term.coefficient;
    return out;
  }
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    // Known up to min(ta + lowest(b), tb + lowest(a)).
    Rational trunc = std::min(a.truncation_ + (b.is_zero() ? b.truncation_ : b.leading().exponent),
                              b.truncation_ + (a.is_zero() ? a.truncation_ : a.leading().exponent));
    std::vector<PuiseuxTerm> all;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) all.push_back({x.exponent + y.exponent, x.coefficient * y.coefficient});
    return PuiseuxSeries(std::move(all), trunc);
  }

  /// 1/b = b₀⁻¹ t^{-e} Σ (-r)^k where b = b₀ t^e (1 + r).
  PuiseuxSeries inverse() const {
    const auto& lead = leading();
    std::vector<PuiseuxTerm> rest;
    for (std::size_t i = 1; i < terms_.size(); ++i)
      rest.push_back({terms_[i].exponent - lead.exponent, terms_[i].coefficient / lead.coefficient});
    const Rational rel_trunc = truncation_ - lead.exponent;
    PuiseuxSeries r(rest, rel_trunc);
    PuiseuxSeries one = monomial(1.0, 0, rel_trunc);
    PuiseuxSeries sum = one, power = one;
    if (!r.is_zero()) {
      const Rational gap = r.leading().exponent;
      for (Rational reach = gap; reach < rel_trunc; reach += gap) {
        power = -(power * r);
        sum = sum + power;
      }
    }
    return monomial(1.0 / lead.coefficient, -lead.exponent, rel_trunc - lead.exponent) * sum;
  }

  /// Numeric value at t = 1/T.
  Complex evaluate_at_inverse(double big_t) const {
    Complex out = 0;
    for (const auto& term : terms_) out += term.coefficient * std::pow(big_t, -to_double(term.exponent));
    return out;
  }

 private:
  void normalize() {
    std::map<Rational, Complex> merged;
    for (const auto& term : terms_)
      if (term.exponent < truncation_) merged[term.exponent] += term.coefficient;
    terms_.clear();
    for (const auto& [e, c] : merged)
      if (c != Complex(0)) terms_.push_back({e, c});
  }

  std::vector<PuiseuxTerm> terms_;
  Rational truncation_ = 0;
};

/// val(b) = -(lowest exponent).
inline Rational puiseux_val(const PuiseuxSeries& b) {
  if (b.is_zero()) throw std::invalid_argument("valuation of the zero series");
  return -b.leading().exponent;
}

/// Argument of the leading coefficient, normalized to [0, 2π).
inline double leading_argument(const PuiseuxSeries& b) {
  double a = std::arg(b.leading().coefficient);
  if (a < 0) a += 2 * std::numbers::pi;
  return a;
}

struct PuiseuxLift {
  Rational val;
  double angle = 0;
};

inline PuiseuxLift puiseux_lift(const PuiseuxSeries& b) {
  if (b.is_zero()) throw std::invalid_argument("lift of the zero series");
  return {puiseux_val(b), leading_argument(b)};
}

struct PuiseuxPolynomial {
  std::vector<std::pair<LatticePoint, PuiseuxSeries>> terms;
};

struct KapranovResult {
  TropicalizedPoly poly;
  /// The same function as a lifting: v(j) = -val(a_j), so that max(x·y - v) = max(val(a_j) + j·y).
  LiftingFunction lifting;
  TropicalComplex complex;

  /// Corner points of a univariate tropicalization, with multiplicities (lattice lengths).
  std::vector<std::pair<Rational, Integer>> breakpoints() const {
    if (complex.ambient_dim != 1) throw std::invalid_argument("breakpoints are defined for univariate polynomials");
    std::vector<std::pair<Rational, Integer>> out;
    for (auto c : complex.cells_of_dim(0)) out.push_back({complex.cells[c].point[0], *complex.cells[c].weight});
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// trop(f)(x) = max_j(val(a_j) + j·x) and its corner locus.
inline KapranovResult kapranov_tropicalize(const PuiseuxPolynomial& f) {
  KapranovResult out;
  out.poly.provenance = "Puiseux valuations";
  for (const auto& [j, a] : f.terms) {
    if (a.is_zero()) throw std::invalid_argument("coefficients must be nonzero");
    Rational val = puiseux_val(a);
    out.poly.terms.push_back({j, to_double(val)});
    out.lifting.points.push_back(j);
    out.lifting.values.push_back(-val);
  }
  out.poly.validate();
  out.complex = corner_locus(out.lifting);
  return out;
}

/// Coordinates (val, phase) of the phase tropical limit W(b).
struct PhasePoint {
  std::vector<Rational> val;
  std::vector<double> angle;
};

inline PhasePoint phase_limit(const std::vector<PuiseuxSeries>& z) {
  PhasePoint out;
  for (const auto& b : z) {
    auto lift = puiseux_lift(b);
    out.val.push_back(lift.val);
    out.angle.push_back(lift.angle);
  }
  return out;
}

/// H_t keeps the argument and sends the modulus m to m^{1/ln t}, so Log ∘ H_t = Log_t.
inline std::vector<Complex> h_t(const std::vector<Complex>& z, double t) {
  check_semiring_parameter(t);
  std::vector<Complex> out;
  for (const auto& w : z) {
    if (w == Complex(0)) throw std::invalid_argument("H_t is defined on the torus only");
    out.push_back(std::polar(std::pow(std::abs(w), 1.0 / std::log(t)), std::arg(w)));
  }
  return out;
}

/// Point of (C*)^k with modulus e^{val} and the leading phase in each coordinate.
inline std::vector<Complex> phase_point_coordinates(const PhasePoint& p) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < p.val.size(); ++i) out.push_back(std::polar(std::exp(to_double(p.val[i])), p.angle[i]));
  return out;
}

struct PhaseRow {
  double t = 0;
  double distance = 0;
};

struct PhaseExperiment {
  std::vector<std::array<PuiseuxSeries, 2>> solutions;
  std::vector<PhaseRow> rows;

  bool strictly_decreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].distance < rows[i - 1].distance)) return false;
    return true;
  }
};

/// Exact solution of c₀ + c₁z₁ + c₂z₂ = 0 with z₁ given.
inline PuiseuxSeries solve_line_for_z2(const std::array<PuiseuxSeries, 3>& line, const PuiseuxSeries& z1) {
  return -((line[0] + line[1] * z1) * line[2].inverse());
}

/// For the line c₀ + c₁z₁ + c₂z₂ = 0: seeded Puiseux solutions z₁ = ζ t^q, z₂ solved
/// exactly. At each T the numeric solution (z₁(1/T), z₂ solved numerically) is mapped
/// by H_T and compared with the phase limit W of the exact solution.
inline PhaseExperiment phase_limit_experiment(const std::array<PuiseuxSeries, 3>& line, const std::vector<double>& ts,
                                              std::size_t samples, unsigned seed) {
  for (const auto& c : line)
    if (c.is_zero()) throw std::invalid_argument("line coefficients must be nonzero");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi), modulus(0.5, 2.0);
  std::uniform_int_distribution<int> exponent(-4, 4);
  PhaseExperiment out;
  const Rational trunc = 6;
  while (out.solutions.size() < samples) {
    PuiseuxSeries z1 = PuiseuxSeries::monomial(std::polar(modulus(rng), angle(rng)), Rational(exponent(rng), 2), trunc);
    PuiseuxSeries z2 = solve_line_for_z2(line, z1);
    if (z2.is_zero()) continue;
    out.solutions.push_back({z1, z2});
  }
  for (double t : ts) {
    check_semiring_parameter(t);
    double worst = 0;
    for (const auto& [z1, z2] : out.solutions) {
      const Complex w1 = z1.evaluate_at_inverse(t);
      const Complex w2 = -(line[0].evaluate_at_inverse(t) + line[1].evaluate_at_inverse(t) * w1) / line[2].evaluate_at_inverse(t);
      auto image = h_t({w1, w2}, t);
      auto limit = phase_point_coordinates(phase_limit({z1, z2}));
      for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(image[i] - limit[i]));
    }
    out.rows.push_back({t, worst});
  }
  return out;
}

}  // namespace tropix
