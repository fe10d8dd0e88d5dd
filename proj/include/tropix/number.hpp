#pragma once

// Exact scalar types shared by every combinatorial module.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tropix {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational abs_value(const Rational& a) { return a < 0 ? Rational(-a) : a; }

inline int sign_of(const Integer& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }
inline int sign_of(const Rational& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }

inline Integer gcd_of(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

inline Integer lcm_of(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_value(a / gcd_of(a, b) * b);
}

/// Extended Euclid: returns g = gcd(a, b) >= 0 and s, t with s*a + t*b = g.
struct ExtendedGcd {
  Integer g, s, t;
};

inline ExtendedGcd extended_gcd(Integer a, Integer b) {
  Integer s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Integer q = a / b;
    Integer r = a - q * b;
    a = b;
    b = r;
    Integer s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Integer t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (a < 0) return {Integer(-a), Integer(-s0), Integer(-t0)};
  return {a, s0, t0};
}

inline Integer floor_of(const Rational& r) {
  Integer n = numerator_of(r), d = denominator_of(r);
  Integer q = n / d;
  if (q * d > n) q -= 1;
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer f = floor_of(r);
  return Rational(f) == r ? f : Integer(f + 1);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const Integer& r) { return r.convert_to<double>(); }

inline Integer parse_integer(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::string_view body = s;
  if (body.front() == '-' || body.front() == '+') body.remove_prefix(1);
  if (body.empty()) throw std::invalid_argument("malformed integer literal '" + std::string(s) + "'");
  for (char c : body) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed integer literal '" + std::string(s) + "'");
  }
  Integer value{std::string(body)};
  return s.front() == '-' ? Integer(-value) : value;
}

/// Parses "p/q" or "p"; rejects zero denominators.
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer p = parse_integer(s.substr(0, slash));
  Integer q = parse_integer(s.substr(slash + 1));
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(p, q);
}

/// Canonical "p/q" with q > 0 and gcd(p, q) = 1 (integers print as "p/1").
inline std::string format_rational(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

/// Scales a rational vector to the primitive integer vector with the same direction.
inline IntVector primitive_direction(const RatVector& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm_of(den, denominator_of(x));
  IntVector out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer e = numerator_of(x) * (den / denominator_of(x));
    g = gcd_of(g, e);
    out.push_back(e);
  }
  if (g > 1) {
    for (auto& e : out) e /= g;
  }
  return out;
}

}  // namespace tropix
