#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace mlecone {

using Integer = mpz_class;
using Rational = mpq_class;
using QVec = std::vector<Rational>;
using ZVec = std::vector<Integer>;

// gmpxx has no long long overloads; counts are 64-bit like long here.
inline Integer to_integer(long long v) { return Integer(static_cast<long>(v)); }
inline Rational to_rational(long long v) { return Rational(static_cast<long>(v)); }

/// Canonical string form: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

inline Rational rational_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: '" + s + "'");
  q.canonicalize();
  return q;
}

/// Divides out the gcd of all entries, leaving a primitive integer vector.
/// The zero vector is returned unchanged.
inline void normalize_primitive(ZVec& v) {
  Integer g = 0;
  for (const Integer& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g == 0 || g == 1) return;
  for (Integer& x : v) x /= g;
}

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an enumeration request exceeds the configured resource budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mlecone
