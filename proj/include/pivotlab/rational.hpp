#pragma once

#include <gmpxx.h>

#include <string>

namespace pivotlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Rational& q) {
  // mpq prints integers without a denominator; keep the "p/q" form uniform.
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Rational parse_rational(const std::string& s) {
  Rational q(s);
  q.canonicalize();
  return q;
}

// Sign of a rational as -1, 0, +1.
inline int sign(const Rational& q) { return sgn(q); }

}  // namespace pivotlab
