#pragma once

#include <string>

#include "latfricke/matrix.hpp"

namespace latfricke {

// Squared length r * base^e with r >= 0 and e rational.  For lattices of level N
// the base is N and e = 2k/n.  Values with different bases still compare exactly.
class ScaledLength {
 public:
  ScaledLength() = default;
  explicit ScaledLength(Rational r);
  ScaledLength(Rational r, Rational exponent, Integer base);
  // r * N^(2k/n).
  static ScaledLength level(Rational r, long k, long n, long N);

  const Rational& mantissa() const { return r_; }
  const Rational& exponent() const { return e_; }
  const Integer& base() const { return base_; }
  bool is_rational() const { return e_ == 0; }
  Rational rational_value() const;  // throws unless is_rational()

  double to_double() const;
  std::string to_string() const;

  // Multiplies by base^f (must share base unless this is rational).
  ScaledLength times_power(const Rational& f, const Integer& base) const;
  ScaledLength times(const Rational& c) const;
  ScaledLength pow(long k) const;

  friend ScaledLength operator*(const ScaledLength& a, const ScaledLength& b);
  friend int compare(const ScaledLength& a, const ScaledLength& b);
  friend bool operator==(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) == 0; }
  friend bool operator!=(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) != 0; }
  friend bool operator<(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) < 0; }
  friend bool operator<=(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) <= 0; }
  friend bool operator>(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) > 0; }
  friend bool operator>=(const ScaledLength& a, const ScaledLength& b) { return compare(a, b) >= 0; }

 private:
  void canonicalize();

  Rational r_{0};
  Rational e_{0};
  Integer base_{1};
};

// Upper bound  s + offset <= U  for a rational s, with U a ScaledLength.  The
// comparison raises both sides to the common denominator of U's exponent.
class Threshold {
 public:
  Threshold() : Threshold(ScaledLength(Rational(0))) {}
  explicit Threshold(const ScaledLength& upper, Rational offset = 0);
  static Threshold rational(const Rational& upper) { return Threshold(ScaledLength(upper)); }

  bool admits(const Rational& s) const;
  // Approximate value of U - offset, for range estimates only.
  double approx() const { return approx_; }
  const ScaledLength& upper() const { return upper_; }
  const Rational& offset() const { return offset_; }
  // Same upper bound, offset increased by delta.
  Threshold shifted(const Rational& delta) const { return Threshold(upper_, offset_ + delta); }
  // Bound on c*s: scaling by a positive rational.
  Threshold scaled(const Rational& c) const;

 private:
  ScaledLength upper_;
  Rational offset_{0};
  unsigned long q_ = 1;
  Rational target_;  // U^q, rational
  double approx_ = 0;
  double upper_d_ = 0;
};

// N^(k/root) * M.  root defaults to the dimension of M.
class ScaledRationalMatrix {
 public:
  ScaledRationalMatrix() = default;
  ScaledRationalMatrix(RationalMatrix m, long k, long N, long root = 0);
  static ScaledRationalMatrix unscaled(RationalMatrix m, long N = 1) { return ScaledRationalMatrix(std::move(m), 0, N); }

  const RationalMatrix& mantissa() const { return m_; }
  long k() const { return k_; }
  long level() const { return N_; }
  long root() const { return root_; }
  std::size_t dim() const { return m_.rows(); }
  Rational scale_exponent() const { return make_rational(k_, root_); }

  // Same value with k reduced to [0, root): N^(k div root) folded into M.
  ScaledRationalMatrix canonical() const;
  // Gram mantissa M M^T; the Gram matrix is N^(2k/root) times this.
  RationalMatrix gram_mantissa() const { return gram(m_); }
  // Exponent of N in the Gram scale factor.
  Rational gram_exponent() const { return make_rational(2 * k_, root_); }
  ScaledLength squared_length(const RatVec& coeffs) const;

  // det = N^(k n / root) det(M), returned as a squared value is not needed; this
  // returns det exactly when the exponent is integral.
  Rational det_value() const;
  Rational det_mantissa() const { return det(m_); }

  ScaledRationalMatrix inv_transpose() const;
  ScaledRationalMatrix transpose() const { return ScaledRationalMatrix(m_.transpose(), k_, N_, root_); }
  // Left multiplication by a rational (typically integral) matrix.
  ScaledRationalMatrix left(const RationalMatrix& g) const { return ScaledRationalMatrix(g * m_, k_, N_, root_); }
  ScaledRationalMatrix left(const IntMatrix& g) const { return left(to_rational(g)); }
  ScaledRationalMatrix times_scalar_power(long dk) const { return ScaledRationalMatrix(m_, k_ + dk, N_, root_); }

  friend ScaledRationalMatrix operator*(const ScaledRationalMatrix& a, const ScaledRationalMatrix& b);
  friend bool operator==(const ScaledRationalMatrix& a, const ScaledRationalMatrix& b);
  friend bool operator!=(const ScaledRationalMatrix& a, const ScaledRationalMatrix& b) { return !(a == b); }

  std::string to_string() const;

 private:
  RationalMatrix m_;
  long k_ = 0;
  long N_ = 1;
  long root_ = 1;
};

// Sign-normalized copy: first nonzero coordinate positive.
IntVec sign_normalize(IntVec v);
// Lexicographic comparison on integer vectors.
bool lex_less(const IntVec& a, const IntVec& b);

}  // namespace latfricke
