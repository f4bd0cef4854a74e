#include "latfricke/scaled.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace latfricke {

namespace {

// base^p for integer p of either sign.
Rational power_of(const Integer& base, const Integer& p) {
  long e = to_long(p);
  return rpow(Rational(base), e);
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ScaledLength::ScaledLength(Rational r) : r_(std::move(r)) {
  if (r_ < 0) throw MathError("negative squared length");
}

ScaledLength::ScaledLength(Rational r, Rational exponent, Integer base)
    : r_(std::move(r)), e_(std::move(exponent)), base_(std::move(base)) {
  if (r_ < 0) throw MathError("negative squared length");
  if (base_ < 1) throw MathError("scale base must be positive");
  canonicalize();
}

ScaledLength ScaledLength::level(Rational r, long k, long n, long N) {
  return ScaledLength(std::move(r), make_rational(2 * k, n), Integer(N));
}

void ScaledLength::canonicalize() {
  if (r_ == 0 || base_ == 1) {
    e_ = 0;
    base_ = 1;
    return;
  }
  if (e_ == 0) {
    base_ = 1;
    return;
  }
  Integer f = latfricke::floor(e_);
  if (f != 0) {
    r_ *= power_of(base_, f);
    e_ -= Rational(f);
  }
  if (e_ == 0) base_ = 1;
}

Rational ScaledLength::rational_value() const {
  if (!is_rational()) throw MathError("squared length is not rational: " + to_string());
  return r_;
}

double ScaledLength::to_double() const {
  return r_.get_d() * std::pow(base_.get_d(), e_.get_d());
}

std::string ScaledLength::to_string() const {
  if (is_rational()) return latfricke::to_string(r_);
  return latfricke::to_string(r_) + "*" + base_.get_str() + "^(" + latfricke::to_string(e_) + ")";
}

ScaledLength ScaledLength::times_power(const Rational& f, const Integer& base) const {
  if (f == 0) return *this;
  if (!is_rational() && base != base_) throw MathError("mixed scale bases");
  return ScaledLength(r_, e_ + f, base);
}

ScaledLength ScaledLength::times(const Rational& c) const {
  return ScaledLength(r_ * c, e_, base_);
}

ScaledLength ScaledLength::pow(long k) const {
  if (k < 0 && r_ == 0) throw MathError("zero to negative power");
  return ScaledLength(rpow(r_, k), e_ * k, base_);
}

ScaledLength operator*(const ScaledLength& a, const ScaledLength& b) {
  if (a.is_rational()) return b.times(a.r_);
  if (b.is_rational()) return a.times(b.r_);
  if (a.base_ != b.base_) throw MathError("mixed scale bases");
  return ScaledLength(a.r_ * b.r_, a.e_ + b.e_, a.base_);
}

int compare(const ScaledLength& a, const ScaledLength& b) {
  if (a.r_ == 0 || b.r_ == 0) {
    if (a.r_ == 0 && b.r_ == 0) return 0;
    return a.r_ == 0 ? -1 : 1;
  }
  if (a.base_ == b.base_ && a.e_ == b.e_) return cmp(a.r_, b.r_) < 0 ? -1 : (a.r_ == b.r_ ? 0 : 1);
  Integer q = lcm(a.e_.get_den(), b.e_.get_den());
  unsigned long qq = q.get_ui();
  Rational pa = a.e_ * Rational(q), pb = b.e_ * Rational(q);
  Rational lhs = rpow(a.r_, static_cast<long>(qq)) * power_of(a.base_, pa.get_num());
  Rational rhs = rpow(b.r_, static_cast<long>(qq)) * power_of(b.base_, pb.get_num());
  int c = cmp(lhs, rhs);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Threshold::Threshold(const ScaledLength& upper, Rational offset)
    : upper_(upper), offset_(std::move(offset)) {
  q_ = upper_.exponent().get_den().get_ui();
  Integer p = upper_.exponent().get_num();
  target_ = rpow(upper_.mantissa(), static_cast<long>(q_)) * power_of(upper_.base(), p);
  upper_d_ = upper_.to_double();
  approx_ = upper_d_ - offset_.get_d();
}

bool Threshold::admits(const Rational& s) const {
  Rational t = s + offset_;
  if (sgn(t) <= 0) return true;
  if (q_ == 1) return t <= target_;
  double td = t.get_d();
  if (td < upper_d_ * (1 - 1e-9)) return true;
  if (td > upper_d_ * (1 + 1e-9)) return false;
  return rpow(t, static_cast<long>(q_)) <= target_;
}

Threshold Threshold::scaled(const Rational& c) const {
  if (c <= 0) throw MathError("threshold scale must be positive");
  Rational inv = Rational(1) / c;
  return Threshold(upper_.times(inv), offset_ * inv);
}

ScaledRationalMatrix::ScaledRationalMatrix(RationalMatrix m, long k, long N, long root)
    : m_(std::move(m)), k_(k), N_(N), root_(root == 0 ? static_cast<long>(m_.rows()) : root) {
  if (!m_.square()) throw std::invalid_argument("scaled matrix must be square");
  if (N_ < 1) throw std::invalid_argument("level must be positive");
  if (root_ < 1) throw std::invalid_argument("root must be positive");
}

ScaledRationalMatrix ScaledRationalMatrix::canonical() const {
  long q = floor_div(k_, root_);
  long r = k_ - q * root_;
  if (q == 0) return *this;
  Rational f = rpow(Rational(N_), q);
  return ScaledRationalMatrix(f * m_, r, N_, root_);
}

ScaledLength ScaledRationalMatrix::squared_length(const RatVec& coeffs) const {
  RatVec v = row_times(coeffs, m_);
  return ScaledLength(dot(v, v), gram_exponent(), Integer(N_));
}

Rational ScaledRationalMatrix::det_value() const {
  Rational e = make_rational(k_ * static_cast<long>(dim()), root_);
  if (!is_integer(e)) throw MathError("determinant is irrational");
  return rpow(Rational(N_), to_long(e.get_num())) * det(m_);
}

ScaledRationalMatrix ScaledRationalMatrix::inv_transpose() const {
  return ScaledRationalMatrix(inverse(m_).transpose(), -k_, N_, root_);
}

ScaledRationalMatrix operator*(const ScaledRationalMatrix& a, const ScaledRationalMatrix& b) {
  long N = a.N_;
  if (a.k_ == 0) N = b.N_;
  else if (b.k_ != 0 && a.N_ != b.N_) throw MathError("product of matrices with different levels");
  long root = std::lcm(a.root_, b.root_);
  long k = a.k_ * (root / a.root_) + b.k_ * (root / b.root_);
  return ScaledRationalMatrix(a.m_ * b.m_, k, N, root);
}

bool operator==(const ScaledRationalMatrix& a, const ScaledRationalMatrix& b) {
  Rational ea = a.scale_exponent(), eb = b.scale_exponent();
  Rational fa = ea - Rational(latfricke::floor(ea)), fb = eb - Rational(latfricke::floor(eb));
  if (fa != fb) return false;
  if (fa != 0 && a.N_ != b.N_) return false;
  auto absorb = [](const ScaledRationalMatrix& s, const Rational& e) {
    long fl = to_long(latfricke::floor(e));
    return rpow(Rational(s.N_), fl) * s.m_;
  };
  return absorb(a, ea) == absorb(b, eb);
}

std::string ScaledRationalMatrix::to_string() const {
  std::ostringstream os;
  os << latfricke::to_string(m_);
  if (k_ != 0) os << " * " << N_ << "^(" << k_ << "/" << root_ << ")";
  return os.str();
}

IntVec sign_normalize(IntVec v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

bool lex_less(const IntVec& a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

}  // namespace latfricke
