#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latfricke {

using Integer = mpz_class;
using Rational = mpq_class;

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public MathError {
 public:
  SingularMatrix() : MathError("singular") {}
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// Canonicalized p/q; throws on q == 0.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
// Nearest integer, halves rounded up; |x - round_half_up(x)| <= 1/2.
Integer round_half_up(const Rational& x);

bool is_integer(const Rational& x);
Rational abs(const Rational& x);
Integer abs(const Integer& x);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

Integer ipow(const Integer& base, unsigned long e);
Rational rpow(const Rational& base, long e);

// Integer square root floor(sqrt(a)) for a >= 0.
Integer isqrt(const Integer& a);

bool is_prime(long p);
bool is_prime(const Integer& p);
std::vector<long> primes_in(long lo, long hi);

double to_double(const Rational& x);
double to_double(const Integer& x);
long to_long(const Integer& x);

std::string to_string(const Rational& x);
std::string to_string(const Integer& x);
// Accepts "p", "-p", "p/q"; throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view s);
Integer parse_integer(std::string_view s);

// Rational approximation with denominator not exceeding max_den (continued fractions).
Rational rational_approx(double x, long max_den);

}  // namespace latfricke
