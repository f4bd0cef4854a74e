#include "latfricke/rational.hpp"

#include <cmath>
#include <limits>

namespace latfricke {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw MathError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer round_half_up(const Rational& x) {
  return floor(x + Rational(1, 2));
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw MathError("zero to negative power");
    return rpow(Rational(1) / base, -e);
  }
  Integer num = ipow(base.get_num(), static_cast<unsigned long>(e));
  Integer den = ipow(base.get_den(), static_cast<unsigned long>(e));
  return make_rational(num, den);
}

Integer isqrt(const Integer& a) {
  if (a < 0) throw MathError("isqrt of negative");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

bool is_prime(long p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

bool is_prime(const Integer& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

std::vector<long> primes_in(long lo, long hi) {
  std::vector<long> out;
  for (long p = std::max(lo, 2L); p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

double to_double(const Rational& x) { return x.get_d(); }
double to_double(const Integer& x) { return x.get_d(); }

long to_long(const Integer& x) {
  if (!x.fits_slong_p()) throw MathError("integer overflow converting " + x.get_str());
  return x.get_si();
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const Integer& x) { return x.get_str(); }

namespace {

bool valid_integer_text(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Integer parse_integer(std::string_view s) {
  if (!valid_integer_text(s)) throw std::invalid_argument("bad integer: " + std::string(s));
  std::string t(s[0] == '+' ? s.substr(1) : s);
  return Integer(t, 10);
}

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer num = parse_integer(s.substr(0, slash));
  std::string_view dtext = s.substr(slash + 1);
  if (!dtext.empty() && dtext[0] == '-') throw std::invalid_argument("bad rational: " + std::string(s));
  Integer den = parse_integer(dtext);
  if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
  return make_rational(num, den);
}

Rational rational_approx(double x, long max_den) {
  if (!std::isfinite(x)) throw MathError("non-finite value");
  // Best approximation by convergents.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(v);
    if (std::fabs(a) > 1e15) break;
    long ai = static_cast<long>(a);
    long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    long h2 = ai * h1 + h0;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double frac = v - a;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (k1 == 0) return Rational(static_cast<long>(std::floor(x)));
  return make_rational(h1, k1);
}

}  // namespace latfricke
