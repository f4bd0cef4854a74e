#include "latfricke/matrix.hpp"

#include <sstream>

namespace latfricke {

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

RatVec to_rational(const IntVec& v) {
  RatVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
  return r;
}

bool is_integral(const RationalMatrix& m) {
  for (const auto& x : m.data())
    if (x.get_den() != 1) return false;
  return true;
}

IntMatrix to_integer(const RationalMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw MathError("matrix is not integral");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

Rational det(const RationalMatrix& m) {
  if (!m.square()) throw std::invalid_argument("det of non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a(m);
  Rational d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      d = -d;
    }
    d *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

Integer det(const IntMatrix& m) {
  if (!m.square()) throw std::invalid_argument("det of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntMatrix a(m);
  Integer prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Integer(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  Integer d = a(n - 1, n - 1);
  return sign > 0 ? d : Integer(-d);
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a(m);
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw SingularMatrix();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    }
    Rational piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
  Integer d = det(m);
  if (d != 1 && d != -1) throw MathError("matrix is not unimodular");
  return to_integer(inverse(to_rational(m)));
}

std::size_t rank(const RationalMatrix& m) {
  RationalMatrix a(m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

RationalMatrix gram(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  RationalMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational s(0);
      for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(j, k);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t j) {
  std::vector<std::vector<std::size_t>> out;
  if (j > n) return out;
  std::vector<std::size_t> cur(j);
  for (std::size_t i = 0; i < j; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = j;
    while (i > 0 && cur[i - 1] == n - j + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t t = i; t < j; ++t) cur[t] = cur[t - 1] + 1;
  }
  return out;
}

namespace {

template <class T>
Matrix<T> compound_impl(const Matrix<T>& m, std::size_t j) {
  if (!m.square() || j < 1 || j > m.rows()) throw std::invalid_argument("compound index out of range");
  auto subs = subsets(m.rows(), j);
  Matrix<T> c(subs.size(), subs.size());
  for (std::size_t a = 0; a < subs.size(); ++a)
    for (std::size_t b = 0; b < subs.size(); ++b) c(a, b) = det(submatrix(m, subs[a], subs[b]));
  return c;
}

}  // namespace

RationalMatrix compound(const RationalMatrix& m, std::size_t j) { return compound_impl(m, j); }
IntMatrix compound(const IntMatrix& m, std::size_t j) { return compound_impl(m, j); }

Integer content(const IntVec& v) {
  Integer g(0);
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

bool is_primitive(const IntVec& v) { return content(v) == 1; }

namespace {

template <class T>
std::string matrix_string(const Matrix<T>& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string to_string(const RationalMatrix& m) { return matrix_string(m); }
std::string to_string(const IntMatrix& m) { return matrix_string(m); }

}  // namespace latfricke
