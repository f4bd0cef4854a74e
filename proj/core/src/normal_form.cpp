#include "latfricke/normal_form.hpp"

#include <utility>

namespace latfricke {

namespace {

Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& t) {
  // col_dst -= t * col_src
  if (t == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) -= t * m(r, src);
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, a), m(r, b));
}

void negate_col(IntMatrix& m, std::size_t c) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
}

}  // namespace

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer xgcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw MathError("not invertible modulo " + m.get_str());
  return mod(r, m);
}

HnfResult hnf(const IntMatrix& a) {
  if (!a.square()) throw std::invalid_argument("hnf of non-square matrix");
  const std::size_t n = a.rows();
  IntMatrix h(a);
  IntMatrix u = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (true) {
      std::size_t piv = n;
      for (std::size_t j = i; j < n; ++j)
        if (h(i, j) != 0 && (piv == n || abs(h(i, j)) < abs(h(i, piv)))) piv = j;
      if (piv == n) throw SingularMatrix();
      if (piv != i) {
        swap_cols(h, i, piv);
        swap_cols(u, i, piv);
      }
      bool done = true;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (h(i, j) == 0) continue;
        Integer t = fdiv(h(i, j), h(i, i));
        col_axpy(h, j, i, t);
        col_axpy(u, j, i, t);
        if (h(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (h(i, i) < 0) {
      negate_col(h, i);
      negate_col(u, i);
    }
    for (std::size_t j = 0; j < i; ++j) {
      Integer t = fdiv(h(i, j), h(i, i));
      col_axpy(h, j, i, t);
      col_axpy(u, j, i, t);
    }
  }
  return {h, u};
}

HnfResult hnf(const RationalMatrix& a) { return hnf(to_integer(a)); }

IntMatrix hnf_row_upper(const IntMatrix& a) { return hnf(a.transpose()).H.transpose(); }

IntVec smith_invariants(const IntMatrix& a) {
  IntMatrix m(a);
  const std::size_t R = m.rows(), C = m.cols();
  const std::size_t r = std::min(R, C);
  IntVec s;
  for (std::size_t t = 0; t < r; ++t) {
    while (true) {
      std::size_t pi = R, pj = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (m(i, j) != 0 && (pi == R || abs(m(i, j)) < abs(m(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == R) {
        for (std::size_t k = t; k < r; ++k) s.push_back(Integer(0));
        goto finish;
      }
      if (pi != t)
        for (std::size_t j = 0; j < C; ++j) std::swap(m(pi, j), m(t, j));
      if (pj != t) swap_cols(m, pj, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (m(i, t) == 0) continue;
        Integer q = fdiv(m(i, t), m(t, t));
        for (std::size_t j = t; j < C; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (m(t, j) == 0) continue;
        Integer q = fdiv(m(t, j), m(t, t));
        col_axpy(m, j, t, q);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (m(i, j) % m(t, t) != 0) {
            for (std::size_t c = t; c < C; ++c) m(t, c) += m(i, c);
            divides = false;
            break;
          }
      if (divides) break;
    }
    s.push_back(abs(m(t, t)));
  }
finish:
  return s;
}

IntVec determinantal_divisors(const IntMatrix& a) {
  bool zero = true;
  for (const auto& x : a.data())
    if (x != 0) zero = false;
  if (zero) throw MathError("determinantal divisors of the zero matrix");
  IntVec s = smith_invariants(a);
  IntVec d(s.size());
  Integer p(1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    p *= s[j];
    d[j] = p;
  }
  return d;
}

RatVec char_poly(const RationalMatrix& a) {
  if (!a.square()) throw std::invalid_argument("char_poly of non-square matrix");
  const std::size_t n = a.rows();
  RatVec c(n + 1);
  c[n] = 1;
  RationalMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    RationalMatrix am = a * mk;
    Rational tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

IntVec char_poly(const IntMatrix& a) {
  RatVec c = char_poly(to_rational(a));
  IntVec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].get_num();
  return out;
}

bool has_level_last_row(const IntMatrix& a, long N) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (a(n - 1, j) % N != 0) return false;
  return true;
}

bool is_gamma0(const IntMatrix& a, long N) {
  if (!a.square()) return false;
  if (!has_level_last_row(a, N)) return false;
  return det(a) == 1;
}

bool is_gamma0_transpose(const IntMatrix& a, long N) {
  if (!a.square()) return false;
  return is_gamma0(a.transpose(), N);
}

IntMatrix unimodular_with_column(const IntVec& v, std::size_t pos) {
  const std::size_t n = v.size();
  if (pos >= n) throw std::invalid_argument("column index out of range");
  if (!is_primitive(v)) throw MathError("vector is not primitive");
  IntVec a(v);
  IntMatrix u = IntMatrix::identity(n);
  while (true) {
    std::size_t p = n;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != 0) {
        ++nonzero;
        if (p == n || abs(a[i]) < abs(a[p])) p = i;
      }
    if (nonzero == 1) {
      if (p != pos) {
        std::swap(a[p], a[pos]);
        swap_cols(u, p, pos);
      }
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == p || a[i] == 0) continue;
      Integer t = fdiv(a[i], a[p]);
      a[i] -= t * a[p];
      // u <- u (I + t E_ip): col_p += t col_i
      if (t != 0)
        for (std::size_t r = 0; r < n; ++r) u(r, p) += t * u(r, i);
    }
  }
  if (a[pos] < 0) negate_col(u, pos);
  if (det(u) < 0) {
    if (n == 1) throw MathError("cannot complete -1 in dimension one");
    negate_col(u, (pos + 1) % n);
  }
  return u;
}

IntMatrix unimodular_with_row(const IntVec& v, std::size_t pos) {
  return unimodular_with_column(v, pos).transpose();
}

IntMatrix complete_with_last_row(const IntVec& v) {
  return unimodular_with_row(v, v.size() - 1);
}

}  // namespace latfricke
