#include "latfricke/iwasawa.hpp"

#include "latfricke/enumeration.hpp"
#include "latfricke/lattice.hpp"
#include "latfricke/normal_form.hpp"

namespace latfricke {

RationalMatrix IwasawaCoords::reconstructed_gram() const {
  const std::size_t n = dim();
  RationalMatrix nd(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) nd(i, j) *= d_sq_mantissa[j];
  return nd * x.transpose();
}

IwasawaCoords iwasawa_from_gram(const RationalMatrix& g, const Rational& gram_exponent, long level) {
  if (!g.square()) throw std::invalid_argument("Gram matrix must be square");
  const std::size_t n = g.rows();
  IwasawaCoords c;
  c.x = RationalMatrix::identity(n);
  c.d_sq_mantissa.assign(n, Rational(0));
  c.gram_exponent = gram_exponent;
  c.level = level;
  // G = U D U^T with U unit upper triangular, columns from the last one down.
  for (std::size_t jj = n; jj-- > 0;) {
    Rational dj = g(jj, jj);
    for (std::size_t l = jj + 1; l < n; ++l) dj -= c.x(jj, l) * c.x(jj, l) * c.d_sq_mantissa[l];
    if (dj <= 0) throw SingularMatrix();
    c.d_sq_mantissa[jj] = dj;
    for (std::size_t i = 0; i < jj; ++i) {
      Rational s = g(i, jj);
      for (std::size_t l = jj + 1; l < n; ++l) s -= c.x(i, l) * c.x(jj, l) * c.d_sq_mantissa[l];
      c.x(i, jj) = s / dj;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    c.d_sq.emplace_back(c.d_sq_mantissa[i], gram_exponent, Integer(level));
  for (std::size_t i = 1; i < n; ++i) c.y_sq.push_back(c.d_sq_mantissa[n - i - 1] / c.d_sq_mantissa[n - i]);
  return c;
}

IwasawaCoords iwasawa_decompose(const ScaledRationalMatrix& z) {
  return iwasawa_from_gram(z.gram_mantissa(), z.gram_exponent(), z.level());
}

bool in_siegel(const IwasawaCoords& c, const Rational& eta_sq) {
  const std::size_t n = c.dim();
  const Rational half(1, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs(c.x(i, j)) > half) return false;
  for (const auto& y : c.y_sq)
    if (y < eta_sq) return false;
  return true;
}

IntMatrix size_reduction(const RationalMatrix& g) {
  const std::size_t n = g.rows();
  IwasawaCoords c = iwasawa_from_gram(g);
  RationalMatrix x = c.x;
  IntMatrix s = IntMatrix::identity(n);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Integer t = round_half_up(x(i, j));
      if (t == 0) continue;
      Rational tr(t);
      for (std::size_t l = j; l < n; ++l) x(i, l) -= tr * x(j, l);
      for (std::size_t l = 0; l < n; ++l) s(i, l) -= t * s(j, l);
    }
  }
  return s;
}

RationalMatrix projected_upper_gram(const RationalMatrix& g) {
  const std::size_t n = g.rows();
  RationalMatrix p(n - 1, n - 1);
  const Rational& gnn = g(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) p(i, j) = g(i, j) - g(i, n - 1) * g(j, n - 1) / gnn;
  return p;
}

namespace {

RationalMatrix congruent(const IntMatrix& t, const RationalMatrix& g) {
  RationalMatrix tr = to_rational(t);
  return tr * g * tr.transpose();
}

IntMatrix embed_upper(const IntMatrix& h) {
  const std::size_t m = h.rows();
  IntMatrix out = IntMatrix::identity(m + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = h(i, j);
  return out;
}

}  // namespace

IntMatrix reduce_gram(const RationalMatrix& g) {
  const std::size_t n = g.rows();
  if (n == 1) return IntMatrix::identity(1);
  BallEnumerator e(g);
  GramShortest s = shortest_in_gram(e, [](const LVec&) { return true; });
  IntMatrix g0 = complete_with_last_row(s.witness);
  RationalMatrix g1 = congruent(g0, g);
  IntMatrix h = reduce_gram(projected_upper_gram(g1));
  IntMatrix gam = embed_upper(h) * g0;
  IntMatrix sr = size_reduction(congruent(gam, g));
  return sr * gam;
}

SiegelWitness siegel_reduce(const ScaledRationalMatrix& z, const Rational& eta_sq) {
  if (eta_sq > Rational(3, 4)) throw std::invalid_argument("siegel_reduce supports eta^2 <= 3/4");
  IntMatrix gam = reduce_gram(z.gram_mantissa());
  SiegelWitness w{gam, iwasawa_decompose(z.left(gam)), eta_sq};
  if (!in_siegel(w.coords, eta_sq)) throw MathError("siegel_reduce: reduction failed its postcondition");
  return w;
}

BlockReduction block_reduce_upper(const ScaledRationalMatrix& z) {
  const std::size_t n = z.dim();
  if (n <= 2) return {IntMatrix::identity(n), iwasawa_decompose(z)};
  IntMatrix h = reduce_gram(projected_upper_gram(z.gram_mantissa()));
  IntMatrix gam = embed_upper(h);
  return {gam, iwasawa_decompose(z.left(gam))};
}

}  // namespace latfricke
