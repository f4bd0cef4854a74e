#include "latfricke/enumeration.hpp"

#include <cmath>

namespace latfricke {

namespace {

thread_local std::uint64_t g_nodes = 0;

struct GramSchmidt {
  RationalMatrix mu;
  RatVec b;
};

GramSchmidt gram_schmidt(const RationalMatrix& h) {
  const std::size_t n = h.rows();
  GramSchmidt gs{RationalMatrix(n, n), RatVec(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = h(i, j);
      for (std::size_t l = 0; l < j; ++l) s -= gs.mu(i, l) * gs.mu(j, l) * gs.b[l];
      gs.mu(i, j) = s / gs.b[j];
    }
    Rational s = h(i, i);
    for (std::size_t l = 0; l < i; ++l) s -= gs.mu(i, l) * gs.mu(i, l) * gs.b[l];
    if (s <= 0) throw MathError("Gram matrix is not positive definite");
    gs.b[i] = s;
  }
  return gs;
}

RationalMatrix congruent(const IntMatrix& t, const RationalMatrix& g) {
  RationalMatrix tr = to_rational(t);
  return tr * g * tr.transpose();
}

}  // namespace

IntVec to_int_vec(const LVec& v) {
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Integer(v[i]);
  return out;
}

LVec to_long_vec(const IntVec& v) {
  LVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_long(v[i]);
  return out;
}

RatVec to_rat_vec(const LVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

IntMatrix lll_gram(const RationalMatrix& g) {
  const std::size_t n = g.rows();
  IntMatrix t = IntMatrix::identity(n);
  if (n <= 1) return t;
  RationalMatrix h = g;
  GramSchmidt gs = gram_schmidt(h);
  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    bool changed = false;
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = round_half_up(gs.mu(k, jj));
      if (q == 0) continue;
      for (std::size_t c = 0; c < n; ++c) t(k, c) -= q * t(jj, c);
      for (std::size_t l = 0; l < jj; ++l) gs.mu(k, l) -= Rational(q) * gs.mu(jj, l);
      gs.mu(k, jj) -= Rational(q);
      changed = true;
    }
    if (changed) h = congruent(t, g);
    Rational m = gs.mu(k, k - 1);
    if (gs.b[k] < (delta - m * m) * gs.b[k - 1]) {
      for (std::size_t c = 0; c < n; ++c) std::swap(t(k, c), t(k - 1, c));
      h = congruent(t, g);
      gs = gram_schmidt(h);
      k = k > 1 ? k - 1 : 1;
    } else {
      ++k;
    }
  }
  return t;
}

BallEnumerator::BallEnumerator(const RationalMatrix& gram) : n_(gram.rows()), g_(gram) {
  if (!gram.square()) throw std::invalid_argument("Gram matrix must be square");
  t_ = lll_gram(g_);
  t_inv_ = inverse_unimodular(t_);
  gr_ = congruent(t_, g_);
  l_ = RationalMatrix::identity(n_);
  d_.assign(n_, Rational(0));
  for (std::size_t i = 0; i < n_; ++i) {
    Rational s = gr_(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * l_(i, k) * d_[k];
    if (s <= 0) throw MathError("Gram matrix is not positive definite");
    d_[i] = s;
    for (std::size_t j = i + 1; j < n_; ++j) {
      Rational u = gr_(j, i);
      for (std::size_t k = 0; k < i; ++k) u -= l_(j, k) * l_(i, k) * d_[k];
      l_(j, i) = u / d_[i];
    }
  }
  d_dbl_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) d_dbl_[i] = d_[i].get_d();
}

std::uint64_t BallEnumerator::last_node_count() { return g_nodes; }

bool BallEnumerator::enumerate(const Threshold& bound, const Visitor& visit) const {
  return enumerate(RatVec(n_, Rational(0)), bound, visit);
}

bool BallEnumerator::enumerate(const RatVec& center, const Threshold& bound, const Visitor& visit) const {
  if (center.size() != n_) throw std::invalid_argument("center dimension mismatch");
  g_nodes = 0;
  // Center in reduced coordinates: c' = c T^{-1}.
  RatVec c(n_, Rational(0));
  bool zero_center = true;
  for (const auto& x : center)
    if (x != 0) zero_center = false;
  if (!zero_center) c = row_times(center, to_rational(t_inv_));
  std::vector<Rational> w(n_);
  LVec y(n_, 0);
  return recurse(n_, Rational(0), w, y, c, bound, visit);
}

bool BallEnumerator::recurse(std::size_t level, const Rational& partial, std::vector<Rational>& w, LVec& y,
                             const RatVec& c, const Threshold& bound, const Visitor& visit) const {
  ++g_nodes;
  if (level == 0) {
    LVec x(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) x[j] += y[i] * t_(i, j).get_si();
    }
    return visit(x, partial);
  }
  const std::size_t i = level - 1;
  Rational ctr = c[i];
  for (std::size_t j = i + 1; j < n_; ++j)
    if (w[j] != 0) ctr -= l_(j, i) * w[j];
  const Rational& di = d_[i];
  auto value_at = [&](long v) {
    Rational diff = Rational(v) - ctr;
    return Rational(partial + di * diff * diff);
  };
  auto pred = [&](long v) { return bound.admits(value_at(v)); };

  long y0 = to_long(round_half_up(ctr));
  if (!pred(y0)) return true;
  double ctr_d = ctr.get_d();
  double rem = std::max(0.0, bound.approx() - partial.get_d());
  double rad = std::sqrt(rem / d_dbl_[i]);
  long hi = std::max(y0, static_cast<long>(std::floor(ctr_d + rad)));
  long lo = std::min(y0, static_cast<long>(std::ceil(ctr_d - rad)));
  while (hi > y0 && !pred(hi)) --hi;
  while (pred(hi + 1)) ++hi;
  while (lo < y0 && !pred(lo)) ++lo;
  while (pred(lo - 1)) --lo;
  for (long v = lo; v <= hi; ++v) {
    y[i] = v;
    w[i] = Rational(v) - c[i];
    Rational s = value_at(v);
    if (!recurse(level - 1, s, w, y, c, bound, visit)) return false;
  }
  y[i] = 0;
  w[i] = 0;
  return true;
}

}  // namespace latfricke
