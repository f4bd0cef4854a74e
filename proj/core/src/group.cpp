#include "latfricke/group.hpp"

#include <set>
#include <stdexcept>

#include "latfricke/normal_form.hpp"

namespace latfricke {

namespace {

IntMatrix elementary(std::size_t n, std::size_t i, std::size_t j, const Integer& t) {
  IntMatrix e = IntMatrix::identity(n);
  e(i, j) = t;
  return e;
}

}  // namespace

std::vector<IntMatrix> gamma0_generators(long n_, long N) {
  const std::size_t n = static_cast<std::size_t>(n_);
  std::vector<IntMatrix> out;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) out.push_back(elementary(n, i, j, Integer(1)));
  for (std::size_t j = 0; j + 1 < n; ++j) out.push_back(elementary(n, n - 1, j, Integer(N)));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    IntMatrix s = IntMatrix::identity(n);
    s(i, i) = -1;
    s(i + 1, i + 1) = -1;
    out.push_back(s);
  }
  if (n == 2) {
    for (long c = 1; c <= N; ++c)
      for (long d = -N; d <= N; ++d) {
        Integer x, y;
        if (xgcd(Integer(N * c), Integer(d), x, y) != 1 || d == 1 || d == -1) continue;
        // a d - b N c = 1 with a = y, b = -x.
        out.push_back(IntMatrix{{y, Integer(-x)}, {Integer(N * c), Integer(d)}});
      }
  }
  return out;
}

IntMatrix random_gamma0(Rng& rng, long n, long N, int length) {
  static thread_local std::vector<IntMatrix> cache;
  static thread_local long cached_n = 0, cached_N = 0;
  if (cached_n != n || cached_N != N) {
    cache = gamma0_generators(n, N);
    cached_n = n;
    cached_N = N;
  }
  IntMatrix g = IntMatrix::identity(static_cast<std::size_t>(n));
  for (int s = 0; s < length; ++s) {
    const IntMatrix& h = cache[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(cache.size()) - 1))];
    g = rng.coin() ? g * h : g * inverse_unimodular(h);
  }
  return g;
}

std::vector<IntMatrix> gamma0_test_set(long n, long N, std::size_t extra, std::uint64_t seed) {
  std::vector<IntMatrix> out = gamma0_generators(n, N);
  Rng rng(seed);
  for (std::size_t i = 0; i < extra; ++i) out.push_back(random_gamma0(rng, n, N, 6));
  return out;
}

IntMatrix random_sl(Rng& rng, long n_, int length, long max_step) {
  const std::size_t n = static_cast<std::size_t>(n_);
  IntMatrix g = IntMatrix::identity(n);
  for (int s = 0; s < length; ++s) {
    std::size_t i = static_cast<std::size_t>(rng.uniform(0, n_ - 1));
    std::size_t j = static_cast<std::size_t>(rng.uniform(0, n_ - 2));
    if (j >= i) ++j;
    long t = rng.uniform(-max_step, max_step);
    if (t == 0) continue;
    for (std::size_t c = 0; c < n; ++c) g(i, c) += Integer(t) * g(j, c);
  }
  return g;
}

IntMatrix matrix_complete(const LevelContext& ctx, const IntVec& v) {
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  if (v.size() != n) throw std::invalid_argument("dimension mismatch");
  if (!is_primitive(v)) throw std::invalid_argument("vector is not primitive");
  if (mod(v[n - 1], Integer(ctx.N())) != 0) throw std::invalid_argument("last coordinate not divisible by N");
  IntMatrix u = unimodular_with_column(v, 0);
  // Clear the last row beyond the first entry with a block diag(1, W); for
  // n = 2 the last row already has the required shape.
  IntMatrix block = IntMatrix::identity(n);
  if (n > 2) {
    IntVec last = u.row(n - 1);
    IntVec r(last.begin() + 1, last.end());
    Integer g = content(r);
    for (auto& x : r) x /= g;
    IntMatrix w = inverse_unimodular(complete_with_last_row(r));
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) block(i + 1, j + 1) = w(i, j);
  }
  IntMatrix gamma = u * block;
  if (n == 2) {
    Integer a = gamma(0, 0);
    Integer b = mod(gamma(0, 1), abs(a));
    Integer t = (gamma(0, 1) - b) / a;
    gamma(0, 1) = b;
    gamma(1, 1) -= t * gamma(1, 0);
  }
  if (gamma.col(0) != v || !is_gamma0(gamma, ctx.N())) throw MathError("completion failed");
  return gamma;
}

IntMatrix cusp_representative(long n_, long k) {
  if (k < 1 || k > n_) throw std::invalid_argument("cusp index out of range");
  const std::size_t n = static_cast<std::size_t>(n_);
  if (k == n_) return IntMatrix::identity(n);
  IntMatrix w(n, n);
  if (k == 1) {
    for (std::size_t i = 0; i < n; ++i) w(i, n - 1 - i) = 1;
    if (det(w) < 0)
      for (std::size_t j = 0; j < n; ++j) w(0, j) = -w(0, j);
    return w;
  }
  const std::size_t kk = static_cast<std::size_t>(k - 1);
  w(0, 0) = 1;
  w(n - 1, kk) = 1;
  std::size_t row = 1;
  for (std::size_t c = 1; c < n; ++c)
    if (c != kk) w(row++, c) = 1;
  if (det(w) < 0)
    for (std::size_t j = 0; j < n; ++j) w(1, j) = -w(1, j);
  return w;
}

long cusp_index(const LevelContext& ctx, const IntMatrix& xi) {
  const std::size_t n = xi.rows();
  const Integer N(ctx.N());
  for (std::size_t j = 0; j < n; ++j)
    if (mod(xi(n - 1, j), N) != 0) return static_cast<long>(j + 1);
  throw MathError("last row vanishes mod N");
}

CuspDecomposition cusp_decompose(const LevelContext& ctx, const IntMatrix& xi) {
  const std::size_t n = xi.rows();
  if (static_cast<long>(n) != ctx.n()) throw std::invalid_argument("dimension mismatch");
  if (det(xi) != 1) throw std::invalid_argument("matrix is not in SL_n(Z)");
  const Integer N(ctx.N());
  const long k = cusp_index(ctx, xi);
  const std::size_t kk = static_cast<std::size_t>(k - 1);
  Integer inv = inverse_mod(mod(xi(n - 1, kk), N), N);
  IntMatrix u = IntMatrix::identity(n);
  IntMatrix u_inv = IntMatrix::identity(n);
  for (std::size_t j = kk + 1; j < n; ++j) {
    Integer t = mod(xi(n - 1, j) * inv, N);
    u(kk, j) = t;
    u_inv(kk, j) = -t;
  }
  IntMatrix w = cusp_representative(ctx.n(), k);
  CuspDecomposition d;
  d.gamma = xi * u_inv * w.transpose();
  d.k = k;
  d.u = u;
  if (!is_gamma0(d.gamma, ctx.N()) || d.gamma * w * u != xi) throw MathError("cusp decomposition failed");
  return d;
}

long cusp_count_check(const LevelContext& ctx) {
  std::set<long> seen;
  for (long k = 1; k <= ctx.n(); ++k) {
    IntMatrix w = cusp_representative(ctx.n(), k);
    if (det(w) != 1) throw MathError("cusp representative has determinant -1");
    CuspDecomposition d = cusp_decompose(ctx, w);
    const std::size_t n = static_cast<std::size_t>(ctx.n());
    if (d.k != k || d.gamma != IntMatrix::identity(n) || d.u != IntMatrix::identity(n))
      throw MathError("cusp representative does not decompose to itself");
    seen.insert(cusp_index(ctx, w));
  }
  if (static_cast<long>(seen.size()) != ctx.n()) throw MathError("cusp representatives not distinct");
  return static_cast<long>(seen.size());
}

std::vector<IntMatrix> gamma0_coset_reps(const LevelContext& ctx) {
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  const long N = ctx.N();
  std::vector<IntMatrix> out;
  for (std::size_t k = 0; k < n; ++k) {
    // Points (0,..,0,1,*,..,*) with the 1 at position k.
    std::size_t free = n - 1 - k;
    std::vector<long> tail(free, 0);
    while (true) {
      IntVec v(n, Integer(0));
      v[k] = 1;
      for (std::size_t j = 0; j < free; ++j) v[k + 1 + j] = tail[j];
      out.push_back(complete_with_last_row(v));
      std::size_t j = 0;
      while (j < free && tail[j] == N - 1) tail[j++] = 0;
      if (j == free) break;
      ++tail[j];
    }
  }
  return out;
}

}  // namespace latfricke
