#include "latfricke/sampling.hpp"

#include "latfricke/group.hpp"

namespace latfricke {

bool in_omega(const IwasawaCoords& c, const OmegaBounds& b) {
  if (!in_siegel(c, b.y_sq_lo)) return false;
  for (const auto& y : c.y_sq)
    if (y > b.y_sq_hi) return false;
  for (const auto& d : c.d_sq) {
    if (!d.is_rational()) return false;
    Rational v = d.rational_value();
    if (v < b.d_sq_lo || v > b.d_sq_hi) return false;
  }
  return true;
}

ScaledRationalMatrix sample_omega(Rng& rng, long n_, long N, const OmegaBounds& b) {
  const std::size_t n = static_cast<std::size_t>(n_);
  const long den = b.den;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<Rational> d(n);
    Rational prod(1);
    for (std::size_t i = 1; i < n; ++i) {
      d[i] = make_rational(rng.uniform(den / 2, 2 * den), den);
      prod *= d[i];
    }
    d[0] = Rational(1) / prod;
    RationalMatrix z = RationalMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) z(i, j) = make_rational(rng.uniform(-den / 2, den / 2), den);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) z(i, j) *= d[j];
    ScaledRationalMatrix s = ScaledRationalMatrix::unscaled(std::move(z), N);
    if (in_omega(iwasawa_decompose(s), b)) return s;
  }
  throw MathError("Omega sampler failed to accept a point");
}

ScaledRationalMatrix sample_translate(Rng& rng, long n, long N, const OmegaBounds& b, int word_length) {
  ScaledRationalMatrix w = sample_omega(rng, n, N, b);
  return w.left(random_sl(rng, n, word_length));
}

BulkSampling sample_bulk(const LevelContext& ctx, std::uint64_t seed, std::size_t count, const OmegaBounds& b,
                         std::size_t max_draws) {
  if (max_draws == 0) max_draws = 50 * count + 100;
  BulkSampling out;
  while (out.samples.size() < count) {
    if (out.draws >= max_draws) throw MathError("bulk sampler exhausted its draw budget");
    const std::uint64_t index = out.draws++;
    Rng rng(derive_seed(seed, index));
    BulkSample s;
    s.index = index;
    s.source = sample_translate(rng, ctx.n(), ctx.N(), b);
    s.cert = fricke_reduce(ctx, s.source);
    if (s.cert.fcase == FrickeCase::III) out.samples.push_back(std::move(s));
  }
  out.acceptance = out.draws ? static_cast<double>(out.samples.size()) / static_cast<double>(out.draws) : 0;
  out.low_acceptance = out.acceptance < acceptance_floor;
  return out;
}

}  // namespace latfricke
