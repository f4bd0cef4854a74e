#pragma once

#include <cstdint>
#include <vector>

#include "latfricke/fricke.hpp"
#include "latfricke/random.hpp"

namespace latfricke {

// Siegel set eta^2 = 3/4, |x_ij| <= 1/2, further cut to y_i^2 <= 4 and
// d_i^2 in [1/4, 4].  Coordinates are drawn with denominator `den`.
struct OmegaBounds {
  Rational y_sq_lo{3, 4};
  Rational y_sq_hi{4};
  Rational d_sq_lo{1, 4};
  Rational d_sq_hi{4};
  long den = 12;
};

bool in_omega(const IwasawaCoords& c, const OmegaBounds& b = {});
// n(x) diag(d_1..d_n) with det 1, rejection sampled into Omega.
ScaledRationalMatrix sample_omega(Rng& rng, long n, long N, const OmegaBounds& b = {});
// gamma w with w from sample_omega and gamma a random SL_n(Z) word.
ScaledRationalMatrix sample_translate(Rng& rng, long n, long N, const OmegaBounds& b = {}, int word_length = 24);

struct BulkSample {
  std::uint64_t index = 0;     // draw index; the draw uses derive_seed(seed, index)
  ScaledRationalMatrix source;  // the translate that was reduced
  FrickeCertificate cert;
  const ScaledRationalMatrix& z() const { return cert.w; }
};

struct BulkSampling {
  std::vector<BulkSample> samples;
  std::size_t draws = 0;
  double acceptance = 0;
  bool low_acceptance = false;  // below acceptance_floor
};

inline constexpr double acceptance_floor = 0.05;

// Reduces draws until `count` Case III certificates are collected.  Throws
// MathError after max_draws (default 50 count + 100) draws.
BulkSampling sample_bulk(const LevelContext& ctx, std::uint64_t seed, std::size_t count, const OmegaBounds& b = {},
                         std::size_t max_draws = 0);

}  // namespace latfricke
