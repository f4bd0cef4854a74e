#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "latfricke/enumeration.hpp"
#include "latfricke/scaled.hpp"

namespace latfricke {

// Congruence patterns on coefficient vectors.
enum class Pattern {
  None,
  LastRowGamma0,       // N divides the first n-1 coordinates
  LastCoordDivisible,  // N divides the last coordinate
};

bool matches(const LVec& v, Pattern p, long N);
const char* pattern_name(Pattern p);

// L_z = Z^n z (row vectors).  The Gram matrix is N^(gram_exponent) times a
// rational mantissa.
class Lattice {
 public:
  explicit Lattice(ScaledRationalMatrix basis);

  std::size_t dim() const { return basis_.dim(); }
  const ScaledRationalMatrix& basis() const { return basis_; }
  const RationalMatrix& gram_mantissa() const { return gram_; }
  Rational gram_exponent() const { return basis_.gram_exponent(); }
  long level() const { return basis_.level(); }

  ScaledLength scale(const Rational& mantissa) const;
  ScaledLength norm_sq(const LVec& coeffs) const;
  ScaledLength det_sq() const;
  // Threshold on Gram mantissa values equivalent to  length^2 <= r2.
  Threshold mantissa_threshold(const ScaledLength& r2) const;

  const BallEnumerator& enumerator() const;

 private:
  struct Cache;
  ScaledRationalMatrix basis_;
  RationalMatrix gram_;
  std::shared_ptr<Cache> cache_;
};

Lattice dual(const Lattice& l);
Lattice exterior_power(const Lattice& l, std::size_t j);

// wedge^{n-1} L_z is isometric to L_{det(z) z^{-T}} under the signed basis map
// e_1 ^ .. ^ (e_i omitted) ^ .. ^ e_n  ->  (-1)^i e_i.  Checked on exact Gram data.
bool wedge_dual_isometry(const ScaledRationalMatrix& z);

struct MinimaProfile {
  std::vector<ScaledLength> lambda_sq;
  std::vector<IntVec> witnesses;
};

MinimaProfile successive_minima(const Lattice& l);

struct BallPoints {
  std::size_t count = 0;
  std::vector<IntVec> points;
};

// Points v = x z with |v - c z|^2 <= r2; the center c is in coefficient coordinates.
BallPoints count_points_in_ball(const Lattice& l, const RatVec& center, const ScaledLength& r2,
                                bool keep_points = true);

struct LengthSpectrum {
  ScaledLength bound;
  std::vector<std::pair<ScaledLength, std::size_t>> entries;  // sorted by length
  std::size_t total() const;
};

LengthSpectrum primitive_spectrum(const Lattice& l, const ScaledLength& r2, Pattern p = Pattern::None,
                                  long N = 1);
// Merges spectra (multiset union), sorted.
LengthSpectrum merge_spectra(const LengthSpectrum& a, const LengthSpectrum& b);
bool same_spectrum(const LengthSpectrum& a, const LengthSpectrum& b);
// Every length multiplied by c * N^f.
LengthSpectrum rescale(const LengthSpectrum& s, const Rational& f, const Integer& base);

struct ShortestResult {
  ScaledLength length_sq;
  IntVec witness;  // sign-normalized, lexicographically smallest among minimizers
};

// Shortest nonzero vector whose coefficient vector satisfies pred.  The search
// radius starts at the smallest reduced-basis length and is doubled until a
// qualifying vector appears; the minimum inside that ball is then certified.
ShortestResult shortest_with(const Lattice& l, const std::function<bool(const LVec&)>& pred);

struct GramShortest {
  Rational q;
  IntVec witness;
};
// Same search on a bare Gram matrix.
GramShortest shortest_in_gram(const BallEnumerator& e, const std::function<bool(const LVec&)>& pred);
ShortestResult shortest_vector(const Lattice& l);

// Squared unit-ball volume V_n^2 = c pi^e with c rational.
struct BallVolumeSq {
  Rational c;
  long pi_power = 0;
};
BallVolumeSq ball_volume_sq(long n);
// Rational bounds pi_lo < pi < pi_hi.
Rational pi_lower();
Rational pi_upper();

// (2^n/n!) d(L) <= lambda_1..lambda_n V_n <= 2^n d(L), compared squared, with
// pi replaced by the bound that makes each side conservative.
struct MinkowskiCheck {
  ScaledLength product_sq;  // (lambda_1 .. lambda_n)^2
  ScaledLength det_sq;
  bool lower_ok = false;
  bool upper_ok = false;
  double ratio = 0;  // lambda_1..lambda_n V_n / d(L)
};
MinkowskiCheck minkowski_second(const Lattice& l);
MinkowskiCheck minkowski_second(const Lattice& l, const MinimaProfile& minima);

// lambda_1(wedge^j L)^2 <= (lambda_1 .. lambda_j)^2.
struct CompoundCheck {
  std::size_t j = 0;
  ScaledLength wedge_min_sq;
  ScaledLength product_sq;
  bool upper_ok = false;
  double ratio = 0;  // lambda_1(wedge^j L) / (lambda_1 .. lambda_j)
};
CompoundCheck compound_check(const Lattice& l, const MinimaProfile& minima, std::size_t j);

}  // namespace latfricke
