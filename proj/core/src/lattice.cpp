#include "latfricke/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <mutex>

namespace latfricke {

struct Lattice::Cache {
  std::once_flag once;
  std::unique_ptr<BallEnumerator> enumerator;
};

bool matches(const LVec& v, Pattern p, long N) {
  switch (p) {
    case Pattern::None:
      return true;
    case Pattern::LastRowGamma0:
      for (std::size_t j = 0; j + 1 < v.size(); ++j)
        if (v[j] % N != 0) return false;
      return true;
    case Pattern::LastCoordDivisible:
      return v.back() % N == 0;
  }
  return false;
}

const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::None: return "none";
    case Pattern::LastRowGamma0: return "last-row-gamma0";
    case Pattern::LastCoordDivisible: return "last-coordinate-divisible";
  }
  return "?";
}

Lattice::Lattice(ScaledRationalMatrix basis)
    : basis_(std::move(basis)), gram_(basis_.gram_mantissa()), cache_(std::make_shared<Cache>()) {
  if (det(basis_.mantissa()) == 0) throw SingularMatrix();
}

ScaledLength Lattice::scale(const Rational& mantissa) const {
  return ScaledLength(mantissa, gram_exponent(), Integer(level()));
}

ScaledLength Lattice::norm_sq(const LVec& coeffs) const {
  RatVec c = to_rat_vec(coeffs);
  return scale(quad_form(gram_, c));
}

ScaledLength Lattice::det_sq() const {
  return ScaledLength(det(gram_), gram_exponent() * Rational(static_cast<long>(dim())), Integer(level()));
}

Threshold Lattice::mantissa_threshold(const ScaledLength& r2) const {
  Rational e = gram_exponent();
  if (e == 0) return Threshold(r2);
  return Threshold(r2.times_power(-e, Integer(level())));
}

const BallEnumerator& Lattice::enumerator() const {
  std::call_once(cache_->once, [this] { cache_->enumerator = std::make_unique<BallEnumerator>(gram_); });
  return *cache_->enumerator;
}

Lattice dual(const Lattice& l) { return Lattice(l.basis().inv_transpose()); }

Lattice exterior_power(const Lattice& l, std::size_t j) {
  const std::size_t n = l.dim();
  if (j < 1 || j > n) throw std::invalid_argument("exterior power index out of range");
  const auto& b = l.basis();
  return Lattice(ScaledRationalMatrix(compound(b.mantissa(), j), b.k() * static_cast<long>(j), b.level(), b.root()));
}

bool wedge_dual_isometry(const ScaledRationalMatrix& z) {
  const std::size_t n = z.dim();
  const RationalMatrix& m = z.mantissa();
  RationalMatrix wedge = compound(m, n - 1);
  // Subsets in lexicographic order omit n-1, n-2, ..., 0.
  RationalMatrix q(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t missing = n - 1 - s;
    q(missing, s) = (missing % 2 == 0) ? Rational(1) : Rational(-1);
  }
  RationalMatrix cof = det(m) * inverse(m).transpose();
  ScaledRationalMatrix lhs(q * wedge, z.k() * static_cast<long>(n - 1), z.level(), z.root());
  ScaledRationalMatrix rhs(cof, z.k() * static_cast<long>(n - 1), z.level(), z.root());
  return lhs.gram_exponent() == rhs.gram_exponent() && lhs.gram_mantissa() == rhs.gram_mantissa();
}

namespace {

struct Candidate {
  Rational q;
  IntVec x;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.q != b.q) return a.q < b.q;
  return lex_less(a.x, b.x);
}

Rational max_reduced_diag(const BallEnumerator& e) {
  Rational m(0);
  for (std::size_t i = 0; i < e.dim(); ++i) m = std::max(m, e.reduced_gram()(i, i));
  return m;
}

Rational min_reduced_diag(const BallEnumerator& e) {
  Rational m = e.reduced_gram()(0, 0);
  for (std::size_t i = 1; i < e.dim(); ++i) m = std::min(m, e.reduced_gram()(i, i));
  return m;
}

bool is_zero(const LVec& x) {
  for (long v : x)
    if (v != 0) return false;
  return true;
}

bool canonical_sign(const LVec& x) {
  for (long v : x) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

}  // namespace

MinimaProfile successive_minima(const Lattice& l) {
  const auto& e = l.enumerator();
  const std::size_t n = l.dim();
  std::vector<Candidate> cands;
  e.enumerate(Threshold::rational(max_reduced_diag(e)), [&](const LVec& x, const Rational& q) {
    if (!is_zero(x) && canonical_sign(x)) cands.push_back({q, to_int_vec(x)});
    return true;
  });
  std::sort(cands.begin(), cands.end(), candidate_less);
  MinimaProfile prof;
  std::vector<RatVec> rows;
  for (const auto& c : cands) {
    rows.push_back(to_rational(c.x));
    RationalMatrix m = RationalMatrix::from_rows(rows);
    if (rank(m) == rows.size()) {
      prof.lambda_sq.push_back(l.scale(c.q));
      prof.witnesses.push_back(c.x);
      if (rows.size() == n) break;
    } else {
      rows.pop_back();
    }
  }
  if (prof.witnesses.size() != n) throw MathError("successive minima: enumeration radius too small");
  return prof;
}

BallPoints count_points_in_ball(const Lattice& l, const RatVec& center, const ScaledLength& r2, bool keep_points) {
  BallPoints out;
  l.enumerator().enumerate(center, l.mantissa_threshold(r2), [&](const LVec& x, const Rational&) {
    ++out.count;
    if (keep_points) out.points.push_back(to_int_vec(x));
    return true;
  });
  if (keep_points) std::sort(out.points.begin(), out.points.end(), lex_less);
  return out;
}

std::size_t LengthSpectrum::total() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.second;
  return t;
}

namespace {

void normalize_entries(std::vector<std::pair<ScaledLength, std::size_t>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<ScaledLength, std::size_t>> out;
  for (auto& e : v) {
    if (!out.empty() && out.back().first == e.first) out.back().second += e.second;
    else out.push_back(e);
  }
  v = std::move(out);
}

}  // namespace

LengthSpectrum primitive_spectrum(const Lattice& l, const ScaledLength& r2, Pattern p, long N) {
  std::vector<Rational> qs;
  l.enumerator().enumerate(l.mantissa_threshold(r2), [&](const LVec& x, const Rational& q) {
    if (is_zero(x) || !matches(x, p, N)) return true;
    if (!is_primitive(to_int_vec(x))) return true;
    qs.push_back(q);
    return true;
  });
  std::sort(qs.begin(), qs.end());
  LengthSpectrum s{r2, {}};
  for (std::size_t i = 0; i < qs.size();) {
    std::size_t j = i;
    while (j < qs.size() && qs[j] == qs[i]) ++j;
    s.entries.emplace_back(l.scale(qs[i]), j - i);
    i = j;
  }
  normalize_entries(s.entries);
  return s;
}

LengthSpectrum merge_spectra(const LengthSpectrum& a, const LengthSpectrum& b) {
  LengthSpectrum s{a.bound, a.entries};
  s.entries.insert(s.entries.end(), b.entries.begin(), b.entries.end());
  normalize_entries(s.entries);
  return s;
}

bool same_spectrum(const LengthSpectrum& a, const LengthSpectrum& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (a.entries[i].first != b.entries[i].first || a.entries[i].second != b.entries[i].second) return false;
  return true;
}

LengthSpectrum rescale(const LengthSpectrum& s, const Rational& f, const Integer& base) {
  LengthSpectrum out{s.bound.times_power(f, base), {}};
  for (const auto& e : s.entries) out.entries.emplace_back(e.first.times_power(f, base), e.second);
  normalize_entries(out.entries);
  return out;
}

GramShortest shortest_in_gram(const BallEnumerator& e, const std::function<bool(const LVec&)>& pred) {
  Rational bound = min_reduced_diag(e);
  for (int round = 0; round < 200; ++round) {
    bool found = false;
    Candidate best;
    e.enumerate(Threshold::rational(bound), [&](const LVec& x, const Rational& q) {
      if (is_zero(x) || !canonical_sign(x) || !pred(x)) return true;
      Candidate c{q, to_int_vec(x)};
      if (!found || candidate_less(c, best)) best = std::move(c);
      found = true;
      return true;
    });
    if (found) return {best.q, best.x};
    bound *= 4;
  }
  throw MathError("shortest_with: no qualifying vector found");
}

ShortestResult shortest_with(const Lattice& l, const std::function<bool(const LVec&)>& pred) {
  GramShortest s = shortest_in_gram(l.enumerator(), pred);
  return {l.scale(s.q), s.witness};
}

ShortestResult shortest_vector(const Lattice& l) {
  return shortest_with(l, [](const LVec&) { return true; });
}

BallVolumeSq ball_volume_sq(long n) {
  if (n < 1) throw std::invalid_argument("ball volume needs n >= 1");
  const long k = n / 2;
  Integer kfact(1), nfact(1);
  for (long i = 2; i <= k; ++i) kfact *= i;
  for (long i = 2; i <= n; ++i) nfact *= i;
  if (n % 2 == 0) return {make_rational(Integer(1), kfact * kfact), n};
  Integer two_n(1);
  two_n <<= static_cast<mp_bitcnt_t>(n);
  Rational c = make_rational(two_n * kfact, nfact);
  return {c * c, n - 1};
}

Rational pi_lower() { return make_rational(Integer("3141592653589793"), Integer("1000000000000000")); }
Rational pi_upper() { return make_rational(Integer("3141592653589794"), Integer("1000000000000000")); }

namespace {

Rational rational_pow(const Rational& x, long e) {
  Rational r(1);
  for (long i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

MinkowskiCheck minkowski_second(const Lattice& l) { return minkowski_second(l, successive_minima(l)); }

MinkowskiCheck minkowski_second(const Lattice& l, const MinimaProfile& minima) {
  const long n = static_cast<long>(l.dim());
  MinkowskiCheck out;
  out.product_sq = minima.lambda_sq.front();
  for (std::size_t i = 1; i < minima.lambda_sq.size(); ++i) out.product_sq = out.product_sq * minima.lambda_sq[i];
  out.det_sq = l.det_sq();
  const BallVolumeSq v = ball_volume_sq(n);
  Integer four_n(1), nfact(1);
  four_n <<= static_cast<mp_bitcnt_t>(2 * n);
  for (long i = 2; i <= n; ++i) nfact *= i;
  const Rational lo = make_rational(four_n, nfact * nfact);
  const Rational hi(four_n);
  // Lower side uses pi_lo, upper side pi_hi.
  out.lower_ok = out.product_sq.times(v.c * rational_pow(pi_lower(), v.pi_power)) >= out.det_sq.times(lo);
  out.upper_ok = out.product_sq.times(v.c * rational_pow(pi_upper(), v.pi_power)) <= out.det_sq.times(hi);
  out.ratio = std::sqrt(out.product_sq.to_double() * v.c.get_d() * std::pow(std::numbers::pi, static_cast<double>(v.pi_power)) /
                        out.det_sq.to_double());
  return out;
}

CompoundCheck compound_check(const Lattice& l, const MinimaProfile& minima, std::size_t j) {
  if (j < 1 || j > l.dim()) throw std::invalid_argument("compound_check: j out of range");
  CompoundCheck out;
  out.j = j;
  out.wedge_min_sq = shortest_vector(exterior_power(l, j)).length_sq;
  out.product_sq = minima.lambda_sq.front();
  for (std::size_t i = 1; i < j; ++i) out.product_sq = out.product_sq * minima.lambda_sq[i];
  out.upper_ok = out.wedge_min_sq <= out.product_sq;
  out.ratio = std::sqrt(out.wedge_min_sq.to_double() / out.product_sq.to_double());
  return out;
}

}  // namespace latfricke
