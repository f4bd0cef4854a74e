#include "latfricke/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "latfricke/group.hpp"
#include "latfricke/normal_form.hpp"

namespace latfricke {

DeterminantSpec DeterminantSpec::exact(const Integer& m) {
  if (m < 1) throw std::invalid_argument("determinant must be positive");
  DeterminantSpec s;
  s.kind = Kind::Exact;
  s.value = m;
  return s;
}

DeterminantSpec DeterminantSpec::up_to(const Integer& bound) {
  if (bound < 1) throw std::invalid_argument("determinant bound must be positive");
  DeterminantSpec s;
  s.kind = Kind::UpTo;
  s.value = bound;
  return s;
}

DeterminantSpec DeterminantSpec::shape(long p, long q, long nu, long n) {
  if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument("p and q must be prime");
  if (nu < 1) throw std::invalid_argument("nu must be positive");
  DeterminantSpec s;
  s.kind = Kind::Shape;
  s.p = p;
  s.q = q;
  s.nu = nu;
  s.value = ipow(Integer(p), static_cast<unsigned long>(nu)) *
            ipow(Integer(q), static_cast<unsigned long>((n - 1) * nu));
  return s;
}

bool DeterminantSpec::admits(const Integer& det) const {
  if (kind == Kind::UpTo) return det >= 1 && det <= value;
  return det == value;
}

std::string DeterminantSpec::to_string() const {
  switch (kind) {
    case Kind::Exact: return "=" + latfricke::to_string(value);
    case Kind::UpTo: return "<=" + latfricke::to_string(value);
    case Kind::Shape:
      return std::to_string(p) + "^" + std::to_string(nu) + "*" + std::to_string(q) + "^(" + std::to_string(nu) +
             "(n-1))";
  }
  return "?";
}

DivisorFilter amplifier_divisor_filter(long n, long q) {
  DivisorFilter f;
  const Integer qq = ipow(Integer(q), static_cast<unsigned long>(n - 1));
  for (long j = 1; j <= n - 1; ++j) f.emplace_back(static_cast<std::size_t>(j), ipow(qq, static_cast<unsigned long>(j - 1)));
  return f;
}

DivisorFilter parabolic_divisor_filter(long n, long q) {
  return {{static_cast<std::size_t>(n - 1), ipow(Integer(q), static_cast<unsigned long>((n - 1) * (n - 2)))}};
}

bool passes(const DivisorFilter& f, const IntMatrix& gamma) {
  if (f.empty()) return true;
  IntVec d = determinantal_divisors(gamma);
  for (const auto& [j, v] : f) {
    if (j < 1 || j > d.size()) throw std::invalid_argument("divisor index out of range");
    if (d[j - 1] != v) return false;
  }
  return true;
}

HQuery::HQuery(LevelContext c, ScaledRationalMatrix zz, DeterminantSpec d)
    : ctx(std::move(c)), z(std::move(zz)), det(std::move(d)), c2(ctx.n()) {}

void HQuery::validate() const {
  if (static_cast<long>(z.dim()) != ctx.n()) throw std::invalid_argument("dimension mismatch");
  if (z.det_mantissa() == 0) throw SingularMatrix();
  if (c2 <= 0) throw std::invalid_argument("C^2 must be positive");
  const Integer N(ctx.N());
  switch (det.kind) {
    case DeterminantSpec::Kind::Exact:
    case DeterminantSpec::Kind::Shape:
      if (gcd(det.value, N) != 1) throw std::invalid_argument("determinant must be coprime to N");
      break;
    case DeterminantSpec::Kind::UpTo:
      break;  // filtered per determinant
  }
}

const char* degeneracy_name(DegeneracyTag t) {
  switch (t) {
    case DegeneracyTag::Nondegenerate: return "nondegenerate";
    case DegeneracyTag::Parabolic: return "parabolic";
    case DegeneracyTag::Unclassified: return "unclassified";
  }
  return "?";
}

namespace {

// char_poly == (X - b)^n for an integer b.
bool single_root_power(const IntVec& c, std::size_t n, Integer& b) {
  // c_{n-1} = -n b.
  if (c[n - 1] % Integer(static_cast<long>(n)) != 0) return false;
  b = -c[n - 1] / Integer(static_cast<long>(n));
  Integer binom(1);
  Integer pw(1);
  for (std::size_t k = 0; k <= n; ++k) {
    // coefficient of X^(n-k) is binom(n,k) (-b)^k
    if (c[n - k] != binom * pw) return false;
    binom = binom * Integer(static_cast<long>(n - k)) / Integer(static_cast<long>(k + 1));
    pw *= -b;
  }
  return true;
}

}  // namespace

DegeneracyTag classify_degeneracy(const IntMatrix& gamma, long nu) {
  const std::size_t n = gamma.rows();
  if (!gamma.square() || n < 2) throw std::invalid_argument("square matrix of size >= 2 expected");
  if (nu < 1 || nu > static_cast<long>(n)) throw std::invalid_argument("nu must satisfy 1 <= nu <= n");
  Integer b;
  if (single_root_power(char_poly(gamma), n, b)) return DegeneracyTag::Parabolic;
  return is_prime(static_cast<long>(n)) ? DegeneracyTag::Nondegenerate : DegeneracyTag::Unclassified;
}

Rational conjugated_norm_sq(const ScaledRationalMatrix& z, const IntMatrix& gamma) {
  RationalMatrix g = z.gram_mantissa();
  RationalMatrix gi = inverse(g);
  RationalMatrix r = to_rational(gamma);
  RationalMatrix a = r * g * r.transpose() * gi;
  Rational t(0);
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

ScaledLength norm_bound(const HQuery& q) {
  return ScaledLength(q.c2, make_rational(2, q.ctx.n()), q.det.norm_base());
}

double count_estimate(const HQuery& q) {
  // Volume of {gamma : ||z^{-1} gamma z||^2 <= U} over the covolume N^(n-1) of
  // the level pattern; conjugation by z preserves volume.
  const double n = static_cast<double>(q.ctx.n());
  const double dim = n * n;
  const double u = norm_bound(q).to_double();
  const double log_ball = dim / 2 * std::log(std::numbers::pi) - std::lgamma(dim / 2 + 1);
  const double v = std::exp(log_ball + dim / 2 * std::log(u) - (n - 1) * std::log(static_cast<double>(q.ctx.N())));
  return std::max(v, 1.0);
}

namespace {

bool matrix_less(const IntMatrix& a, const IntMatrix& b) {
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(), b.data().end());
}

// Row-by-row walk over integral X with level last row and
// ||z^{-1} X z||_F^2 within the bound.  Zero rows are skipped when
// skip_zero_rows is set.
class RowWalker {
 public:
  using Leaf = std::function<void(const IntMatrix&)>;

  RowWalker(const LevelContext& ctx, const ScaledRationalMatrix& z)
      : n_(z.dim()), N_(ctx.N()), gram_(z.gram_mantissa()) {
    IwasawaCoords c = iwasawa_from_gram(gram_);
    ninv_ = inverse(c.x);
    dm_ = c.d_sq_mantissa;
    RationalMatrix d = to_rational(ctx.upper_diag());
    top_ = std::make_unique<BallEnumerator>(d * gram_ * d);
    rest_ = std::make_unique<BallEnumerator>(gram_);
  }

  std::vector<std::uint64_t> run(const ScaledLength& bound, bool skip_zero_rows, Deadline& deadline,
                                 double estimate, const Leaf& leaf) {
    stats_.assign(n_, 0);
    rows_.assign(n_, LVec(n_, 0));
    skip_zero_ = skip_zero_rows;
    deadline_ = &deadline;
    estimate_ = estimate;
    leaf_ = &leaf;
    const std::size_t k = n_ - 1;
    Threshold t = Threshold(bound).scaled(Rational(1) / dm_[k]);
    top_->enumerate(t, [&](const LVec& u, const Rational& q) {
      if (skip_zero_ && is_zero(u)) return true;
      ++stats_[k];
      deadline_->poll("enumerate_H", estimate_);
      for (std::size_t j = 0; j + 1 < n_; ++j) rows_[k][j] = u[j] * N_;
      rows_[k][n_ - 1] = u[n_ - 1];
      if (k == 0) emit();
      else descend(k - 1, bound, q / dm_[k]);
      return true;
    });
    return stats_;
  }

 private:
  static bool is_zero(const LVec& v) {
    return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
  }

  void descend(std::size_t k, const ScaledLength& bound, const Rational& partial) {
    RatVec center(n_, Rational(0));
    for (std::size_t i = k + 1; i < n_; ++i) {
      const Rational& c = ninv_(k, i);
      if (c == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) center[j] -= c * rows_[i][j];
    }
    Threshold t = Threshold(bound, partial).scaled(Rational(1) / dm_[k]);
    rest_->enumerate(center, t, [&](const LVec& x, const Rational& q) {
      if (skip_zero_ && is_zero(x)) return true;
      ++stats_[k];
      deadline_->poll("enumerate_H", estimate_);
      rows_[k] = x;
      if (k == 0) emit();
      else descend(k - 1, bound, partial + q / dm_[k]);
      return true;
    });
  }

  void emit() {
    IntMatrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = rows_[i][j];
    (*leaf_)(m);
  }

  std::size_t n_;
  long N_;
  RationalMatrix gram_, ninv_;
  std::vector<Rational> dm_;
  std::unique_ptr<BallEnumerator> top_, rest_;
  std::vector<std::uint64_t> stats_;
  std::vector<LVec> rows_;
  bool skip_zero_ = true;
  Deadline* deadline_ = nullptr;
  double estimate_ = 0;
  const Leaf* leaf_ = nullptr;
};

void record(CountResult& r, const HQuery& q, IntMatrix m, const Integer& d) {
  ++r.count;
  ++r.by_det[d];
  DegeneracyTag t = classify_degeneracy(m, q.det.kind == DeterminantSpec::Kind::Shape ? q.det.nu : q.ctx.n());
  ++r.tags[t];
  if (q.keep) {
    r.matrices.push_back(std::move(m));
    r.matrix_tags.push_back(t);
  }
}

void sort_result(CountResult& r) {
  std::vector<std::size_t> idx(r.matrices.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return matrix_less(r.matrices[a], r.matrices[b]); });
  std::vector<IntMatrix> m;
  std::vector<DegeneracyTag> t;
  for (std::size_t i : idx) {
    m.push_back(std::move(r.matrices[i]));
    t.push_back(r.matrix_tags[i]);
  }
  r.matrices = std::move(m);
  r.matrix_tags = std::move(t);
}

bool admitted_det(const HQuery& q, const Integer& d) {
  if (!q.det.admits(d)) return false;
  return gcd(d, Integer(q.ctx.N())) == 1;
}

void refuse_if_large(const HQuery& q, double est) {
  if (est > q.max_estimate) {
    std::ostringstream os;
    os << "query too large for desk scale: about " << est << " candidate matrices";
    throw BudgetExceeded(os.str(), est);
  }
}

}  // namespace

CountResult enumerate_H(const HQuery& q, Deadline deadline) {
  q.validate();
  CountResult r;
  r.estimate = count_estimate(q);
  refuse_if_large(q, r.estimate);
  RowWalker walker(q.ctx, q.z);
  r.row_candidates = walker.run(norm_bound(q), true, deadline, r.estimate, [&](const IntMatrix& m) {
    Integer d = det(m);
    if (!admitted_det(q, d) || !passes(q.divisors, m)) return;
    record(r, q, m, d);
  });
  sort_result(r);
  return r;
}

CountResult naive_oracle(const HQuery& q, double max_box) {
  q.validate();
  const std::size_t n = q.z.dim();
  const long N = q.ctx.N();
  const RationalMatrix g = q.z.gram_mantissa();
  const RationalMatrix gi = inverse(g);
  const ScaledLength u = norm_bound(q);
  const Threshold t(u);
  // Slightly enlarged double bound; the box only has to contain the answer.
  const double ud = u.to_double() * (1 + 1e-9);
  std::vector<long> lo(n * n), hi(n * n), step(n * n, 1);
  double box = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double b = std::sqrt(to_double(g(i, i)) * to_double(gi(j, j)) * ud);
      long bi = static_cast<long>(std::floor(b)) + 1;
      std::size_t s = i * n + j;
      if (i + 1 == n && j + 1 < n) {
        step[s] = N;
        bi = (bi / N) * N;
      }
      lo[s] = -bi;
      hi[s] = bi;
      box *= static_cast<double>(2 * bi / step[s] + 1);
    }
  if (box > max_box) {
    std::ostringstream os;
    os << "oracle box too large: " << box << " points";
    throw BudgetExceeded(os.str(), box);
  }
  CountResult r;
  r.estimate = box;
  r.row_candidates.assign(n, 0);
  std::vector<long> cur(lo);
  IntMatrix m(n, n);
  while (true) {
    for (std::size_t s = 0; s < n * n; ++s) m(s / n, s % n) = cur[s];
    Integer d = det(m);
    if (d != 0 && admitted_det(q, d) && t.admits(conjugated_norm_sq(q.z, m)) && passes(q.divisors, m))
      record(r, q, m, d);
    std::size_t s = 0;
    while (s < n * n) {
      if (cur[s] + step[s] <= hi[s]) {
        cur[s] += step[s];
        break;
      }
      cur[s] = lo[s];
      ++s;
    }
    if (s == n * n) break;
  }
  sort_result(r);
  return r;
}

LastRowCensus last_row_census(const HQuery& q, Deadline deadline) {
  HQuery qq = q;
  qq.keep = true;
  CountResult r = enumerate_H(qq, deadline);
  LastRowCensus c;
  c.lambda_n = q.det.norm_base();
  std::map<std::pair<IntVec, Integer>, std::size_t> per_det;
  for (const auto& m : r.matrices) {
    ++c.extensions[m.row(m.rows() - 1)];
    ++per_det[{m.row(m.rows() - 1), det(m)}];
  }
  c.admissible_rows = c.extensions.size();
  c.total = r.count;
  for (const auto& [row, k] : c.extensions) c.max_extension = std::max(c.max_extension, k);
  for (const auto& [key, k] : per_det) c.max_extension_per_det = std::max(c.max_extension_per_det, k);
  return c;
}

namespace {

// Primitive integral v != 0 with v a = 0, for a singular integral matrix.
IntVec left_kernel_vector(const IntMatrix& a) {
  const std::size_t n = a.rows();
  // Null space of a^T by row reduction.
  RationalMatrix m = to_rational(a.transpose());
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t p = row;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(m(row, j), m(p, j));
    Rational inv = Rational(1) / m(row, c);
    for (std::size_t j = 0; j < n; ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) m(i, j) -= f * m(row, j);
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::size_t free = n;
  for (std::size_t c = 0; c < n; ++c)
    if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
      free = c;
      break;
    }
  if (free == n) throw MathError("matrix is not singular");
  RatVec v(n, Rational(0));
  v[free] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m(r, free);
  Integer den(1);
  for (const auto& x : v) den = lcm(den, Integer(x.get_den()));
  IntVec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Integer(v[i] * den);
  Integer c = content(out);
  for (auto& x : out) x /= c;
  return out;
}

}  // namespace

IntMatrix triangularize(const IntMatrix& gamma, const Integer& eigenvalue) {
  const std::size_t n = gamma.rows();
  IntMatrix b = gamma;
  for (std::size_t i = 0; i < n; ++i) b(i, i) -= eigenvalue;
  if (n == 1) {
    if (b(0, 0) != 0) throw MathError("eigenvalue mismatch");
    return IntMatrix::identity(1);
  }
  // g with last row v, v b = 0: g b g^{-1} has zero last row; recurse on the block.
  IntVec v = left_kernel_vector(b);
  IntMatrix g = complete_with_last_row(v);
  IntMatrix c = g * gamma * inverse_unimodular(g);
  IntMatrix block(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) block(i, j) = c(i, j);
  IntMatrix hb = triangularize(block, eigenvalue);
  IntMatrix h = IntMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) h(i, j) = hb(i, j);
  return h * g;
}

ParabolicReport parabolic_exclusion_check(const LevelContext& ctx, const ScaledRationalMatrix& z, long p, long q,
                                          const Rational& nilpotent_budget, Deadline deadline) {
  const long n = ctx.n();
  const std::size_t nn = static_cast<std::size_t>(n);
  if (n < 3 || !is_prime(n)) throw std::invalid_argument("parabolic exclusion needs prime n >= 3");
  if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument("p and q must be prime");
  if (ctx.N() % p == 0 || ctx.N() % q == 0) throw std::invalid_argument("p and q must not divide N");
  if (nilpotent_budget < 0) throw std::invalid_argument("budget must be nonnegative");
  ParabolicReport rep;
  rep.p = p;
  rep.q = q;
  rep.m = Integer(p) * ipow(Integer(q), static_cast<unsigned long>(n - 1));
  rep.nilpotent_budget = nilpotent_budget;
  rep.c2 = Rational(n) + nilpotent_budget / Rational(rep.m * rep.m);
  const DivisorFilter filter = parabolic_divisor_filter(n, q);
  const Integer delta_target = filter.front().second;

  // ||z^{-1}(mI + M)z||^2 = n m^2 + ||z^{-1} M z||^2 since tr M = 0.
  const double dim = static_cast<double>(n * n);
  double est = std::exp(dim / 2 * std::log(std::numbers::pi) - std::lgamma(dim / 2 + 1) +
                        dim / 2 * std::log(std::max(to_double(nilpotent_budget), 1e-300)) -
                        static_cast<double>(n - 1) * std::log(static_cast<double>(ctx.N())));
  RowWalker walker(ctx, z);
  rep.row_candidates = walker.run(ScaledLength(nilpotent_budget), false, deadline, est, [&](const IntMatrix& nil) {
    IntVec cp = char_poly(nil);
    for (std::size_t k = 0; k < nn; ++k)
      if (cp[k] != 0) return;
    ++rep.nilpotent_candidates;
    IntMatrix gamma = nil;
    for (std::size_t i = 0; i < nn; ++i) gamma(i, i) += rep.m;

    ParabolicDiagnostic d;
    d.gamma = gamma;
    d.h = triangularize(gamma, rep.m);
    CuspDecomposition cd = cusp_decompose(ctx, inverse_unimodular(d.h));
    d.cusp = cd.k;
    IntMatrix w = cusp_representative(n, cd.k);
    IntMatrix sigma = inverse_unimodular(cd.gamma);
    d.eta = w.transpose() * sigma * gamma * cd.gamma * w;
    for (std::size_t i = 0; i + 1 < nn; ++i) {
      d.superdiagonal.push_back(d.eta(i, i + 1));
      if (d.eta(i, i + 1) == 0) d.superdiagonal_has_zero = true;
    }
    bool upper = true;
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t j = 0; j < i; ++j) upper = upper && d.eta(i, j) == 0;
    for (std::size_t i = 0; i < nn; ++i) upper = upper && d.eta(i, i) == rep.m;
    d.delta_eta = determinantal_divisors(d.eta)[nn - 2];
    d.delta_invariant = d.delta_eta == determinantal_divisors(gamma)[nn - 2];
    d.m_divides_delta = d.delta_eta % rep.m == 0;
    d.passes_filter = d.delta_eta == delta_target;
    if (!upper || !d.delta_invariant) rep.diagnostics_consistent = false;
    if (d.passes_filter) ++rep.members;
    rep.candidates.push_back(std::move(d));
  });
  std::sort(rep.candidates.begin(), rep.candidates.end(),
            [](const ParabolicDiagnostic& a, const ParabolicDiagnostic& b) { return matrix_less(a.gamma, b.gamma); });
  return rep;
}

AmplifierTable amplifier_sums(const LevelContext& ctx, const ScaledRationalMatrix& z, const std::vector<long>& Ls,
                              long max_nu, const Rational& c2, bool divisor_filter, double max_estimate) {
  const long n = ctx.n();
  const long N = ctx.N();
  if (max_nu < 1 || max_nu > n) throw std::invalid_argument("nu must lie in 1..n");
  AmplifierTable t;
  t.bulk = fricke_reduce(ctx, z).fcase == FrickeCase::III;
  for (long L : Ls) {
    if (L < 2) throw std::invalid_argument("L must be at least 2");
    std::vector<long> primes;
    for (long p : primes_in(L, 2 * L))
      if (N % p != 0) primes.push_back(p);
    for (long nu = 1; nu <= max_nu; ++nu) {
      AmplifierSum s;
      s.L = L;
      s.nu = nu;
      for (long p : primes)
        for (long q : primes) {
          AmplifierEntry e;
          e.L = L;
          e.nu = nu;
          e.p = p;
          e.q = q;
          HQuery hq(ctx, z, DeterminantSpec::shape(p, q, nu, n));
          hq.c2 = c2;
          hq.keep = false;
          hq.max_estimate = max_estimate;
          if (divisor_filter) hq.divisors = amplifier_divisor_filter(n, q);
          e.det = hq.det.value;
          e.estimate = count_estimate(hq);
          try {
            e.count = enumerate_H(hq).count;
          } catch (const BudgetExceeded&) {
            e.refused = true;
            s.complete = false;
          }
          double dd = to_double(e.det);
          e.ratio_shape = static_cast<double>(e.count) / (dd * std::pow(1 + dd / static_cast<double>(N), static_cast<double>(n - 1)));
          s.total += e.count;
          t.entries.push_back(e);
        }
      s.ratio_L = static_cast<double>(s.total) / std::pow(static_cast<double>(L), static_cast<double>((n - 1) * nu + 1));
      t.sums.push_back(s);
    }
  }
  return t;
}

}  // namespace latfricke
