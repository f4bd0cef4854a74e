#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latfricke/budget.hpp"
#include "latfricke/fricke.hpp"

namespace latfricke {

// Admitted determinants: exactly m, any d in [1, M] coprime to N, or
// p^nu q^((n-1) nu).
struct DeterminantSpec {
  enum class Kind { Exact, UpTo, Shape };
  Kind kind = Kind::Exact;
  Integer value{1};  // m, M, or p^nu q^((n-1) nu)
  long p = 0, q = 0, nu = 0;

  static DeterminantSpec exact(const Integer& m);
  static DeterminantSpec up_to(const Integer& bound);
  static DeterminantSpec shape(long p, long q, long nu, long n);

  // The m in the norm condition m^(2/n): m, M, or the shape value.
  const Integer& norm_base() const { return value; }
  bool admits(const Integer& det) const;
  std::string to_string() const;
};

// Delta_j(gamma) == value for every listed (j, value).
using DivisorFilter = std::vector<std::pair<std::size_t, Integer>>;
// Delta_j = (q^(n-1))^(j-1) for 1 <= j <= n-1.
DivisorFilter amplifier_divisor_filter(long n, long q);
// Delta_{n-1} = q^((n-1)(n-2)).
DivisorFilter parabolic_divisor_filter(long n, long q);
bool passes(const DivisorFilter& f, const IntMatrix& gamma);

struct HQuery {
  LevelContext ctx;
  ScaledRationalMatrix z;
  DeterminantSpec det;
  Rational c2;  // ||z^{-1} gamma z||_F^2 <= c2 * base^(2/n)
  DivisorFilter divisors;
  bool keep = true;          // store the matrices
  double max_estimate = 2e7; // refuse above this many predicted matrices

  HQuery(LevelContext c, ScaledRationalMatrix zz, DeterminantSpec d);
  // Validates C^2 > 0, gcd(m, N) = 1 and the dimensions; throws std::invalid_argument.
  void validate() const;
};

enum class DegeneracyTag { Nondegenerate, Parabolic, Unclassified };
const char* degeneracy_name(DegeneracyTag t);

// Parabolic when char_poly = (X - b)^n, b integral.  For prime n every other
// matrix is non-degenerate; for composite n the rest is left unclassified.
DegeneracyTag classify_degeneracy(const IntMatrix& gamma, long nu);

struct CountResult {
  std::vector<IntMatrix> matrices;  // sorted, row-major lexicographic
  std::vector<DegeneracyTag> matrix_tags;
  std::size_t count = 0;
  std::vector<std::uint64_t> row_candidates;  // index i: candidates examined for row i
  std::map<Integer, std::size_t> by_det;
  std::map<DegeneracyTag, std::size_t> tags;
  double estimate = 0;
};

// Squared Frobenius norm of z^{-1} gamma z, exact.
Rational conjugated_norm_sq(const ScaledRationalMatrix& z, const IntMatrix& gamma);
// The bound C^2 base^(2/n).
ScaledLength norm_bound(const HQuery& q);
// Rough size of the answer, used for refusals.
double count_estimate(const HQuery& q);

// Rows are chosen from the last upward.  Row n runs over L_{z_N}; row i < n
// over L_z in a ball centred at -sum_{j>i} (n(x)^{-1})_{ij} gamma_j, with the
// budget left after the rows below it.
CountResult enumerate_H(const HQuery& q, Deadline deadline = Deadline::from_env());
// Integer box |gamma_ij|^2 <= G_ii (G^{-1})_jj U from the Gram G of z.
CountResult naive_oracle(const HQuery& q, double max_box = 5e7);

struct LastRowCensus {
  std::map<IntVec, std::size_t> extensions;
  std::size_t admissible_rows = 0;
  std::size_t max_extension = 0;          // over last rows
  std::size_t max_extension_per_det = 0;  // over (last row, determinant)
  std::size_t total = 0;
  Integer lambda_n;  // the determinant scale
};

LastRowCensus last_row_census(const HQuery& q, Deadline deadline = Deadline::from_env());

struct ParabolicDiagnostic {
  IntMatrix gamma;
  IntMatrix h;    // h gamma h^{-1} upper triangular
  long cusp = 0;  // k with h^{-1} in Gamma_0(N) w_k U_n(Z)
  IntMatrix eta;  // w_k^T sigma gamma sigma^{-1} w_k
  IntVec superdiagonal;
  bool superdiagonal_has_zero = false;
  Integer delta_eta;  // Delta_{n-1}(eta)
  bool m_divides_delta = false;
  bool delta_invariant = false;  // Delta_{n-1}(eta) == Delta_{n-1}(gamma)
  bool passes_filter = false;
};

struct ParabolicReport {
  long p = 0, q = 0;
  Integer m;  // p q^(n-1); the determinant is m^n
  Rational nilpotent_budget;
  Rational c2;  // n + budget / m^2
  std::size_t nilpotent_candidates = 0;
  std::vector<ParabolicDiagnostic> candidates;  // parabolic gamma before the divisor filter
  std::size_t members = 0;                      // after the filter
  bool diagnostics_consistent = true;
  std::vector<std::uint64_t> row_candidates;
};

// H_par(z, m^n, N) with m = p q^(n-1): gamma = m I + M with M nilpotent of
// level shape and ||z^{-1} M z||_F^2 <= budget, which is the norm condition at
// C^2 = n + budget/m^2.  Filter Delta_{n-1} = q^((n-1)(n-2)).
ParabolicReport parabolic_exclusion_check(const LevelContext& ctx, const ScaledRationalMatrix& z, long p, long q,
                                          const Rational& nilpotent_budget,
                                          Deadline deadline = Deadline::from_env());

// Upper triangularizing h in SL_n(Z) for an integral matrix with a single
// integral eigenvalue.
IntMatrix triangularize(const IntMatrix& gamma, const Integer& eigenvalue);

struct AmplifierEntry {
  long L = 0, nu = 0, p = 0, q = 0;
  Integer det;
  std::size_t count = 0;
  bool refused = false;
  double estimate = 0;
  double ratio_shape = 0;  // count / (det (1 + det/N)^(n-1))
};

struct AmplifierSum {
  long L = 0, nu = 0;
  std::size_t total = 0;
  bool complete = true;
  double ratio_L = 0;  // total / L^((n-1) nu + 1)
};

struct AmplifierTable {
  std::vector<AmplifierEntry> entries;
  std::vector<AmplifierSum> sums;
  bool bulk = true;  // z carries a Case III certificate
};

// Primes p, q in [L, 2L] not dividing N; nu from 1 to max_nu.
AmplifierTable amplifier_sums(const LevelContext& ctx, const ScaledRationalMatrix& z, const std::vector<long>& Ls,
                              long max_nu, const Rational& c2, bool divisor_filter, double max_estimate = 2e7);

}  // namespace latfricke
