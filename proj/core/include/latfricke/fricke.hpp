#pragma once

#include <map>
#include <string>
#include <vector>

#include "latfricke/iwasawa.hpp"
#include "latfricke/lattice.hpp"

namespace latfricke {

class LevelContext {
 public:
  // N must be prime; 2 <= n <= 8.
  LevelContext(long n, long N);

  long n() const { return n_; }
  long N() const { return N_; }
  // A_N = N^(-1/n) diag(1,...,1,N).
  const ScaledRationalMatrix& A() const { return a_; }
  // diag(1,...,1,N) and diag(N,...,N,1).
  const IntMatrix& last_diag() const { return last_diag_; }
  const IntMatrix& upper_diag() const { return upper_diag_; }

 private:
  long n_, N_;
  ScaledRationalMatrix a_;
  IntMatrix last_diag_, upper_diag_;
};

// z' = A_N z^{-T}.
ScaledRationalMatrix fricke_involute(const LevelContext& ctx, const ScaledRationalMatrix& z);
// z_N = diag(N,...,N,1) z.
ScaledRationalMatrix level_sublattice(const LevelContext& ctx, const ScaledRationalMatrix& z);

// diag(1..1,N)^{-1} gamma diag(1..1,N) lies in the transpose group.  Throws
// std::invalid_argument when gamma is not in Gamma_0(N).
bool conjugation_check(const LevelContext& ctx, const IntMatrix& gamma);

struct PatternMinimum {
  ScaledLength value;  // squared
  IntVec witness;      // coefficient vector in the lattice of z (alpha) or z^{-T} (beta)
};

// alpha^2(z): min |v z|^2 over primitive v with N | v_1..v_{n-1}.
PatternMinimum alpha_min(const LevelContext& ctx, const ScaledRationalMatrix& z);
// beta^2(z): min |w z^{-T}|^2 over primitive w with N | w_n.
PatternMinimum beta_min(const LevelContext& ctx, const ScaledRationalMatrix& z);

struct AlphaBeta {
  PatternMinimum alpha_z, beta_z, alpha_zp, beta_zp;
};

AlphaBeta compute_alpha_beta(const LevelContext& ctx, const ScaledRationalMatrix& z);

enum class Letter { A, B };
char letter_char(Letter l);

struct LatticeLetter {
  Letter letter = Letter::A;
  bool tie = false;
  ScaledLength a_expr, b_expr;  // squared candidate minima
  ScaledLength minimum() const { return letter == Letter::A ? a_expr : b_expr; }
};

// Letters for L_z, L_z*, L_z', L_z'* (ties resolved to A).
struct LXYClassification {
  LatticeLetter lz, lz_dual, lzp, lzp_dual;
  AlphaBeta ab;

  bool in_L(Letter x, Letter y) const { return lz.letter == x && lz_dual.letter == y; }
  bool in_Lp(Letter x, Letter y) const { return lzp.letter == x && lzp_dual.letter == y; }
  std::vector<std::string> ties() const;
  std::string label() const;  // e.g. "L(B,A) L'(B,A)"
};

LXYClassification classify(const LevelContext& ctx, const ScaledRationalMatrix& z);
LXYClassification classify(const LevelContext& ctx, const ScaledRationalMatrix& z, const AlphaBeta& ab);

enum class FrickeCase { I, II, III };
enum class Regime { BulkBalanced, CuspExceptional, Imbalanced };
const char* case_name(FrickeCase c);
const char* regime_name(Regime r);

struct FrickeCertificate {
  FrickeCase fcase = FrickeCase::I;
  bool applied_fricke = false;
  IntMatrix gamma;
  ScaledRationalMatrix w;  // gamma z or gamma z'
  IwasawaCoords coords;
  Regime regime = Regime::CuspExceptional;
  LXYClassification classification;
  std::vector<std::string> ties;
  bool certified = false;  // all case-specific exact checks passed
  std::vector<std::string> failures;
  Rational y1_sq_times_N_sq;  // Case III diagnostic
};

FrickeCertificate fricke_reduce(const LevelContext& ctx, const ScaledRationalMatrix& z);

// Certificate constants.
//  c1: Case I, y_1^2 >= 3/4.  The last two rows of w span a rank-2 sublattice
//      whose shortest vector is at least alpha = d_n; Hermite in rank 2 gives
//      (d_{n-1} d_n)^2 >= (3/4) d_n^4.
//  c3: Case III, y_1^2 N^2 >= 3/4.  Same argument in L_{w'}^* = L_{A_N^{-1} w},
//      whose last two rows have covolume N^{-1+2/n} d^2 y_1 and whose shortest
//      vector is N^{-1+1/n} alpha(w).
//  Case II: lambda_1^2 <= gamma_n N^{-2/n}, checked as a comparison of n-th powers.
//  case3_upper: empirical upper end of y_1^2 N^2 on the sampling compactum,
//  recorded from exploratory runs with seeds disjoint from the acceptance runs.
struct CertificateConstants {
  Rational c1{3, 4};
  Rational c3{3, 4};
  std::map<long, Rational> case3_upper;
};
const CertificateConstants& certificate_constants();
// gamma_n^n (Hermite constant to the n-th power), exact for n <= 8.
Rational hermite_power(long n);

struct BalancednessReport {
  MinimaProfile lz, lzp, lz_level, lzp_level;
  bool identity_dual_level = false;   // (z_N)^{-T} = N^{-1+1/n} z'
  bool identity_level_dual = false;   // (z')_N = N^{1-1/n} z^{-T}
  Rational det_level;                 // det z_N
  // (lambda_i^2)^n / N^{2(n-1)}: squares of lambda_i^n / N^{n-1}.
  std::vector<Rational> ratio_sq_level, ratio_sq_level_p;
};

// Spectrum table bookkeeping: the primitive spectrum of one of L_z, L_z*, L_z', L_z'*
// against the union of its two pattern sets, the second one computed on the
// partner lattice and rescaled.
enum class TableRow { Lz, LzDual, Lzp, LzpDual };
const char* table_row_name(TableRow r);

struct TableRowCheck {
  LengthSpectrum direct;
  LengthSpectrum a_part, b_part;  // rescaled to the row lattice
  bool equal = false;
};

TableRowCheck table_row_check(const LevelContext& ctx, const ScaledRationalMatrix& z, TableRow row,
                              const ScaledLength& r2);

struct LevelIdentities {
  bool dual_level = false;  // (z_N)^{-T} = N^{-1+1/n} z'
  bool level_dual = false;  // (z')_N = N^{1-1/n} z^{-T}
};
LevelIdentities level_identities(const LevelContext& ctx, const ScaledRationalMatrix& z);
BalancednessReport balancedness_report(const LevelContext& ctx, const ScaledRationalMatrix& z);

}  // namespace latfricke
