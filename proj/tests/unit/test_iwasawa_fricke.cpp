#include <gtest/gtest.h>

#include "latfricke/fricke.hpp"
#include "latfricke/iwasawa.hpp"
#include "latfricke/normal_form.hpp"
#include "test_support.hpp"

namespace latfricke {
namespace {

using testing::uniform;

ScaledRationalMatrix unscaled(const RationalMatrix& m, long N = 1) { return ScaledRationalMatrix(m, 0, N); }

// Random z with det 1: scale a random rational matrix by its determinant in the
// first row, so det = 1 exactly.
RationalMatrix random_det_one(std::mt19937_64& rng, std::size_t n) {
  RationalMatrix m = testing::random_rational_matrix(rng, n, 4, 3);
  Rational d = det(m);
  for (std::size_t j = 0; j < n; ++j) m(0, j) /= d;
  return m;
}

TEST(Iwasawa, Examples) {
  IwasawaCoords id = iwasawa_decompose(unscaled(RationalMatrix::identity(3)));
  for (const auto& y : id.y_sq) EXPECT_EQ(y, 1);
  for (const auto& d : id.d_sq) EXPECT_EQ(d, ScaledLength(Rational(1)));
  IwasawaCoords c = iwasawa_decompose(unscaled(RationalMatrix::diagonal({2, Rational(1, 2)})));
  EXPECT_EQ(c.d_sq[0], ScaledLength(Rational(4)));
  EXPECT_EQ(c.d_sq[1], ScaledLength(Rational(1, 4)));
  EXPECT_EQ(c.y_sq[0], 16);
}

TEST(Iwasawa, ReconstructionAndDeterminant) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 4));
    RationalMatrix m = testing::random_rational_matrix(rng, n, 5, 4);
    IwasawaCoords c = iwasawa_decompose(unscaled(m));
    EXPECT_EQ(c.reconstructed_gram(), gram(m));
    Rational prod(1);
    for (const auto& d : c.d_sq_mantissa) prod *= d;
    EXPECT_EQ(prod, det(m) * det(m));
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(c.x(i, i), 1);
  }
}

TEST(Iwasawa, SiegelReduceExamples) {
  SiegelWitness w = siegel_reduce(unscaled(RationalMatrix::identity(3)));
  EXPECT_TRUE(in_siegel(w.coords));
  EXPECT_EQ(w.coords.reconstructed_gram(), RationalMatrix::identity(3));
  // n = 2 translate by x = 1: reduction returns x = 0.
  SiegelWitness s = siegel_reduce(unscaled(RationalMatrix{{1, 1}, {0, 1}}));
  EXPECT_EQ(s.coords.x(0, 1), 0);
  EXPECT_EQ(det(s.gamma), 1);
  EXPECT_THROW(siegel_reduce(unscaled(RationalMatrix::identity(2)), Rational(4, 5)), std::invalid_argument);
}

TEST(Iwasawa, SiegelReduceRandom) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 4));
    IntMatrix u = testing::random_unimodular(rng, n, 12);
    RationalMatrix m = to_rational(u) * testing::random_rational_matrix(rng, n, 3, 3);
    SiegelWitness w = siegel_reduce(unscaled(m));
    EXPECT_EQ(det(w.gamma), 1);
    EXPECT_TRUE(in_siegel(w.coords));
    // Last row of gamma z is a shortest vector.
    Lattice l(unscaled(m));
    ScaledLength shortest = shortest_vector(l).length_sq;
    RatVec en(n, Rational(0));
    en.back() = 1;
    EXPECT_EQ(unscaled(m).left(w.gamma).squared_length(en), shortest);
  }
}

TEST(Iwasawa, BlockReduceUpper) {
  BlockReduction id = block_reduce_upper(unscaled(RationalMatrix::identity(2)));
  EXPECT_EQ(id.gamma, IntMatrix::identity(2));
  // Inner 2x2 block far from reduced.
  RationalMatrix m{{1, 7, 0}, {0, 1, 0}, {0, 0, 1}};
  BlockReduction b = block_reduce_upper(unscaled(m));
  EXPECT_GE(b.coords.y_sq[1], Rational(3, 4));
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 3, 4));
    RationalMatrix z = to_rational(testing::random_unimodular(rng, n, 10)) * testing::random_rational_matrix(rng, n, 3, 2);
    BlockReduction r = block_reduce_upper(unscaled(z));
    RationalMatrix w = to_rational(r.gamma) * z;
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(w(n - 1, j), z(n - 1, j));
    for (std::size_t j = 0; j + 1 < n; ++j) EXPECT_EQ(r.gamma(n - 1, j), 0);
    EXPECT_EQ(det(r.gamma), 1);
    for (std::size_t i = 1; i < r.coords.y_sq.size(); ++i) EXPECT_GE(r.coords.y_sq[i], Rational(3, 4));
  }
}

TEST(Fricke, InvoluteExamples) {
  LevelContext ctx(2, 5);
  ScaledRationalMatrix id = unscaled(RationalMatrix::identity(2), 5);
  ScaledRationalMatrix zp = fricke_involute(ctx, id);
  EXPECT_EQ(zp, ScaledRationalMatrix(RationalMatrix::diagonal({1, 5}), -1, 5));
  EXPECT_EQ(zp.det_value(), 1);
  EXPECT_EQ(ctx.A().inv_transpose(), ScaledRationalMatrix(RationalMatrix::diagonal({1, Rational(1, 5)}), 1, 5));
  EXPECT_THROW(LevelContext(2, 6), std::invalid_argument);
}

TEST(Fricke, InvolutionRandom) {
  std::mt19937_64 rng(24);
  for (long n = 2; n <= 4; ++n) {
    LevelContext ctx(n, 7);
    for (int t = 0; t < 30; ++t) {
      ScaledRationalMatrix z = unscaled(random_det_one(rng, static_cast<std::size_t>(n)), 7);
      EXPECT_EQ(fricke_involute(ctx, fricke_involute(ctx, z)), z);
      EXPECT_EQ(fricke_involute(ctx, z).det_value(), 1);
      EXPECT_TRUE(wedge_dual_isometry(z));
      BalancednessReport r = balancedness_report(ctx, z);
      EXPECT_TRUE(r.identity_dual_level);
      EXPECT_TRUE(r.identity_level_dual);
      EXPECT_EQ(r.det_level, ipow(Integer(7), static_cast<unsigned long>(n - 1)));
    }
  }
}

TEST(Fricke, ConjugationCheck) {
  LevelContext ctx(2, 5);
  EXPECT_TRUE(conjugation_check(ctx, IntMatrix::identity(2)));
  EXPECT_TRUE(conjugation_check(ctx, IntMatrix{{2, 1}, {5, 3}}));
  EXPECT_THROW(conjugation_check(ctx, IntMatrix{{1, 0}, {1, 1}}), std::invalid_argument);
}

TEST(Fricke, AlphaBetaIdentity) {
  LevelContext ctx(2, 5);
  AlphaBeta ab = compute_alpha_beta(ctx, unscaled(RationalMatrix::identity(2), 5));
  EXPECT_EQ(ab.alpha_z.value, ScaledLength(Rational(1)));
  EXPECT_EQ(ab.alpha_z.witness, (IntVec{0, 1}));
  EXPECT_EQ(ab.beta_z.value, ScaledLength(Rational(1)));
  EXPECT_EQ(ab.beta_z.witness, (IntVec{1, 0}));
  EXPECT_EQ(ab.alpha_zp.value, ScaledLength(Rational(5)));
}

TEST(Fricke, AlphaBetaMatchesPatternSpectrum) {
  // alpha^2 is the first length of the A-pattern spectrum of L_z.
  std::mt19937_64 rng(25);
  for (long n = 2; n <= 3; ++n) {
    LevelContext ctx(n, 5);
    for (int t = 0; t < 10; ++t) {
      ScaledRationalMatrix z = unscaled(random_det_one(rng, static_cast<std::size_t>(n)), 5);
      PatternMinimum a = alpha_min(ctx, z);
      LengthSpectrum s = primitive_spectrum(Lattice(z), a.value, Pattern::LastRowGamma0, 5);
      ASSERT_FALSE(s.entries.empty());
      EXPECT_EQ(s.entries.front().first, a.value);
      PatternMinimum b = beta_min(ctx, z);
      LengthSpectrum sb = primitive_spectrum(Lattice(z.inv_transpose()), b.value, Pattern::LastCoordDivisible, 5);
      ASSERT_FALSE(sb.entries.empty());
      EXPECT_EQ(sb.entries.front().first, b.value);
    }
  }
}

TEST(Fricke, ClassifyIdentity) {
  LevelContext ctx(2, 5);
  LXYClassification c = classify(ctx, unscaled(RationalMatrix::identity(2), 5));
  EXPECT_EQ(c.lz.letter, Letter::A);
  EXPECT_TRUE(c.lz.tie);
  EXPECT_EQ(c.lz.a_expr, ScaledLength(Rational(1)));
  // z' classifies symmetrically to z.
  LXYClassification cp = classify(ctx, fricke_involute(ctx, unscaled(RationalMatrix::identity(2), 5)));
  EXPECT_EQ(cp.lz.letter, c.lzp.letter);
  EXPECT_EQ(cp.lzp.letter, c.lz.letter);
  EXPECT_EQ(cp.lz_dual.letter, c.lzp_dual.letter);
}

TEST(Fricke, ReduceIdentity) {
  LevelContext ctx(3, 7);
  FrickeCertificate cert = fricke_reduce(ctx, unscaled(RationalMatrix::identity(3), 7));
  EXPECT_EQ(cert.fcase, FrickeCase::I);
  EXPECT_FALSE(cert.applied_fricke);
  EXPECT_EQ(cert.gamma, IntMatrix::identity(3));
  for (const auto& y : cert.coords.y_sq) EXPECT_EQ(y, 1);
  EXPECT_TRUE(cert.certified);
}

TEST(Fricke, ReduceUnbalancedExample) {
  // z = N^{-1/2} diag(1, N): lambda_1^2 = 1/N.  The A-expression of L_z'
  // attains the minimum, so the tie-to-A rule yields Case I on z'.
  LevelContext ctx(2, 5);
  ScaledRationalMatrix z(RationalMatrix::diagonal({1, 5}), -1, 5);
  EXPECT_EQ(shortest_vector(Lattice(z)).length_sq, ScaledLength(Rational(1, 5)));
  FrickeCertificate cert = fricke_reduce(ctx, z);
  EXPECT_EQ(cert.fcase, FrickeCase::I);
  EXPECT_TRUE(cert.applied_fricke);
  EXPECT_EQ(cert.w, unscaled(RationalMatrix::identity(2), 5));
  EXPECT_TRUE(cert.certified);
}

TEST(Fricke, ReduceRandomCertificates) {
  std::mt19937_64 rng(26);
  for (long n = 2; n <= 3; ++n) {
    LevelContext ctx(n, 11);
    for (int t = 0; t < 15; ++t) {
      ScaledRationalMatrix z = unscaled(random_det_one(rng, static_cast<std::size_t>(n)), 11);
      FrickeCertificate cert = fricke_reduce(ctx, z);
      ScaledRationalMatrix base = cert.applied_fricke ? fricke_involute(ctx, z) : z;
      EXPECT_TRUE(is_gamma0(cert.gamma, 11));
      EXPECT_EQ(base.left(cert.gamma), cert.w);
      EXPECT_TRUE(cert.certified) << (cert.failures.empty() ? "" : cert.failures.front());
    }
  }
}

TEST(Fricke, TableRowsRandom) {
  std::mt19937_64 rng(27);
  for (long n = 2; n <= 3; ++n) {
    LevelContext ctx(n, 5);
    for (int t = 0; t < 5; ++t) {
      ScaledRationalMatrix z = unscaled(random_det_one(rng, static_cast<std::size_t>(n)), 5);
      for (TableRow row : {TableRow::Lz, TableRow::LzDual, TableRow::Lzp, TableRow::LzpDual}) {
        TableRowCheck c = table_row_check(ctx, z, row, ScaledLength(Rational(10)));
        EXPECT_TRUE(c.equal) << table_row_name(row);
        EXPECT_GT(c.direct.total(), 0u);
      }
    }
  }
}

TEST(Fricke, HermitePowers) {
  EXPECT_EQ(hermite_power(2), Rational(4, 3));
  EXPECT_EQ(hermite_power(8), 256);
  EXPECT_THROW(hermite_power(9), std::invalid_argument);
}

}  // namespace
}  // namespace latfricke
