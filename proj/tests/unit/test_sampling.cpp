#include <gtest/gtest.h>

#include "latfricke/iwasawa.hpp"
#include "latfricke/sampling.hpp"

namespace latfricke {
namespace {

TEST(Sampling, OmegaPointsSatisfyBounds) {
  for (long n : {2, 3, 4}) {
    Rng rng(derive_seed(17, static_cast<std::uint64_t>(n)));
    for (int t = 0; t < 30; ++t) {
      ScaledRationalMatrix w = sample_omega(rng, n, 7);
      EXPECT_EQ(det(w.mantissa()), 1);
      EXPECT_TRUE(in_omega(iwasawa_decompose(w)));
    }
  }
}

TEST(Sampling, InOmegaRejectsLargeY) {
  RationalMatrix z = RationalMatrix::diagonal({Rational(4), Rational(1, 4)});
  EXPECT_FALSE(in_omega(iwasawa_decompose(ScaledRationalMatrix::unscaled(z, 5))));
}

TEST(Sampling, TranslatesHaveDeterminantOne) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(det(sample_translate(rng, 3, 11).mantissa()), 1);
}

TEST(Sampling, BulkIsDeterministicAndCaseThree) {
  LevelContext ctx(3, 11);
  BulkSampling a = sample_bulk(ctx, 42, 12);
  BulkSampling b = sample_bulk(ctx, 42, 12);
  ASSERT_EQ(a.samples.size(), 12u);
  ASSERT_EQ(a.draws, b.draws);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].index, b.samples[i].index);
    EXPECT_EQ(a.samples[i].z().mantissa(), b.samples[i].z().mantissa());
    EXPECT_EQ(a.samples[i].cert.fcase, FrickeCase::III);
    EXPECT_TRUE(a.samples[i].cert.certified);
  }
  EXPECT_GT(a.acceptance, 0.0);
  EXPECT_LE(a.acceptance, 1.0);
  EXPECT_EQ(a.low_acceptance, a.acceptance < acceptance_floor);
}

TEST(Sampling, DrawBudgetIsEnforced) {
  LevelContext ctx(2, 5);
  EXPECT_THROW(sample_bulk(ctx, 1, 10, {}, 3), MathError);
}

}  // namespace
}  // namespace latfricke
