#include <gtest/gtest.h>

#include <random>
#include <set>

#include "latfricke/counting.hpp"
#include "latfricke/group.hpp"
#include "latfricke/normal_form.hpp"
#include "test_support.hpp"

namespace latfricke {
namespace {

using testing::random_rational_matrix;
using testing::random_unimodular;

HQuery exact_query(long n, long N, const RationalMatrix& z, long m, const Rational& c2) {
  HQuery q(LevelContext(n, N), ScaledRationalMatrix::unscaled(z, N), DeterminantSpec::exact(Integer(m)));
  q.c2 = c2;
  return q;
}

TEST(Counting, SmallestExample) {
  CountResult r = enumerate_H(exact_query(2, 5, RationalMatrix::identity(2), 1, 2));
  ASSERT_EQ(r.count, 2u);
  EXPECT_EQ(r.matrices[0], (IntMatrix{{-1, 0}, {0, -1}}));
  EXPECT_EQ(r.matrices[1], IntMatrix::identity(2));
  EXPECT_EQ(r.tags[DegeneracyTag::Parabolic], 2u);
}

TEST(Counting, LargerConstantContainsUnipotents) {
  HQuery q = exact_query(2, 5, RationalMatrix::identity(2), 1, 9);
  CountResult r = enumerate_H(q);
  std::set<std::vector<Integer>> got;
  for (const auto& m : r.matrices) got.insert(m.data());
  for (const IntMatrix& m : {IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{1, -1}, {0, 1}}, IntMatrix{{-1, 1}, {0, -1}},
                             IntMatrix{{1, 0}, {0, 1}}})
    EXPECT_TRUE(got.count(m.data())) << to_string(m);
  // 5 | lower-left keeps [[1,0],[5,1]] out at Frobenius^2 = 27 > 9.
  EXPECT_FALSE(got.count(IntMatrix{{1, 0}, {5, 1}}.data()));
  CountResult o = naive_oracle(q);
  EXPECT_EQ(r.matrices, o.matrices);
}

TEST(Counting, RejectsDeterminantSharingLevel) {
  EXPECT_THROW(enumerate_H(exact_query(2, 5, RationalMatrix::identity(2), 10, 2)), std::invalid_argument);
  EXPECT_THROW(naive_oracle(exact_query(2, 5, RationalMatrix::identity(2), 5, 2)), std::invalid_argument);
  HQuery q = exact_query(2, 5, RationalMatrix::identity(2), 1, 2);
  q.c2 = 0;
  EXPECT_THROW(enumerate_H(q), std::invalid_argument);
}

TEST(Counting, BelowMinimalNormIsEmpty) {
  // ||gamma||_F^2 >= n det^(2/n) for any gamma; C^2 < n leaves nothing at z = Id.
  for (long m : {1, 2, 3}) {
    CountResult r = enumerate_H(exact_query(2, 7, RationalMatrix::identity(2), m, Rational(19, 10)));
    EXPECT_EQ(r.count, 0u);
  }
}

TEST(Counting, OracleAgreementDimensionTwo) {
  std::mt19937_64 rng(61);
  for (long N : {5, 7}) {
    std::vector<RationalMatrix> zs{RationalMatrix::identity(2)};
    for (int s = 0; s < 3; ++s) zs.push_back(random_rational_matrix(rng, 2, 4, 3));
    for (const auto& z : zs)
      for (long m = 1; m <= 6; ++m) {
        if (m % N == 0) continue;
        for (long c2 : {1, 2, 4}) {
          HQuery q = exact_query(2, N, z, m, c2);
          CountResult a = enumerate_H(q);
          CountResult b = naive_oracle(q);
          EXPECT_EQ(a.matrices, b.matrices) << "N=" << N << " m=" << m << " C2=" << c2 << " z=" << to_string(z);
          for (const auto& g : a.matrices) {
            EXPECT_TRUE(has_level_last_row(g, N));
            EXPECT_EQ(det(g), Integer(m));
          }
        }
      }
  }
}

TEST(Counting, OracleAgreementDimensionThree) {
  EXPECT_EQ(enumerate_H(exact_query(3, 7, RationalMatrix::identity(3), 1, 3)).matrices,
            naive_oracle(exact_query(3, 7, RationalMatrix::identity(3), 1, 3)).matrices);
  const std::vector<RationalMatrix> zs{
      RationalMatrix{{1, make_rational(1, 2), make_rational(-1, 3)}, {0, 1, make_rational(1, 4)}, {0, 0, 1}},
      RationalMatrix{{make_rational(3, 2), 0, 0}, {make_rational(1, 3), 1, 0}, {0, make_rational(1, 2), make_rational(2, 3)}},
  };
  for (const auto& z : zs)
    for (long m : {1, 2}) {
      HQuery q = exact_query(3, 7, z, m, 3);
      EXPECT_EQ(enumerate_H(q).matrices, naive_oracle(q).matrices) << to_string(z);
    }
}

TEST(Counting, RangeIsUnionOfExact) {
  RationalMatrix z{{1, make_rational(1, 3)}, {0, 2}};
  HQuery range(LevelContext(2, 5), ScaledRationalMatrix::unscaled(z, 5), DeterminantSpec::up_to(Integer(7)));
  range.c2 = 4;
  CountResult all = enumerate_H(range);
  EXPECT_EQ(all.matrices, naive_oracle(range).matrices);
  EXPECT_EQ(all.by_det.count(Integer(5)), 0u);
  // The norm bound uses M^(2/n), so compare against exact queries at C^2 M^(2/2) / m^(2/2).
  for (const auto& [d, k] : all.by_det) {
    HQuery ex = exact_query(2, 5, z, to_long(d), Rational(4) * Rational(7) / Rational(d));
    EXPECT_EQ(enumerate_H(ex).count, k) << to_string(d);
  }
}

TEST(Counting, ConjugationCovariance) {
  LevelContext ctx(2, 7);
  std::mt19937_64 rng(63);
  RationalMatrix z{{make_rational(2, 3), make_rational(1, 5)}, {0, make_rational(3, 2)}};
  for (int t = 0; t < 5; ++t) {
    IntMatrix g0 = IntMatrix{{1, Integer(testing::uniform(rng, -1, 1))}, {0, 1}} *
                   IntMatrix{{1, 0}, {Integer(7 * testing::uniform(rng, -1, 1)), 1}} *
                   IntMatrix{{1, Integer(testing::uniform(rng, -1, 1))}, {0, 1}};
    HQuery a(ctx, ScaledRationalMatrix::unscaled(z, 7), DeterminantSpec::exact(Integer(3)));
    HQuery b(ctx, ScaledRationalMatrix::unscaled(to_rational(g0) * z, 7), DeterminantSpec::exact(Integer(3)));
    a.c2 = b.c2 = 5;
    CountResult ra = enumerate_H(a);
    CountResult rb = enumerate_H(b);
    ASSERT_EQ(ra.count, rb.count);
    std::set<std::vector<Integer>> mapped;
    IntMatrix gi = inverse_unimodular(g0);
    for (const auto& g : ra.matrices) mapped.insert((g0 * g * gi).data());
    for (const auto& g : rb.matrices) EXPECT_TRUE(mapped.count(g.data()));
  }
}

TEST(Counting, MonotoneInConstant) {
  RationalMatrix z{{1, make_rational(1, 2)}, {0, 3}};
  std::size_t prev = 0;
  for (long c2 : {1, 2, 3, 5, 8}) {
    CountResult r = enumerate_H(exact_query(2, 5, z, 2, c2));
    EXPECT_GE(r.count, prev);
    prev = r.count;
  }
}

TEST(Counting, DegeneracyTags) {
  EXPECT_EQ(classify_degeneracy(Integer(3) * IntMatrix::identity(3), 3), DegeneracyTag::Parabolic);
  EXPECT_EQ(classify_degeneracy(IntMatrix{{1, 4, 2}, {0, 1, -1}, {0, 0, 1}}, 1), DegeneracyTag::Parabolic);
  EXPECT_EQ(classify_degeneracy(IntMatrix{{0, 1}, {1, 1}}, 1), DegeneracyTag::Nondegenerate);
  EXPECT_EQ(classify_degeneracy(IntMatrix{{2, 1}, {0, 3}}, 1), DegeneracyTag::Nondegenerate);
  // Conjugate of a Jordan block is still parabolic.
  IntMatrix g{{2, 1}, {1, 1}};
  IntMatrix j{{5, 1}, {0, 5}};
  EXPECT_EQ(classify_degeneracy(g * j * inverse_unimodular(g), 2), DegeneracyTag::Parabolic);
  IntMatrix four = IntMatrix::identity(4);
  four(0, 0) = 2;
  EXPECT_EQ(classify_degeneracy(four, 1), DegeneracyTag::Unclassified);
  EXPECT_EQ(classify_degeneracy(IntMatrix::identity(4), 1), DegeneracyTag::Parabolic);
  EXPECT_THROW(classify_degeneracy(IntMatrix::identity(3), 4), std::invalid_argument);
  EXPECT_THROW(classify_degeneracy(IntMatrix::identity(3), 0), std::invalid_argument);
}

TEST(Counting, ParabolicImpliesPowerDeterminant) {
  RationalMatrix z{{1, make_rational(1, 4)}, {0, 2}};
  HQuery q(LevelContext(2, 5), ScaledRationalMatrix::unscaled(z, 5), DeterminantSpec::up_to(Integer(9)));
  q.c2 = 6;
  CountResult r = enumerate_H(q);
  for (std::size_t i = 0; i < r.matrices.size(); ++i)
    if (r.matrix_tags[i] == DegeneracyTag::Parabolic) {
      Integer d = det(r.matrices[i]);
      Integer s = isqrt(d);
      EXPECT_EQ(s * s, d);
    }
}

TEST(Counting, DivisorFilterMatchesSmithForm) {
  // n = 2: Delta_1 = 1, so p = q removes exactly the non-primitive matrices.
  HQuery hq(LevelContext(2, 7), ScaledRationalMatrix::unscaled(RationalMatrix{{1, make_rational(1, 3)}, {0, 1}}, 7),
            DeterminantSpec::shape(3, 3, 1, 2));
  hq.c2 = 3;
  CountResult unfiltered = enumerate_H(hq);
  hq.divisors = amplifier_divisor_filter(2, 3);
  CountResult filtered = enumerate_H(hq);
  std::size_t primitive = 0;
  for (const auto& g : unfiltered.matrices) primitive += smith_invariants(g)[0] == 1;
  EXPECT_EQ(filtered.count, primitive);
  EXPECT_LT(filtered.count, unfiltered.count);
  for (const auto& g : filtered.matrices) EXPECT_EQ(smith_invariants(g), (IntVec{1, 9}));

  // n = 3: Delta_2 = q^2 forces invariants (1, q^2, det / q^2).
  DivisorFilter f = amplifier_divisor_filter(3, 2);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].second, 1);
  EXPECT_EQ(f[1].second, 4);
  EXPECT_TRUE(passes(f, IntMatrix{{1, 0, 0}, {0, 4, 0}, {0, 0, 36}}));
  EXPECT_TRUE(passes(f, IntMatrix{{1, 1, 0}, {0, 4, 0}, {0, 0, 36}}));
  EXPECT_FALSE(passes(f, IntMatrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 72}}));
  EXPECT_FALSE(passes(f, IntMatrix{{2, 0, 0}, {0, 2, 0}, {0, 0, 36}}));
  EXPECT_EQ(parabolic_divisor_filter(3, 5).front().second, 25);
}

TEST(Counting, CensusMinimalConstant) {
  HQuery q = exact_query(3, 7, RationalMatrix::identity(3), 1, 3);
  LastRowCensus c = last_row_census(q);
  for (const auto& [row, k] : c.extensions) {
    EXPECT_EQ(row[0], 0);
    EXPECT_EQ(row[1], 0);
    EXPECT_EQ(abs(row[2]), 1);
  }
  EXPECT_GE(c.max_extension, 1u);
}

TEST(Counting, RefusesLargeQuery) {
  HQuery q = exact_query(3, 5, RationalMatrix::identity(3), 2, 400);
  EXPECT_THROW(enumerate_H(q), BudgetExceeded);
  EXPECT_THROW(naive_oracle(q, 1e4), BudgetExceeded);
  q.c2 = 60;
  q.max_estimate = 1e12;
  EXPECT_THROW(enumerate_H(q, Deadline(1)), BudgetExceeded);
}

TEST(Parabolic, Triangularize) {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 50; ++t) {
    IntMatrix u{{6, Integer(testing::uniform(rng, -3, 3)), Integer(testing::uniform(rng, -3, 3))},
                {0, 6, Integer(testing::uniform(rng, -3, 3))},
                {0, 0, 6}};
    IntMatrix g = random_unimodular(rng, 3, 6);
    IntMatrix gamma = g * u * inverse_unimodular(g);
    IntMatrix h = triangularize(gamma, Integer(6));
    EXPECT_EQ(det(h), 1);
    IntMatrix c = h * gamma * inverse_unimodular(h);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(c(i, i), 6);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(c(i, j), 0);
    }
  }
}

TEST(Parabolic, ExclusionAtIdentity) {
  LevelContext ctx(3, 7);
  ParabolicReport r = parabolic_exclusion_check(ctx, ScaledRationalMatrix::unscaled(RationalMatrix::identity(3), 7), 2,
                                                3, Rational(4));
  EXPECT_EQ(r.m, 18);
  EXPECT_GT(r.candidates.size(), 1u);
  EXPECT_EQ(r.members, 0u);
  EXPECT_TRUE(r.diagnostics_consistent);
  bool saw_scalar = false;
  for (const auto& d : r.candidates) {
    if (d.gamma == Integer(18) * IntMatrix::identity(3)) saw_scalar = true;
    if (d.superdiagonal_has_zero) {
      EXPECT_TRUE(d.m_divides_delta);
    }
    EXPECT_FALSE(d.passes_filter);
  }
  EXPECT_TRUE(saw_scalar);
  EXPECT_THROW(parabolic_exclusion_check(LevelContext(2, 7),
                                         ScaledRationalMatrix::unscaled(RationalMatrix::identity(2), 7), 2, 3, 1),
               std::invalid_argument);
}

TEST(Parabolic, ZeroBudgetLeavesScalar) {
  LevelContext ctx(3, 11);
  ParabolicReport r = parabolic_exclusion_check(ctx, ScaledRationalMatrix::unscaled(RationalMatrix::identity(3), 11), 3,
                                                2, Rational(0));
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].gamma, Integer(12) * IntMatrix::identity(3));
  EXPECT_EQ(r.candidates[0].delta_eta, 144);
  EXPECT_EQ(r.members, 0u);
}

}  // namespace
}  // namespace latfricke
