#include <gtest/gtest.h>

#include <cmath>

#include "latfricke/matrix_io.hpp"
#include "latfricke/normal_form.hpp"
#include "latfricke/scaled.hpp"
#include "test_support.hpp"

namespace latfricke {
namespace {

using testing::laplace_det;
using testing::random_int_matrix;
using testing::random_unimodular;
using testing::uniform;

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(to_string(make_rational(-3, 6)), "-1/2");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
}

TEST(Rational, Rounding) {
  EXPECT_EQ(floor(Rational(-1, 2)), -1);
  EXPECT_EQ(ceil(Rational(-1, 2)), 0);
  EXPECT_EQ(round_half_up(Rational(1, 2)), 1);
  EXPECT_EQ(round_half_up(Rational(-1, 2)), 0);
  EXPECT_EQ(round_half_up(Rational(-7, 3)), -2);
}

TEST(Determinant, MatchesLaplace) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 5));
    IntMatrix a = random_int_matrix(rng, n, 6);
    EXPECT_EQ(det(a), laplace_det(a));
    EXPECT_EQ(det(to_rational(a)), Rational(laplace_det(a)));
  }
}

TEST(Inverse, ProductIsIdentity) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    RationalMatrix a = testing::random_rational_matrix(rng, 4, 5, 4);
    EXPECT_EQ(a * inverse(a), RationalMatrix::identity(4));
  }
  EXPECT_THROW(inverse(RationalMatrix(2, 2)), SingularMatrix);
}

void check_hnf(const IntMatrix& a) {
  HnfResult r = hnf(a);
  const std::size_t n = a.rows();
  EXPECT_EQ(a * r.U, r.H);
  Integer du = det(r.U);
  EXPECT_TRUE(du == 1 || du == -1);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_GT(r.H(i, i), 0);
    for (std::size_t j = i + 1; j < n; ++j) EXPECT_EQ(r.H(i, j), 0);
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_GE(r.H(i, j), 0);
      EXPECT_LT(r.H(i, j), r.H(i, i));
    }
  }
}

TEST(Hnf, Examples) {
  HnfResult r = hnf(IntMatrix{{0, 1}, {-1, 0}});
  EXPECT_EQ(r.H, IntMatrix::identity(2));
  HnfResult d = hnf(IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(d.H, (IntMatrix{{2, 0}, {0, 3}}));
  EXPECT_EQ(d.U, IntMatrix::identity(2));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(hnf(random_unimodular(rng, 4, 12)).H, IntMatrix::identity(4));
  EXPECT_THROW(hnf(IntMatrix{{1, 2}, {2, 4}}), SingularMatrix);
}

TEST(Hnf, RandomRoundtrip) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 5));
    IntMatrix a = random_int_matrix(rng, n, 9);
    if (det(a) == 0) continue;
    check_hnf(a);
  }
}

TEST(Hnf, ColumnReductionOracle) {
  // Column operations by hand on [[0,1],[-1,0]]: swap columns, negate the new first.
  IntMatrix a{{0, 1}, {-1, 0}};
  IntMatrix u{{0, -1}, {1, 0}};
  EXPECT_EQ(a * u, IntMatrix::identity(2));
  EXPECT_EQ(hnf(a).U, u);
}

TEST(Hnf, RowUpperIsCanonicalOnLeftCosets) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    IntMatrix a = random_int_matrix(rng, 3, 5);
    if (det(a) == 0) continue;
    IntMatrix h = hnf_row_upper(a);
    EXPECT_EQ(hnf_row_upper(random_unimodular(rng, 3) * a), h);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(h(i, j), 0);
  }
}

IntVec minors_gcd(const IntMatrix& a) {
  IntVec out;
  for (std::size_t j = 1; j <= a.rows(); ++j) {
    Integer g(0);
    for (const auto& r : subsets(a.rows(), j))
      for (const auto& c : subsets(a.cols(), j)) g = gcd(g, laplace_det(submatrix(a, r, c)));
    out.push_back(g);
  }
  return out;
}

TEST(DeterminantalDivisors, Examples) {
  IntMatrix m = Integer(3) * IntMatrix::identity(3);
  EXPECT_EQ(determinantal_divisors(m), (IntVec{3, 9, 27}));
  EXPECT_EQ(determinantal_divisors(IntMatrix::diagonal({1, 2, 4})), (IntVec{1, 2, 8}));
  EXPECT_THROW(determinantal_divisors(IntMatrix(2, 2)), MathError);
}

TEST(DeterminantalDivisors, MatchBruteForceMinors) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 150; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 4));
    IntMatrix a = random_int_matrix(rng, n, 6);
    bool zero = true;
    for (const auto& x : a.data())
      if (x != 0) zero = false;
    if (zero) continue;
    EXPECT_EQ(determinantal_divisors(a), minors_gcd(a)) << to_string(a);
  }
}

TEST(DeterminantalDivisors, UnimodularInvariance) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    IntMatrix a = random_int_matrix(rng, 4, 6);
    if (det(a) == 0) continue;
    IntVec d = determinantal_divisors(a);
    IntMatrix b = random_unimodular(rng, 4) * a * random_unimodular(rng, 4);
    EXPECT_EQ(determinantal_divisors(b), d);
    for (std::size_t j = 0; j + 1 < d.size(); ++j) EXPECT_EQ(d[j + 1] % d[j], 0);
  }
}

TEST(CharPoly, Examples) {
  EXPECT_EQ(char_poly(IntMatrix::identity(3)), (IntVec{-1, 3, -3, 1}));
  EXPECT_EQ(char_poly(Integer(2) * IntMatrix::identity(2)), (IntVec{4, -4, 1}));
  EXPECT_EQ(char_poly(IntMatrix{{0, 5}, {1, 0}}), (IntVec{-5, 0, 1}));
}

TEST(CharPoly, MatchesDeterminantAtPoints) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 5));
    IntMatrix a = random_int_matrix(rng, n, 5);
    IntVec c = char_poly(a);
    for (long x = -3; x <= static_cast<long>(n); ++x) {
      IntMatrix m = Integer(x) * IntMatrix::identity(n) - a;
      Integer v(0);
      for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
      EXPECT_EQ(v, laplace_det(m));
    }
    IntMatrix h = random_unimodular(rng, n);
    EXPECT_EQ(char_poly(h * a * inverse_unimodular(h)), c);
  }
}

TEST(Gamma0, Predicate) {
  EXPECT_TRUE(is_gamma0(IntMatrix::identity(3), 7));
  EXPECT_FALSE(is_gamma0(IntMatrix{{1, 0}, {1, 1}}, 5));
  EXPECT_TRUE(is_gamma0(IntMatrix{{2, 1}, {5, 3}}, 5));
  EXPECT_FALSE(is_gamma0(IntMatrix{{0, 1}, {1, 0}}, 5));
}

TEST(Completion, LastRowAndColumn) {
  EXPECT_EQ(complete_with_last_row({0, 0, 1}), IntMatrix::identity(3));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 2, 5));
    IntVec v(n);
    for (auto& x : v) x = uniform(rng, -30, 30);
    if (!is_primitive(v)) continue;
    IntMatrix u = complete_with_last_row(v);
    EXPECT_EQ(det(u), 1);
    EXPECT_EQ(u.row(n - 1), v);
    std::size_t pos = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    IntMatrix c = unimodular_with_column(v, pos);
    EXPECT_EQ(det(c), 1);
    EXPECT_EQ(c.col(pos), v);
  }
  EXPECT_THROW(complete_with_last_row({2, 4}), MathError);
}

TEST(ScaledMatrix, InvTranspose) {
  ScaledRationalMatrix id(RationalMatrix::identity(2), 0, 5);
  EXPECT_EQ(id.inv_transpose(), id);
  ScaledRationalMatrix a(RationalMatrix::diagonal({1, 5}), -1, 5);
  ScaledRationalMatrix ai = a.inv_transpose();
  EXPECT_EQ(ai.mantissa(), RationalMatrix::diagonal({1, Rational(1, 5)}));
  EXPECT_EQ(ai.k(), 1);
  EXPECT_EQ(ai.inv_transpose().mantissa(), a.mantissa());
  EXPECT_EQ(ai.inv_transpose().k(), a.k());
  EXPECT_THROW(ScaledRationalMatrix(RationalMatrix(2, 2), 0, 5).inv_transpose(), SingularMatrix);
}

TEST(ScaledMatrix, CanonicalEquality) {
  ScaledRationalMatrix a(RationalMatrix::identity(2), 2, 3);
  ScaledRationalMatrix b(Rational(3) * RationalMatrix::identity(2), 0, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.canonical().k(), 0);
  ScaledRationalMatrix c(RationalMatrix::identity(2), 1, 3);
  EXPECT_NE(a, c);
  EXPECT_EQ(ScaledRationalMatrix(RationalMatrix::identity(3), -1, 7).canonical().k(), 2);
}

TEST(ScaledLength, OrderMatchesFloatingPoint) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 2000; ++t) {
    long n = uniform(rng, 2, 5);
    long N = std::vector<long>{2, 3, 5, 7, 11}[static_cast<std::size_t>(uniform(rng, 0, 4))];
    ScaledLength a = ScaledLength::level(make_rational(uniform(rng, 1, 200), uniform(rng, 1, 50)), uniform(rng, -4, 4), n, N);
    ScaledLength b = ScaledLength::level(make_rational(uniform(rng, 1, 200), uniform(rng, 1, 50)), uniform(rng, -4, 4), n, N);
    double da = a.to_double(), db = b.to_double();
    if (std::fabs(da - db) <= 1e-9 * std::max(da, db)) continue;
    EXPECT_EQ(a < b, da < db);
    EXPECT_EQ(compare(a, b), -compare(b, a));
  }
  EXPECT_EQ(ScaledLength::level(Rational(1), 1, 2, 5), ScaledLength(Rational(5)));
  EXPECT_EQ(ScaledLength::level(Rational(1), 2, 4, 3), ScaledLength(Rational(3)));
  EXPECT_LT(ScaledLength::level(Rational(1), 1, 3, 2), ScaledLength(Rational(2)));
}

TEST(Threshold, ExactBoundary) {
  // 2^(2/3) compared against rationals near it.
  Threshold t(ScaledLength(Rational(1), Rational(2, 3), Integer(2)));
  EXPECT_TRUE(t.admits(Rational(158740, 100000)));
  EXPECT_FALSE(t.admits(Rational(158741, 100000)));
  Threshold e = Threshold::rational(Rational(4)).shifted(Rational(1));
  EXPECT_TRUE(e.admits(Rational(3)));
  EXPECT_FALSE(e.admits(Rational(31, 10)));
}

TEST(MatrixIo, Roundtrip) {
  MatrixFile f = parse_matrix_string("2 5\n1 1/2\n0 1  # comment\nscale -1\n");
  EXPECT_EQ(f.n, 2);
  EXPECT_EQ(f.N, 5);
  EXPECT_EQ(f.z.k(), -1);
  EXPECT_EQ(f.z.mantissa()(0, 1), Rational(1, 2));
  MatrixFile g = parse_matrix_string(format_matrix(f.z));
  EXPECT_EQ(g.z, f.z);
  EXPECT_THROW(parse_matrix_string("2 5\n1 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_matrix_string("2 5\n1 0\n0 1\nscal 1\n"), std::invalid_argument);
}

}  // namespace
}  // namespace latfricke
