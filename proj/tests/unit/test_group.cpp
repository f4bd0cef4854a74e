#include <gtest/gtest.h>

#include <set>

#include "latfricke/hecke.hpp"
#include "latfricke/normal_form.hpp"
#include "latfricke/search.hpp"

namespace latfricke {
namespace {

TEST(Group, GeneratorsInGamma0) {
  for (long n = 2; n <= 4; ++n)
    for (long N : {2, 5, 7})
      for (const auto& g : gamma0_generators(n, N)) EXPECT_TRUE(is_gamma0(g, N));
}

TEST(Group, ConjugationSweep) {
  LevelContext ctx(3, 7);
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) EXPECT_TRUE(conjugation_check(ctx, random_gamma0(rng, 3, 7, 8)));
}

TEST(Group, MatrixCompleteExamples) {
  LevelContext ctx2(2, 5);
  EXPECT_EQ(matrix_complete(ctx2, {1, 0}), IntMatrix::identity(2));
  EXPECT_EQ(matrix_complete(ctx2, {2, 5}), (IntMatrix{{2, 1}, {5, 3}}));
  EXPECT_THROW(matrix_complete(ctx2, {2, 4}), std::invalid_argument);
  EXPECT_THROW(matrix_complete(ctx2, {5, 10}), std::invalid_argument);
  LevelContext ctx3(3, 7);
  EXPECT_EQ(matrix_complete(ctx3, {1, 0, 0}), IntMatrix::identity(3));
}

TEST(Group, MatrixCompleteRandom) {
  LevelContext ctx(3, 7);
  Rng rng(32);
  int done = 0;
  while (done < 1000) {
    IntVec v{Integer(rng.uniform(-30, 30)), Integer(rng.uniform(-30, 30)), Integer(7 * rng.uniform(-5, 5))};
    if (!is_primitive(v)) continue;
    IntMatrix g = matrix_complete(ctx, v);
    EXPECT_TRUE(is_gamma0(g, 7));
    EXPECT_EQ(g.col(0), v);
    ++done;
  }
}

TEST(Cusps, Examples) {
  LevelContext ctx(3, 5);
  CuspDecomposition id = cusp_decompose(ctx, IntMatrix::identity(3));
  EXPECT_EQ(id.k, 3);
  EXPECT_EQ(id.gamma, IntMatrix::identity(3));
  EXPECT_EQ(id.u, IntMatrix::identity(3));
  IntMatrix weyl = cusp_representative(3, 1);
  EXPECT_EQ(det(weyl), 1);
  CuspDecomposition w = cusp_decompose(ctx, weyl);
  EXPECT_EQ(w.k, 1);
  EXPECT_EQ(w.gamma, IntMatrix::identity(3));
  IntMatrix w2 = cusp_representative(3, 2);
  EXPECT_EQ(w2.row(0), (IntVec{1, 0, 0}));
  EXPECT_EQ(w2.row(2), (IntVec{0, 1, 0}));
  EXPECT_EQ(det(w2), 1);
}

TEST(Cusps, CountAndRoundtrip) {
  for (long n = 2; n <= 5; ++n)
    for (long N : {2, 3, 5, 7}) EXPECT_EQ(cusp_count_check(LevelContext(n, N)), n);
  LevelContext ctx(3, 5);
  Rng rng(33);
  std::set<long> seen;
  for (int t = 0; t < 300; ++t) {
    IntMatrix xi = random_sl(rng, 3, 20);
    CuspDecomposition d = cusp_decompose(ctx, xi);
    EXPECT_EQ(d.gamma * cusp_representative(3, d.k) * d.u, xi);
    EXPECT_TRUE(is_gamma0(d.gamma, 5));
    seen.insert(d.k);
    // Double-coset move.
    IntMatrix u = IntMatrix::identity(3);
    u(0, 1) = rng.uniform(-4, 4);
    u(0, 2) = rng.uniform(-4, 4);
    u(1, 2) = rng.uniform(-4, 4);
    EXPECT_EQ(cusp_decompose(ctx, random_gamma0(rng, 3, 5, 6) * xi * u).k, d.k);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Cosets, Gamma0Index) {
  LevelContext ctx(3, 3);
  auto reps = gamma0_coset_reps(ctx);
  EXPECT_EQ(reps.size(), 13u);
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) {
      IntMatrix q = reps[i] * inverse_unimodular(reps[j]);
      EXPECT_EQ(is_gamma0(q, 3), i == j);
    }
}

TEST(Hecke, CosetCounts) {
  LevelContext ctx2(2, 5);
  HeckeReps t2 = hecke_coset_reps(ctx2, {1, 0}, 2);
  EXPECT_EQ(t2.reps.size(), 3u);
  EXPECT_TRUE(t2.pairwise_inequivalent);
  EXPECT_TRUE(t2.closed);
  EXPECT_TRUE(t2.transitive);
  LevelContext ctx3(3, 5);
  HeckeReps t3 = hecke_coset_reps(ctx3, {1, 0, 0}, 2);
  EXPECT_EQ(t3.reps.size(), 7u);
  EXPECT_TRUE(t3.closed && t3.transitive && t3.pairwise_inequivalent);
  EXPECT_EQ(hecke_coset_reps(ctx3, {0, 0, 0}, 2).reps.size(), 1u);
  EXPECT_THROW(hecke_coset_reps(ctx2, {1, 0}, 5), std::invalid_argument);
}

TEST(Hecke, ProductIdentity) {
  HeckeProduct a = hecke_product_check(LevelContext(2, 5), 2, 3);
  EXPECT_TRUE(a.equal);
  EXPECT_TRUE(a.determinants_ok);
  HeckeProduct b = hecke_product_check(LevelContext(3, 7), 2, 3);
  EXPECT_TRUE(b.equal);
  EXPECT_EQ(b.product_count, 7u * 13u);
}

TEST(Search, FixedLattices) {
  for (long N : {2, 3}) {
    SearchReport r = fixed_lattice_search(LevelContext(3, N), N == 2 ? 8 : 9);
    EXPECT_EQ(r.hits.size(), 2u);
    EXPECT_EQ(r.count(SolutionClass::LatticeOne), 1u);
    EXPECT_EQ(r.count(SolutionClass::LatticeN), 1u);
    EXPECT_TRUE(r.all_verified());
  }
}

TEST(Search, NormalizerContrast) {
  SearchReport r3 = normalizer_search(LevelContext(3, 2), 8);
  EXPECT_GT(r3.hits.size(), 0u);
  EXPECT_EQ(r3.count(SolutionClass::Scalar), r3.hits.size());
  SearchReport r2 = normalizer_search(LevelContext(2, 2), 4);
  EXPECT_GT(r2.count(SolutionClass::Fricke2), 0u);
  EXPECT_EQ(r2.count(SolutionClass::Unexpected), 0u);
}

TEST(Search, AtkinLehner) {
  LevelContext ctx(3, 2);
  SearchReport r = atkin_lehner_search(ctx, 8);
  EXPECT_GT(r.hits.size(), 0u);
  EXPECT_EQ(r.count(SolutionClass::AtkinLehner), r.hits.size());
  IntMatrix gamma;
  EXPECT_TRUE(reduce_to_atkin_lehner(ctx, ctx.last_diag(), gamma));
  EXPECT_EQ(gamma, IntMatrix::identity(3));
}

}  // namespace
}  // namespace latfricke
