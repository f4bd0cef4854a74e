#pragma once

#include <vector>

#include "latfricke/group.hpp"

namespace latfricke {

// Right cosets Gamma_0(N) alpha in Gamma_0(N) diag(e_1..e_n) Gamma_0(N) for an
// integral diagonal coprime to N.  Representatives are upper triangular
// row-style Hermite forms with the Smith form of the diagonal.
struct HeckeReps {
  IntVec diagonal;
  std::vector<IntMatrix> reps;
  bool pairwise_inequivalent = false;  // alpha_i alpha_j^{-1} not in Gamma_0(N)
  bool closed = false;                 // alpha_i gamma in some Gamma_0(N) alpha_j for all test gamma
  bool transitive = false;             // every coset reached from diag by right multiplication
};

HeckeReps hecke_reps_for_diagonal(const LevelContext& ctx, const IntVec& diagonal);
// diag(p^{a_1}, ..., p^{a_n}); throws if p | N or p is not prime.
HeckeReps hecke_coset_reps(const LevelContext& ctx, const std::vector<long>& exponents, long p);

// Index of Gamma_0(N) alpha_j with alpha_j = hnf_row_upper(m), or -1.
long find_coset(const HeckeReps& h, const LevelContext& ctx, const IntMatrix& m);

struct HeckeProduct {
  long p = 0, q = 0;
  std::size_t left_count = 0, right_count = 0, product_count = 0, target_count = 0;
  bool determinants_ok = false;
  bool equal = false;  // each target coset hit exactly once
};

// T(p) = diag(p,1,..,1) times T'(q) = diag(q,..,q,1) against diag(pq,q,..,q,1).
HeckeProduct hecke_product_check(const LevelContext& ctx, long p, long q);

}  // namespace latfricke
