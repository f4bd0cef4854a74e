#pragma once

#include <string>
#include <vector>

#include "latfricke/fricke.hpp"
#include "latfricke/random.hpp"

namespace latfricke {

// Finite generating set used for conjugation tests in Gamma_0(N):
//   e_ij(1) for i < n (1-based), j != i;  e_nj(N) for j < n;
//   diagonal sign changes of determinant 1;
//   for n = 2 also [[a, b], [N c, d]] for the Bezout completions with |c| <= N.
std::vector<IntMatrix> gamma0_generators(long n, long N);
// The generators together with `extra` seeded random words, for re-verification.
std::vector<IntMatrix> gamma0_test_set(long n, long N, std::size_t extra, std::uint64_t seed);
// Product of `length` random generators (or their inverses).
IntMatrix random_gamma0(Rng& rng, long n, long N, int length);
// Random element of SL_n(Z) as a word in elementary matrices.
IntMatrix random_sl(Rng& rng, long n, int length, long max_step = 2);

// gamma in Gamma_0(N) whose first column is v, where v is primitive with N | v_n.
// For n = 2 the completion is normalized to 0 <= gamma(0,1) < |v_1|.
IntMatrix matrix_complete(const LevelContext& ctx, const IntVec& v);

// Cusp representatives: w_n = Id; w_1 the long Weyl element (first row negated
// when its determinant would be -1); for 1 < k < n a permutation matrix with
// first row e_1 and last row e_k, second row negated if needed for det 1.
IntMatrix cusp_representative(long n, long k);

struct CuspDecomposition {
  IntMatrix gamma;  // in Gamma_0(N)
  long k = 0;       // 1..n
  IntMatrix u;      // unipotent upper triangular
};

// xi = gamma w_k u with xi in SL_n(Z).
CuspDecomposition cusp_decompose(const LevelContext& ctx, const IntMatrix& xi);
// Double-coset invariant: first index of the last row of xi that is nonzero mod N.
long cusp_index(const LevelContext& ctx, const IntMatrix& xi);
// Number of representatives, after checking that each one decomposes to itself
// and that their invariants are pairwise distinct.  Throws on failure.
long cusp_count_check(const LevelContext& ctx);

// Right-coset representatives of Gamma_0(N) in SL_n(Z), one per point of
// P^{n-1}(F_N): last row is the normalized projective point lifted to [0, N).
std::vector<IntMatrix> gamma0_coset_reps(const LevelContext& ctx);

}  // namespace latfricke
