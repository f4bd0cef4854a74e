#pragma once

#include <string>
#include <vector>

#include "latfricke/group.hpp"

namespace latfricke {

enum class SearchKind { Normalizer, AtkinLehner, FixedLattices };
const char* search_kind_name(SearchKind k);

enum class SolutionClass {
  Scalar,       // Q^* Gamma_0(N)
  AtkinLehner,  // Q_{>0} Gamma_0(N) diag(1,..,1,N)
  Fricke2,      // n = 2: Q^* Gamma_0(N) [[0,-1],[N,0]]
  LatticeOne,   // H Z^n = Z^n
  LatticeN,     // H Z^n = diag(1,..,1,N) Z^n
  Unexpected,
};
const char* solution_class_name(SolutionClass c);

struct SearchHit {
  IntMatrix hnf;  // lower triangular column Hermite form of g
  IntMatrix g;
  SolutionClass cls = SolutionClass::Unexpected;
  bool verified = false;  // conditions re-checked on the larger generator set
};

struct SearchReport {
  SearchKind kind = SearchKind::Normalizer;
  long n = 0, N = 0, bound = 0;
  std::size_t hnf_count = 0;        // primitive Hermite forms with det <= bound
  std::size_t candidates = 0;       // (Hermite form, coset representative) pairs tested
  std::vector<SearchHit> hits;
  std::size_t count(SolutionClass c) const;
  bool all_verified() const;
};

// g ranges over H r with H a primitive column Hermite form (det <= B) and r over
// left coset representatives of SL_n(Z) modulo Gamma_0(N) (normalizer) or its
// transpose (Atkin-Lehner).  Solutions are kept when both conjugation
// inclusions hold on the generating set.
SearchReport normalizer_search(const LevelContext& ctx, long bound);
SearchReport atkin_lehner_search(const LevelContext& ctx, long bound);
// Lattices H Z^n (column Hermite forms, primitive, det <= B) fixed by Gamma_0(N).
SearchReport fixed_lattice_search(const LevelContext& ctx, long bound);

// Classification helpers, exposed for tests.
SolutionClass classify_normalizer_solution(const LevelContext& ctx, const IntMatrix& g);
SolutionClass classify_atkin_lehner_solution(const LevelContext& ctx, const IntMatrix& g);
// Left-multiplies g by Gamma_0(N) to reach a diagonal c diag(1,..,1,N);
// returns false when g is not in that coset.
bool reduce_to_atkin_lehner(const LevelContext& ctx, const IntMatrix& g, IntMatrix& gamma);

}  // namespace latfricke
