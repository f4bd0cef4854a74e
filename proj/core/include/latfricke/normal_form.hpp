#pragma once

#include "latfricke/matrix.hpp"

namespace latfricke {

struct HnfResult {
  IntMatrix H;
  IntMatrix U;
};

// Column-style Hermite normal form: H = A U with U unimodular, H lower
// triangular with positive diagonal and 0 <= H(i,j) < H(i,i) for j < i.
HnfResult hnf(const IntMatrix& a);
HnfResult hnf(const RationalMatrix& a);  // a must be integral

// Row-style form H = U A: upper triangular, positive diagonal,
// 0 <= H(i,j) < H(j,j) for i < j.  Canonical for the left coset SL_n(Z) A.
IntMatrix hnf_row_upper(const IntMatrix& a);

// Invariant factors s_1 | s_2 | ... (zeros after the rank).
IntVec smith_invariants(const IntMatrix& a);
// Delta_j = s_1 ... s_j = gcd of j x j minors.  Throws on the zero matrix.
IntVec determinantal_divisors(const IntMatrix& a);

// Coefficients c_0..c_n of det(X I - A); c_n = 1.
RatVec char_poly(const RationalMatrix& a);
IntVec char_poly(const IntMatrix& a);

// det = 1 and N | A(n,j) for j < n.
bool is_gamma0(const IntMatrix& a, long N);
// Transpose group: det = 1 and N | A(i,n) for i < n.
bool is_gamma0_transpose(const IntMatrix& a, long N);
// Integral with last row = (0,...,0,*) mod N (no determinant condition).
bool has_level_last_row(const IntMatrix& a, long N);

// Matrix in SL_n(Z) with column pos equal to the primitive vector v.
// Returns the identity when v = e_pos.
IntMatrix unimodular_with_column(const IntVec& v, std::size_t pos);
// Matrix in SL_n(Z) with row pos equal to v.
IntMatrix unimodular_with_row(const IntVec& v, std::size_t pos);
// Matrix in SL_n(Z) whose last row is v.
IntMatrix complete_with_last_row(const IntVec& v);

// Extended gcd: g = a x + b y, g >= 0.
Integer xgcd(const Integer& a, const Integer& b, Integer& x, Integer& y);
// Inverse of a modulo m (m > 1), in [0, m).
Integer inverse_mod(const Integer& a, const Integer& m);
Integer mod(const Integer& a, const Integer& m);

}  // namespace latfricke
