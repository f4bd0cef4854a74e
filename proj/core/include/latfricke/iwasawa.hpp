#pragma once

#include <vector>

#include "latfricke/scaled.hpp"

namespace latfricke {

// z = n(x) a(y) k with n(x) unipotent upper triangular and a = diag(d_1..d_n).
// Everything is kept squared: Gram(z) = n diag(d_i^2) n^T.
struct IwasawaCoords {
  RationalMatrix x;                 // unit upper triangular n(x); x(i,j) for i < j
  std::vector<ScaledLength> d_sq;   // d_1^2 .. d_n^2
  std::vector<Rational> d_sq_mantissa;
  Rational gram_exponent{0};        // d_i^2 = d_sq_mantissa[i] * N^gram_exponent
  long level = 1;
  std::vector<Rational> y_sq;       // y_i^2 = d_{n-i}^2 / d_{n-i+1}^2, i = 1..n-1

  std::size_t dim() const { return d_sq.size(); }
  // n(x) diag(d^2) n(x)^T as a mantissa; equals the Gram mantissa of z.
  RationalMatrix reconstructed_gram() const;
};

// Bottom-up Gram-Schmidt from a Gram mantissa.
IwasawaCoords iwasawa_from_gram(const RationalMatrix& g, const Rational& gram_exponent = 0, long level = 1);
IwasawaCoords iwasawa_decompose(const ScaledRationalMatrix& z);

// |x_ij| <= 1/2 and y_i^2 >= eta_sq.
bool in_siegel(const IwasawaCoords& c, const Rational& eta_sq = Rational(3, 4));

struct SiegelWitness {
  IntMatrix gamma;
  IwasawaCoords coords;  // of gamma z
  Rational eta_sq;
};

// Unimodular S (unit upper triangular) size-reducing the basis with Gram g.
IntMatrix size_reduction(const RationalMatrix& g);

// gamma in SL_n(Z) with gamma g gamma^T in the Siegel set (eta^2 = 3/4) and
// last row of gamma a shortest vector (lexicographically smallest tie).
IntMatrix reduce_gram(const RationalMatrix& g);

// eta_sq must not exceed 3/4, the value the construction guarantees.
SiegelWitness siegel_reduce(const ScaledRationalMatrix& z, const Rational& eta_sq = Rational(3, 4));

struct BlockReduction {
  IntMatrix gamma;  // diag(h, 1), h in SL_{n-1}(Z)
  IwasawaCoords coords;
};

// Reduces the projection of rows 1..n-1 orthogonal to the last row.
BlockReduction block_reduce_upper(const ScaledRationalMatrix& z);

// Gram of the rows 0..n-2 projected orthogonally to row n-1.
RationalMatrix projected_upper_gram(const RationalMatrix& g);

}  // namespace latfricke
