#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "latfricke/scaled.hpp"

namespace latfricke {

using LVec = std::vector<long>;

IntVec to_int_vec(const LVec& v);
LVec to_long_vec(const IntVec& v);
RatVec to_rat_vec(const LVec& v);

// Exact LLL (delta = 3/4) on a positive definite Gram matrix.  Returns a
// unimodular T such that T G T^T is LLL-reduced.
IntMatrix lll_gram(const RationalMatrix& g);

// Exact Fincke-Pohst enumeration of integer vectors x with
//   (x - c) G (x - c)^T  within a Threshold.
// The Gram matrix is LLL-reduced once; every query enumerates in the reduced
// coordinates and maps back.  Centers are given in coefficient coordinates.
class BallEnumerator {
 public:
  // Receives the coefficient vector and the exact value (x - c) G (x - c)^T.
  // Returning false stops the enumeration.
  using Visitor = std::function<bool(const LVec& x, const Rational& q)>;

  explicit BallEnumerator(const RationalMatrix& gram);

  std::size_t dim() const { return n_; }
  const RationalMatrix& gram() const { return g_; }
  // Reduced basis transform and reduced Gram.
  const IntMatrix& reduction() const { return t_; }
  const RationalMatrix& reduced_gram() const { return gr_; }

  // Returns false iff stopped by the visitor.
  bool enumerate(const RatVec& center, const Threshold& bound, const Visitor& visit) const;
  bool enumerate(const Threshold& bound, const Visitor& visit) const;
  // Number of visited tree nodes in the most recent call on this thread.
  static std::uint64_t last_node_count();

 private:
  bool recurse(std::size_t level, const Rational& partial, std::vector<Rational>& w, LVec& y,
               const RatVec& c, const Threshold& bound, const Visitor& visit) const;

  std::size_t n_;
  RationalMatrix g_;
  IntMatrix t_;
  IntMatrix t_inv_;
  RationalMatrix gr_;
  RationalMatrix l_;  // unit lower triangular, gr = L D L^T
  RatVec d_;
  std::vector<double> d_dbl_;
};

}  // namespace latfricke
