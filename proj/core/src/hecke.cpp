#include "latfricke/hecke.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "latfricke/normal_form.hpp"

namespace latfricke {

namespace {

std::vector<std::vector<Integer>> ordered_factorizations(const Integer& d, std::size_t parts) {
  if (parts == 1) return {{d}};
  std::vector<std::vector<Integer>> out;
  for (Integer a = 1; a <= d; ++a) {
    if (d % a != 0) continue;
    for (auto& rest : ordered_factorizations(d / a, parts - 1)) {
      rest.insert(rest.begin(), a);
      out.push_back(std::move(rest));
    }
  }
  return out;
}

// Upper triangular, positive diagonal, 0 <= H(i,j) < H(j,j) for i < j.
void for_each_row_hnf(std::size_t n, const Integer& d, const std::function<void(const IntMatrix&)>& f) {
  for (const auto& diag : ordered_factorizations(d, n)) {
    IntMatrix h(n, n);
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i) {
      h(i, i) = diag[i];
      for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    }
    while (true) {
      f(h);
      std::size_t s = 0;
      while (s < slots.size()) {
        auto [i, j] = slots[s];
        if (h(i, j) + 1 < h(j, j)) {
          ++h(i, j);
          break;
        }
        h(i, j) = 0;
        ++s;
      }
      if (s == slots.size()) break;
    }
  }
}

bool in_gamma0_rational(const RationalMatrix& m, long N) {
  return is_integral(m) && is_gamma0(to_integer(m), N);
}

bool same_coset(const IntMatrix& a, const IntMatrix& b, long N) {
  return in_gamma0_rational(to_rational(a) * inverse(to_rational(b)), N);
}

}  // namespace

long find_coset(const HeckeReps& h, const LevelContext& ctx, const IntMatrix& m) {
  IntMatrix c = hnf_row_upper(m);
  for (std::size_t i = 0; i < h.reps.size(); ++i)
    if (h.reps[i] == c) return same_coset(m, c, ctx.N()) ? static_cast<long>(i) : -1;
  return -1;
}

HeckeReps hecke_reps_for_diagonal(const LevelContext& ctx, const IntVec& diagonal) {
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  if (diagonal.size() != n) throw std::invalid_argument("dimension mismatch");
  Integer d(1);
  for (const auto& e : diagonal) {
    if (e <= 0) throw std::invalid_argument("diagonal entries must be positive");
    d *= e;
  }
  if (gcd(d, Integer(ctx.N())) != 1) throw std::invalid_argument("determinant must be coprime to N");
  IntMatrix dm(n, n);
  for (std::size_t i = 0; i < n; ++i) dm(i, i) = diagonal[i];
  const IntVec target = smith_invariants(dm);

  HeckeReps h;
  h.diagonal = diagonal;
  for_each_row_hnf(n, d, [&](const IntMatrix& m) {
    if (smith_invariants(m) == target) h.reps.push_back(m);
  });

  h.pairwise_inequivalent = true;
  for (std::size_t i = 0; i < h.reps.size() && h.pairwise_inequivalent; ++i)
    for (std::size_t j = 0; j < h.reps.size(); ++j)
      if (i != j && same_coset(h.reps[i], h.reps[j], ctx.N())) {
        h.pairwise_inequivalent = false;
        break;
      }

  const std::vector<IntMatrix> tests = gamma0_test_set(ctx.n(), ctx.N(), 16, 0x4ecce);
  h.closed = true;
  for (const auto& a : h.reps) {
    for (const auto& g : tests)
      if (find_coset(h, ctx, a * g) < 0) {
        h.closed = false;
        break;
      }
    if (!h.closed) break;
  }

  const std::vector<IntMatrix> gens = gamma0_generators(ctx.n(), ctx.N());
  long start = find_coset(h, ctx, dm);
  if (start >= 0) {
    std::vector<bool> seen(h.reps.size(), false);
    std::deque<std::size_t> queue{static_cast<std::size_t>(start)};
    seen[static_cast<std::size_t>(start)] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      std::size_t i = queue.front();
      queue.pop_front();
      for (const auto& g : gens) {
        long j = find_coset(h, ctx, h.reps[i] * g);
        if (j >= 0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = true;
          ++reached;
          queue.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    h.transitive = reached == h.reps.size();
  }
  return h;
}

HeckeReps hecke_coset_reps(const LevelContext& ctx, const std::vector<long>& exponents, long p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (ctx.N() % p == 0) throw std::invalid_argument("p must not divide N");
  if (static_cast<long>(exponents.size()) != ctx.n()) throw std::invalid_argument("dimension mismatch");
  IntVec diag;
  for (long a : exponents) {
    if (a < 0) throw std::invalid_argument("negative exponent");
    diag.push_back(ipow(Integer(p), static_cast<unsigned long>(a)));
  }
  return hecke_reps_for_diagonal(ctx, diag);
}

HeckeProduct hecke_product_check(const LevelContext& ctx, long p, long q) {
  if (p == q) throw std::invalid_argument("p and q must be distinct");
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  HeckeProduct r;
  r.p = p;
  r.q = q;
  std::vector<long> ep(n, 0), eq(n, 1);
  ep[0] = 1;
  eq[n - 1] = 0;
  HeckeReps left = hecke_coset_reps(ctx, ep, p);
  HeckeReps right = hecke_coset_reps(ctx, eq, q);
  IntVec target_diag(n, Integer(q));
  target_diag[0] = Integer(p * q);
  target_diag[n - 1] = 1;
  HeckeReps target = hecke_reps_for_diagonal(ctx, target_diag);
  r.left_count = left.reps.size();
  r.right_count = right.reps.size();
  r.target_count = target.reps.size();
  const Integer want = Integer(p) * ipow(Integer(q), n - 1);
  r.determinants_ok = true;
  std::vector<int> hits(target.reps.size(), 0);
  bool missing = false;
  for (const auto& a : left.reps)
    for (const auto& b : right.reps) {
      IntMatrix m = a * b;
      ++r.product_count;
      if (det(m) != want) r.determinants_ok = false;
      long j = find_coset(target, ctx, m);
      if (j < 0) missing = true;
      else ++hits[static_cast<std::size_t>(j)];
    }
  r.equal = !missing && r.product_count == r.target_count &&
            std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  return r;
}

}  // namespace latfricke
