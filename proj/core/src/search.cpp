#include "latfricke/search.hpp"

#include <functional>
#include <stdexcept>

#include "latfricke/normal_form.hpp"

namespace latfricke {

const char* search_kind_name(SearchKind k) {
  switch (k) {
    case SearchKind::Normalizer: return "normalizer";
    case SearchKind::AtkinLehner: return "atkin-lehner";
    case SearchKind::FixedLattices: return "fixed-lattices";
  }
  return "?";
}

const char* solution_class_name(SolutionClass c) {
  switch (c) {
    case SolutionClass::Scalar: return "scalar";
    case SolutionClass::AtkinLehner: return "atkin-lehner";
    case SolutionClass::Fricke2: return "fricke";
    case SolutionClass::LatticeOne: return "L_1";
    case SolutionClass::LatticeN: return "L_N";
    case SolutionClass::Unexpected: return "unexpected";
  }
  return "?";
}

std::size_t SearchReport::count(SolutionClass c) const {
  std::size_t k = 0;
  for (const auto& h : hits) k += h.cls == c;
  return k;
}

bool SearchReport::all_verified() const {
  for (const auto& h : hits)
    if (!h.verified) return false;
  return true;
}

namespace {

// Lower triangular, 0 <= H(i,j) < H(i,i) for j < i, content 1, det <= bound.
void for_each_col_hnf(std::size_t n, long bound, const std::function<void(const IntMatrix&)>& f) {
  std::vector<long> diag(n, 1);
  std::function<void(std::size_t, long)> choose = [&](std::size_t i, long prod) {
    if (i == n) {
      IntMatrix h(n, n);
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t r = 0; r < n; ++r) {
        h(r, r) = diag[r];
        for (std::size_t c = 0; c < r; ++c) slots.emplace_back(r, c);
      }
      while (true) {
        IntVec all;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c <= r; ++c) all.push_back(h(r, c));
        if (content(all) == 1) f(h);
        std::size_t s = 0;
        while (s < slots.size()) {
          auto [r, c] = slots[s];
          if (h(r, c) + 1 < h(r, r)) {
            ++h(r, c);
            break;
          }
          h(r, c) = 0;
          ++s;
        }
        if (s == slots.size()) break;
      }
      return;
    }
    for (long d = 1; prod * d <= bound; ++d) {
      diag[i] = d;
      choose(i + 1, prod * d);
    }
  };
  choose(0, 1);
}

bool in_gamma0(const RationalMatrix& m, long N) { return is_integral(m) && is_gamma0(to_integer(m), N); }
bool in_gamma0_t(const RationalMatrix& m, long N) { return is_integral(m) && is_gamma0_transpose(to_integer(m), N); }

// Positive rational multiple of m that is integral with content 1.
IntMatrix primitive_scale(const RationalMatrix& m) {
  Integer den(1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) den = lcm(den, Integer(m(i, j).get_den()));
  IntMatrix out = to_integer(Rational(den) * m);
  IntVec all;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) all.push_back(out(i, j));
  Integer c = content(all);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) /= c;
  return out;
}

bool normalizes(const RationalMatrix& g, const RationalMatrix& gi, const std::vector<RationalMatrix>& gens, long N) {
  for (const auto& h : gens)
    if (!in_gamma0(gi * h * g, N) || !in_gamma0(g * h * gi, N)) return false;
  return true;
}

// g^{-1} Gamma g in Gamma^T and g Gamma^T g^{-1} in Gamma.
bool swaps(const RationalMatrix& g, const RationalMatrix& gi, const std::vector<RationalMatrix>& gens, long N) {
  for (const auto& h : gens)
    if (!in_gamma0_t(gi * h * g, N) || !in_gamma0(g * h.transpose() * gi, N)) return false;
  return true;
}

bool fixes(const RationalMatrix& g, const RationalMatrix& gi, const std::vector<RationalMatrix>& gens) {
  for (const auto& h : gens)
    if (!is_integral(gi * h * g)) return false;
  return true;
}

std::vector<RationalMatrix> rational_all(const std::vector<IntMatrix>& v) {
  std::vector<RationalMatrix> out;
  for (const auto& m : v) out.push_back(to_rational(m));
  return out;
}

RationalMatrix level_diag(const LevelContext& ctx) { return to_rational(ctx.last_diag()); }

SearchReport run_search(const LevelContext& ctx, long bound, SearchKind kind) {
  if (bound < 1) throw std::invalid_argument("bound must be positive");
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  const long N = ctx.N();
  SearchReport rep;
  rep.kind = kind;
  rep.n = ctx.n();
  rep.N = N;
  rep.bound = bound;
  const auto gens = rational_all(gamma0_generators(ctx.n(), N));
  const auto wide = rational_all(gamma0_test_set(ctx.n(), N, 24, 0x5ea7c4));

  std::vector<RationalMatrix> reps;
  if (kind == SearchKind::FixedLattices) {
    reps.push_back(RationalMatrix::identity(n));
  } else {
    for (const auto& r : gamma0_coset_reps(ctx))
      reps.push_back(kind == SearchKind::Normalizer ? to_rational(inverse_unimodular(r)) : to_rational(r).transpose());
  }
  auto test = [&](const RationalMatrix& g, const RationalMatrix& gi, const std::vector<RationalMatrix>& set) {
    switch (kind) {
      case SearchKind::Normalizer: return normalizes(g, gi, set, N);
      case SearchKind::AtkinLehner: return swaps(g, gi, set, N);
      case SearchKind::FixedLattices: return fixes(g, gi, set);
    }
    return false;
  };

  for_each_col_hnf(n, bound, [&](const IntMatrix& h) {
    ++rep.hnf_count;
    RationalMatrix hr = to_rational(h);
    for (const auto& r : reps) {
      ++rep.candidates;
      RationalMatrix g = hr * r;
      RationalMatrix gi = inverse(g);
      if (!test(g, gi, gens)) continue;
      SearchHit hit;
      hit.g = to_integer(g);
      hit.hnf = h;
      hit.verified = test(g, gi, wide);
      switch (kind) {
        case SearchKind::Normalizer: hit.cls = classify_normalizer_solution(ctx, hit.g); break;
        case SearchKind::AtkinLehner: hit.cls = classify_atkin_lehner_solution(ctx, hit.g); break;
        case SearchKind::FixedLattices:
          if (h == IntMatrix::identity(n)) hit.cls = SolutionClass::LatticeOne;
          else if (h == ctx.last_diag()) hit.cls = SolutionClass::LatticeN;
          else hit.cls = SolutionClass::Unexpected;
          break;
      }
      rep.hits.push_back(std::move(hit));
    }
  });
  return rep;
}

bool scalar_gamma0(const IntMatrix& m, long N) {
  Integer d = det(m);
  return (d == 1 || d == -1) && has_level_last_row(m, N);
}

}  // namespace

SolutionClass classify_normalizer_solution(const LevelContext& ctx, const IntMatrix& g) {
  const long N = ctx.N();
  if (scalar_gamma0(primitive_scale(to_rational(g)), N)) return SolutionClass::Scalar;
  if (ctx.n() == 2) {
    RationalMatrix w{{0, -1}, {N, 0}};
    if (scalar_gamma0(primitive_scale(to_rational(g) * inverse(w)), N)) return SolutionClass::Fricke2;
  }
  return SolutionClass::Unexpected;
}

SolutionClass classify_atkin_lehner_solution(const LevelContext& ctx, const IntMatrix& g) {
  IntMatrix gamma;
  return reduce_to_atkin_lehner(ctx, g, gamma) ? SolutionClass::AtkinLehner : SolutionClass::Unexpected;
}

bool reduce_to_atkin_lehner(const LevelContext& ctx, const IntMatrix& g, IntMatrix& gamma) {
  const std::size_t n = static_cast<std::size_t>(ctx.n());
  RationalMatrix d = level_diag(ctx);
  IntMatrix h = primitive_scale(to_rational(g) * inverse(d));
  if (det(h) != 1 || !is_gamma0(h, ctx.N())) return false;
  gamma = inverse_unimodular(h);
  // gamma g = c diag(1,..,1,N) for a positive rational c.
  IntMatrix r = gamma * g;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && r(i, j) != 0) return false;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (r(i, i) != r(0, 0)) return false;
  return r(0, 0) > 0 && r(n - 1, n - 1) == r(0, 0) * Integer(ctx.N());
}

SearchReport normalizer_search(const LevelContext& ctx, long bound) {
  return run_search(ctx, bound, SearchKind::Normalizer);
}

SearchReport atkin_lehner_search(const LevelContext& ctx, long bound) {
  if (bound < ctx.N()) throw std::invalid_argument("bound must be at least N");
  return run_search(ctx, bound, SearchKind::AtkinLehner);
}

SearchReport fixed_lattice_search(const LevelContext& ctx, long bound) {
  return run_search(ctx, bound, SearchKind::FixedLattices);
}

}  // namespace latfricke
