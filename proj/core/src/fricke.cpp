#include "latfricke/fricke.hpp"

#include "latfricke/normal_form.hpp"

namespace latfricke {

LevelContext::LevelContext(long n, long N) : n_(n), N_(N) {
  if (n < 2 || n > 8) throw std::invalid_argument("dimension must lie in [2, 8]");
  if (!is_prime(N)) throw std::invalid_argument("level N must be prime, got " + std::to_string(N));
  const std::size_t un = static_cast<std::size_t>(n);
  RationalMatrix a = RationalMatrix::identity(un);
  a(un - 1, un - 1) = Rational(N);
  a_ = ScaledRationalMatrix(a, -1, N, n);
  last_diag_ = IntMatrix::identity(un);
  last_diag_(un - 1, un - 1) = Integer(N);
  upper_diag_ = IntMatrix::identity(un);
  for (std::size_t i = 0; i + 1 < un; ++i) upper_diag_(i, i) = Integer(N);
}

ScaledRationalMatrix fricke_involute(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  if (static_cast<long>(z.dim()) != ctx.n()) throw std::invalid_argument("dimension mismatch");
  return ctx.A() * z.inv_transpose();
}

ScaledRationalMatrix level_sublattice(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  ScaledRationalMatrix s = z.left(ctx.upper_diag());
  return ScaledRationalMatrix(s.mantissa(), s.k(), ctx.N(), s.root());
}

bool conjugation_check(const LevelContext& ctx, const IntMatrix& gamma) {
  if (!is_gamma0(gamma, ctx.N())) throw std::invalid_argument("matrix is not in Gamma_0(N)");
  RationalMatrix d = to_rational(ctx.last_diag());
  RationalMatrix c = inverse(d) * to_rational(gamma) * d;
  if (!is_integral(c)) return false;
  return is_gamma0_transpose(to_integer(c), ctx.N());
}

namespace {

LVec lmul(const LVec& u, const IntMatrix& d) {
  LVec v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * d(i, i).get_si();
  return v;
}

PatternMinimum pattern_min(const ScaledRationalMatrix& basis, const IntMatrix& d) {
  // Pattern vectors are exactly u d for u in Z^n.
  Lattice sub(basis.left(d));
  ShortestResult r = shortest_with(sub, [&](const LVec& u) { return is_primitive(to_int_vec(lmul(u, d))); });
  IntVec v(r.witness.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = r.witness[i] * d(i, i);
  return {r.length_sq, sign_normalize(v)};
}

ScaledRationalMatrix with_level(const ScaledRationalMatrix& z, long N) {
  return ScaledRationalMatrix(z.mantissa(), z.k(), N, z.root());
}

}  // namespace

PatternMinimum alpha_min(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  return pattern_min(with_level(z, ctx.N()), ctx.upper_diag());
}

PatternMinimum beta_min(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  return pattern_min(with_level(z.inv_transpose(), ctx.N()), ctx.last_diag());
}

AlphaBeta compute_alpha_beta(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  ScaledRationalMatrix zp = fricke_involute(ctx, z);
  return {alpha_min(ctx, z), beta_min(ctx, z), alpha_min(ctx, zp), beta_min(ctx, zp)};
}

char letter_char(Letter l) { return l == Letter::A ? 'A' : 'B'; }

std::vector<std::string> LXYClassification::ties() const {
  std::vector<std::string> t;
  if (lz.tie) t.push_back("L_z");
  if (lz_dual.tie) t.push_back("L_z*");
  if (lzp.tie) t.push_back("L_z'");
  if (lzp_dual.tie) t.push_back("L_z'*");
  return t;
}

std::string LXYClassification::label() const {
  std::string s = "L(";
  s += letter_char(lz.letter);
  s += ",";
  s += letter_char(lz_dual.letter);
  s += ") L'(";
  s += letter_char(lzp.letter);
  s += ",";
  s += letter_char(lzp_dual.letter);
  s += ")";
  return s;
}

namespace {

LatticeLetter decide(ScaledLength a, ScaledLength b) {
  LatticeLetter l;
  int c = compare(a, b);
  l.letter = c <= 0 ? Letter::A : Letter::B;
  l.tie = c == 0;
  l.a_expr = std::move(a);
  l.b_expr = std::move(b);
  return l;
}

}  // namespace

LXYClassification classify(const LevelContext& ctx, const ScaledRationalMatrix& z, const AlphaBeta& ab) {
  (void)z;
  const Integer N(ctx.N());
  const Rational n(ctx.n());
  const Rational f1 = Rational(-2) / n;                // N^{-2/n}
  const Rational f2 = Rational(-2) + Rational(2) / n;  // N^{-2+2/n}
  LXYClassification c;
  c.ab = ab;
  c.lz = decide(ab.alpha_z.value, ab.beta_zp.value.times_power(f1, N));
  c.lz_dual = decide(ab.alpha_zp.value.times_power(f2, N), ab.beta_z.value);
  c.lzp = decide(ab.alpha_zp.value, ab.beta_z.value.times_power(f1, N));
  c.lzp_dual = decide(ab.alpha_z.value.times_power(f2, N), ab.beta_zp.value);
  return c;
}

LXYClassification classify(const LevelContext& ctx, const ScaledRationalMatrix& z) {
  return classify(ctx, z, compute_alpha_beta(ctx, z));
}

const char* case_name(FrickeCase c) {
  switch (c) {
    case FrickeCase::I: return "I";
    case FrickeCase::II: return "II";
    case FrickeCase::III: return "III";
  }
  return "?";
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::BulkBalanced: return "bulk-balanced";
    case Regime::CuspExceptional: return "cusp-exceptional";
    case Regime::Imbalanced: return "imbalanced";
  }
  return "?";
}

Rational hermite_power(long n) {
  switch (n) {
    case 1: return Rational(1);
    case 2: return Rational(4, 3);
    case 3: return Rational(2);
    case 4: return Rational(4);
    case 5: return Rational(8);
    case 6: return Rational(64, 3);
    case 7: return Rational(64);
    case 8: return Rational(256);
  }
  throw std::invalid_argument("Hermite constant not tabulated for n = " + std::to_string(n));
}

const CertificateConstants& certificate_constants() {
  static const CertificateConstants c = [] {
    CertificateConstants k;
    k.case3_upper[2] = Rational(4);
    k.case3_upper[3] = Rational(9);
    return k;
  }();
  return c;
}

namespace {

// gamma in Gamma_0(N) moving the alpha-witness to the last row, then reducing the
// upper block and the x-coordinates.
IntMatrix reduce_with_witness(const ScaledRationalMatrix& base, const IntVec& witness) {
  IntMatrix g0 = complete_with_last_row(witness);
  ScaledRationalMatrix w0 = base.left(g0);
  BlockReduction br = block_reduce_upper(w0);
  IntMatrix g1 = br.gamma * g0;
  IntMatrix s = size_reduction(base.left(g1).gram_mantissa());
  return s * g1;
}

}  // namespace

FrickeCertificate fricke_reduce(const LevelContext& ctx, const ScaledRationalMatrix& z_in) {
  const long n = ctx.n();
  const Integer N(ctx.N());
  ScaledRationalMatrix z = with_level(z_in, ctx.N());
  ScaledRationalMatrix zp = fricke_involute(ctx, z);
  AlphaBeta ab = compute_alpha_beta(ctx, z);
  LXYClassification cls = classify(ctx, z, ab);
  FrickeCertificate cert;
  cert.classification = cls;
  cert.ties = cls.ties();
  const Rational three_quarters(3, 4);
  auto fail = [&](const std::string& why) { cert.failures.push_back(why); };

  if (cls.lz.letter == Letter::A || cls.lzp.letter == Letter::A) {
    cert.fcase = FrickeCase::I;
    cert.regime = Regime::CuspExceptional;
    cert.applied_fricke = cls.lz.letter != Letter::A;
  } else if (cls.in_L(Letter::B, Letter::A) && cls.in_Lp(Letter::B, Letter::A)) {
    cert.fcase = FrickeCase::III;
    cert.regime = Regime::BulkBalanced;
    cert.applied_fricke = ab.alpha_zp.value > ab.alpha_z.value;
  } else {
    cert.fcase = FrickeCase::II;
    cert.regime = Regime::Imbalanced;
    cert.applied_fricke = cls.lzp_dual.letter != Letter::B;
  }
  const ScaledRationalMatrix& base = cert.applied_fricke ? zp : z;
  const PatternMinimum& alpha_base = cert.applied_fricke ? ab.alpha_zp : ab.alpha_z;
  const PatternMinimum& alpha_other = cert.applied_fricke ? ab.alpha_z : ab.alpha_zp;

  if (cert.fcase == FrickeCase::II) {
    cert.gamma = IntMatrix::identity(static_cast<std::size_t>(n));
    cert.w = base;
    cert.coords = iwasawa_decompose(cert.w);
    ScaledLength lam = shortest_vector(Lattice(cert.w)).length_sq;
    // lambda_1^2 <= gamma_n N^{-2/n}  <=>  lambda_1^{2n} <= gamma_n^n N^{-2}
    ScaledLength bound = ScaledLength(hermite_power(n)).times_power(Rational(-2), N);
    if (lam.pow(n) > bound) fail("case II minimum exceeds gamma_n N^{-2/n}");
    LatticeLetter l = cert.applied_fricke ? cls.lzp : cls.lz;
    if (lam != l.minimum()) fail("case II minimum disagrees with the table expression");
    cert.certified = cert.failures.empty();
    return cert;
  }

  cert.gamma = reduce_with_witness(base, alpha_base.witness);
  cert.w = base.left(cert.gamma);
  cert.coords = iwasawa_decompose(cert.w);
  if (!is_gamma0(cert.gamma, ctx.N())) fail("gamma not in Gamma_0(N)");
  RatVec en(static_cast<std::size_t>(n), Rational(0));
  en.back() = 1;
  if (cert.w.squared_length(en) != alpha_base.value) fail("last row is not an alpha witness");
  for (std::size_t i = 1; i < cert.coords.y_sq.size(); ++i)
    if (cert.coords.y_sq[i] < three_quarters) fail("inner y_i^2 below 3/4");
  const Rational& y1 = cert.coords.y_sq[0];
  const Rational Nsq = Rational(N * N);
  cert.y1_sq_times_N_sq = y1 * Nsq;
  if (cert.fcase == FrickeCase::I) {
    if (y1 < certificate_constants().c1) fail("case I y_1^2 below c1");
  } else {
    if (cert.y1_sq_times_N_sq < certificate_constants().c3) fail("case III y_1^2 N^2 below c3");
    if (alpha_other.value > alpha_base.value) fail("case III alpha(w') > alpha(w)");
  }
  cert.certified = cert.failures.empty();
  return cert;
}

const char* table_row_name(TableRow r) {
  switch (r) {
    case TableRow::Lz: return "L_z";
    case TableRow::LzDual: return "L_z*";
    case TableRow::Lzp: return "L_z'";
    case TableRow::LzpDual: return "L_z'*";
  }
  return "?";
}

TableRowCheck table_row_check(const LevelContext& ctx, const ScaledRationalMatrix& z_in, TableRow row,
                              const ScaledLength& r2) {
  const long n = ctx.n();
  const long N = ctx.N();
  const Integer base_n(N);
  ScaledRationalMatrix z = with_level(z_in, N);
  ScaledRationalMatrix zp = fricke_involute(ctx, z);
  const bool primed = row == TableRow::Lzp || row == TableRow::LzpDual;
  const ScaledRationalMatrix& b = primed ? zp : z;
  const ScaledRationalMatrix& o = primed ? z : zp;
  TableRowCheck out;
  if (row == TableRow::Lz || row == TableRow::Lzp) {
    Lattice l(b);
    out.direct = primitive_spectrum(l, r2);
    out.a_part = primitive_spectrum(l, r2, Pattern::LastRowGamma0, N);
    // N^{-1/n} beta(o): lengths in L_{o^{-T}} with N | last coordinate.
    Rational f = make_rational(2, n);
    LengthSpectrum raw = primitive_spectrum(Lattice(with_level(o.inv_transpose(), N)), r2.times_power(f, base_n),
                                            Pattern::LastCoordDivisible, N);
    out.b_part = rescale(raw, -f, base_n);
  } else {
    Lattice l(with_level(b.inv_transpose(), N));
    out.direct = primitive_spectrum(l, r2);
    out.b_part = primitive_spectrum(l, r2, Pattern::LastCoordDivisible, N);
    // N^{-1+1/n} alpha(o): lengths in L_o with N | first n-1 coordinates.
    Rational f = Rational(2) - make_rational(2, n);
    LengthSpectrum raw = primitive_spectrum(Lattice(o), r2.times_power(f, base_n), Pattern::LastRowGamma0, N);
    out.a_part = rescale(raw, -f, base_n);
  }
  out.a_part.bound = r2;
  out.b_part.bound = r2;
  out.equal = same_spectrum(out.direct, merge_spectra(out.a_part, out.b_part));
  return out;
}

LevelIdentities level_identities(const LevelContext& ctx, const ScaledRationalMatrix& z_in) {
  const long n = ctx.n();
  ScaledRationalMatrix z = with_level(z_in, ctx.N());
  ScaledRationalMatrix zp = fricke_involute(ctx, z);
  LevelIdentities out;
  out.dual_level = level_sublattice(ctx, z).inv_transpose() == zp.times_scalar_power(1 - n);
  out.level_dual = level_sublattice(ctx, zp) == with_level(z.inv_transpose(), ctx.N()).times_scalar_power(n - 1);
  return out;
}

BalancednessReport balancedness_report(const LevelContext& ctx, const ScaledRationalMatrix& z_in) {
  const long n = ctx.n();
  ScaledRationalMatrix z = with_level(z_in, ctx.N());
  ScaledRationalMatrix zp = fricke_involute(ctx, z);
  ScaledRationalMatrix zl = level_sublattice(ctx, z);
  ScaledRationalMatrix zpl = level_sublattice(ctx, zp);
  BalancednessReport r;
  r.lz = successive_minima(Lattice(z));
  r.lzp = successive_minima(Lattice(zp));
  r.lz_level = successive_minima(Lattice(zl));
  r.lzp_level = successive_minima(Lattice(zpl));
  LevelIdentities ids = level_identities(ctx, z);
  r.identity_dual_level = ids.dual_level;
  r.identity_level_dual = ids.level_dual;
  r.det_level = Rational(det(ctx.upper_diag())) * z.det_value();
  auto ratios = [&](const MinimaProfile& p) {
    std::vector<Rational> out;
    for (const auto& l : p.lambda_sq)
      out.push_back(l.pow(n).times_power(Rational(-2 * (n - 1)), Integer(ctx.N())).rational_value());
    return out;
  };
  r.ratio_sq_level = ratios(r.lz_level);
  r.ratio_sq_level_p = ratios(r.lzp_level);
  return r;
}

}  // namespace latfricke
