// latfricke command line tool.  Every subcommand reads matrices in the shared
// text format and prints JSON on stdout.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "latfricke/counting.hpp"
#include "latfricke/experiments.hpp"
#include "latfricke/group.hpp"
#include "latfricke/hecke.hpp"
#include "latfricke/iwasawa.hpp"
#include "latfricke/lattice.hpp"
#include "latfricke/matrix_io.hpp"
#include "latfricke/normal_form.hpp"
#include "latfricke/search.hpp"

using namespace latfricke;
using nlohmann::json;

namespace {

constexpr int kInputError = 3;

json int_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json vec_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

json matrix_json(const IntMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i)));
  return a;
}

json matrix_json(const RationalMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
    a.push_back(r);
  }
  return a;
}

// r * N^(2k/n): {"r": "p/q", "k": k} with k = exponent n / 2.
json length_json(const ScaledLength& s, long n) {
  json j;
  j["r"] = s.mantissa().get_str();
  Rational k = s.exponent() * n / 2;
  if (k.get_den() == 1 && k.get_num().fits_slong_p())
    j["k"] = k.get_num().get_si();
  else
    j["k"] = k.get_str();
  if (!s.is_rational()) j["base"] = int_json(s.base());
  j["value"] = s.to_double();
  return j;
}

json scaled_matrix_json(const ScaledRationalMatrix& z) {
  return {{"mantissa", matrix_json(z.mantissa())}, {"k", z.k()}, {"root", z.root()}, {"N", z.level()}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

Rational parse_rational_arg(const std::string& s) {
  const auto slash = s.find('/');
  Integer p(s.substr(0, slash)), q(slash == std::string::npos ? std::string("1") : s.substr(slash + 1));
  return make_rational(p, q);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

IntMatrix integral(const ScaledRationalMatrix& z) {
  if (z.k() % z.root() != 0) throw std::invalid_argument("matrix must be unscaled and integral");
  return to_integer(z.canonical().mantissa());
}

Pattern parse_pattern(const std::string& s) {
  if (s == "none") return Pattern::None;
  if (s == "gamma0") return Pattern::LastRowGamma0;
  if (s == "last") return Pattern::LastCoordDivisible;
  throw std::invalid_argument("pattern must be none, gamma0 or last");
}

// "m", "<=M" or "shape:p,q,nu".
DeterminantSpec parse_det(const std::string& s, long n) {
  if (s.rfind("<=", 0) == 0) return DeterminantSpec::up_to(Integer(s.substr(2)));
  if (s.rfind("shape:", 0) == 0) {
    auto parts = split(s.substr(6), ',');
    if (parts.size() != 3) throw std::invalid_argument("shape spec is shape:p,q,nu");
    return DeterminantSpec::shape(std::stol(parts[0]), std::stol(parts[1]), std::stol(parts[2]), n);
  }
  return DeterminantSpec::exact(Integer(s));
}

// "amplifier:q", "parabolic:q" or "j=value,j=value".
DivisorFilter parse_divisors(const std::string& s, long n) {
  if (s.rfind("amplifier:", 0) == 0) return amplifier_divisor_filter(n, std::stol(s.substr(10)));
  if (s.rfind("parabolic:", 0) == 0) return parabolic_divisor_filter(n, std::stol(s.substr(10)));
  DivisorFilter f;
  for (const auto& item : split(s, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("divisor pattern entries are j=value");
    f.emplace_back(std::stoul(item.substr(0, eq)), Integer(item.substr(eq + 1)));
  }
  return f;
}

json count_json(const CountResult& r, long n) {
  json j;
  j["count"] = r.count;
  json by_det = json::object();
  for (const auto& [d, c] : r.by_det) by_det[d.get_str()] = c;
  j["by_det"] = by_det;
  json tags = json::object();
  for (const auto& [t, c] : r.tags) tags[degeneracy_name(t)] = c;
  j["tags"] = tags;
  json rows = json::array();
  for (std::size_t i = 0; i < r.row_candidates.size(); ++i) rows.push_back({{"row", i + 1}, {"candidates", r.row_candidates[i]}});
  j["row_stats"] = rows;
  j["estimate"] = r.estimate;
  json ms = json::array();
  for (std::size_t i = 0; i < r.matrices.size(); ++i)
    ms.push_back({{"gamma", matrix_json(r.matrices[i])}, {"tag", degeneracy_name(r.matrix_tags[i])}});
  j["matrices"] = ms;
  (void)n;
  return j;
}

json certificate_json(const FrickeCertificate& c) {
  json j;
  j["case"] = case_name(c.fcase);
  j["applied_fricke"] = c.applied_fricke;
  j["gamma"] = matrix_json(c.gamma);
  json y = json::array();
  for (const auto& v : c.coords.y_sq) y.push_back(v.get_str());
  j["y_sq"] = y;
  j["ties"] = c.ties;
  j["classification"] = c.classification.label();
  j["regime"] = regime_name(c.regime);
  j["certified"] = c.certified;
  j["failures"] = c.failures;
  j["w"] = scaled_matrix_json(c.w);
  if (c.fcase == FrickeCase::III) j["y1_sq_times_N_sq"] = c.y1_sq_times_N_sq.get_str();
  return j;
}

json search_json(const SearchReport& s) {
  json j;
  j["search"] = search_kind_name(s.kind);
  j["n"] = s.n;
  j["N"] = s.N;
  j["bound"] = s.bound;
  j["hermite_forms"] = s.hnf_count;
  j["candidates"] = s.candidates;
  json hits = json::array();
  for (const auto& h : s.hits)
    hits.push_back({{"hnf", matrix_json(h.hnf)},
                    {"g", matrix_json(h.g)},
                    {"class", solution_class_name(h.cls)},
                    {"verified", h.verified}});
  j["hits"] = hits;
  j["all_verified"] = s.all_verified();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latfricke: exact lattices, Fricke reduction and matrix counting"};
  app.require_subcommand(1);
  int exit_code = 0;

  // lattice
  auto* lattice = app.add_subcommand("lattice", "lattice operations on L_z");
  lattice->require_subcommand(1);
  std::string lat_file, lat_center, lat_pattern = "none", lat_r2 = "1";
  std::size_t lat_j = 2;
  auto* l_minima = lattice->add_subcommand("minima", "successive minima with witnesses");
  auto* l_dual = lattice->add_subcommand("dual", "dual lattice basis and Gram");
  auto* l_wedge = lattice->add_subcommand("wedge", "exterior power Gram");
  auto* l_spec = lattice->add_subcommand("spectrum", "primitive length spectrum");
  auto* l_ball = lattice->add_subcommand("count-ball", "lattice points in a ball");
  for (auto* s : {l_minima, l_dual, l_wedge, l_spec, l_ball}) s->add_option("file", lat_file, "matrix file")->required();
  l_wedge->add_option("--j", lat_j, "exterior power degree")->required();
  l_spec->add_option("--R2", lat_r2, "squared radius (rational)")->required();
  l_spec->add_option("--pattern", lat_pattern, "none | gamma0 | last");
  l_ball->add_option("--R2", lat_r2, "squared radius (rational)")->required();
  l_ball->add_option("--center", lat_center, "comma separated rational coefficients");

  // iwasawa, classify, reduce
  std::string z_file;
  auto* iwasawa = app.add_subcommand("iwasawa", "Iwasawa coordinates");
  auto* classify_cmd = app.add_subcommand("classify", "L(X,Y) classification");
  auto* reduce = app.add_subcommand("reduce", "Fricke reduction certificate");
  for (auto* s : {iwasawa, classify_cmd, reduce}) s->add_option("file", z_file, "matrix file")->required();

  // search
  auto* search = app.add_subcommand("search", "bounded exhaustive searches");
  search->require_subcommand(1);
  long s_n = 3, s_N = 2, s_bound = 8;
  auto* s_norm = search->add_subcommand("normalizer", "normalizer of Gamma_0(N)");
  auto* s_al = search->add_subcommand("atkin-lehner", "g with g^-1 Gamma_0(N) g = Gamma_0(N)^T");
  auto* s_fix = search->add_subcommand("fixed-lattices", "lattices fixed by Gamma_0(N)");
  for (auto* s : {s_norm, s_al, s_fix}) {
    s->add_option("--n", s_n, "dimension");
    s->add_option("--N", s_N, "prime level");
    s->add_option("--bound", s_bound, "determinant bound for Hermite forms");
  }

  // cusps
  auto* cusps = app.add_subcommand("cusps", "cusps of Gamma_0(N)");
  cusps->require_subcommand(1);
  std::string cusp_file;
  auto* c_dec = cusps->add_subcommand("decompose", "xi = gamma w_k u");
  c_dec->add_option("file", cusp_file, "matrix file with xi in SL_n(Z)")->required();

  // hecke
  auto* hecke = app.add_subcommand("hecke", "Hecke coset representatives");
  hecke->require_subcommand(1);
  long h_n = 2, h_N = 5, h_p = 2, h_q = 3;
  std::string h_exps;
  auto* h_reps = hecke->add_subcommand("reps", "right cosets in Gamma_0(N) diag(p^a) Gamma_0(N)");
  auto* h_prod = hecke->add_subcommand("product", "T(p) T'(q) product identity");
  for (auto* s : {h_reps, h_prod}) {
    s->add_option("--n", h_n, "dimension");
    s->add_option("--N", h_N, "prime level");
    s->add_option("--p", h_p, "prime p");
  }
  h_reps->add_option("--exponents", h_exps, "comma separated exponents, default 1,0,..,0");
  h_prod->add_option("--q", h_q, "prime q");

  // count
  auto* count = app.add_subcommand("count", "enumerate H(z, m, N)");
  std::string c_file, c_det, c_c2, c_div;
  bool c_oracle = false, c_census = false;
  double c_max_estimate = 2e7;
  count->add_option("--z", c_file, "matrix file")->required();
  count->add_option("--det", c_det, "m | <=M | shape:p,q,nu")->required();
  count->add_option("--C2", c_c2, "norm constant (rational), default n");
  count->add_option("--divisors", c_div, "amplifier:q | parabolic:q | j=value,...");
  count->add_flag("--oracle", c_oracle, "cross-check against the box oracle");
  count->add_flag("--census", c_census, "last-row census");
  count->add_option("--max-estimate", c_max_estimate, "refuse above this predicted size");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment suite");
  std::string e_id, e_config, e_out;
  experiment->add_option("id", e_id, "E1..E9")->required();
  experiment->add_option("--config", e_config, "flat key = value file");
  experiment->add_option("--out", e_out, "output prefix (default: the id)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lattice->parsed()) {
      MatrixFile mf = read_matrix_file(lat_file);
      Lattice l(mf.z);
      if (l_minima->parsed()) {
        MinimaProfile p = successive_minima(l);
        json j;
        j["lambda_sq"] = json::array();
        for (const auto& v : p.lambda_sq) j["lambda_sq"].push_back(length_json(v, mf.n));
        j["witnesses"] = json::array();
        for (const auto& w : p.witnesses) j["witnesses"].push_back(vec_json(w));
        print(j);
      } else if (l_dual->parsed()) {
        Lattice d = dual(l);
        print({{"basis", scaled_matrix_json(d.basis())},
               {"gram_mantissa", matrix_json(d.gram_mantissa())},
               {"gram_exponent", d.gram_exponent().get_str()}});
      } else if (l_wedge->parsed()) {
        Lattice w = exterior_power(l, lat_j);
        print({{"dim", w.dim()}, {"gram_mantissa", matrix_json(w.gram_mantissa())}, {"gram_exponent", w.gram_exponent().get_str()}});
      } else if (l_spec->parsed()) {
        LengthSpectrum s = primitive_spectrum(l, ScaledLength(parse_rational_arg(lat_r2)), parse_pattern(lat_pattern), mf.N);
        json e = json::array();
        for (const auto& [len, mult] : s.entries) e.push_back({{"length_sq", length_json(len, mf.n)}, {"multiplicity", mult}});
        print({{"entries", e}, {"total", s.total()}});
      } else if (l_ball->parsed()) {
        RatVec c(l.dim(), Rational(0));
        if (!lat_center.empty()) {
          auto parts = split(lat_center, ',');
          if (parts.size() != l.dim()) throw std::invalid_argument("center needs one coordinate per dimension");
          for (std::size_t i = 0; i < parts.size(); ++i) c[i] = parse_rational_arg(parts[i]);
        }
        BallPoints b = count_points_in_ball(l, c, ScaledLength(parse_rational_arg(lat_r2)));
        json pts = json::array();
        for (const auto& v : b.points) pts.push_back(vec_json(v));
        print({{"count", b.count}, {"points", pts}});
      }
    } else if (iwasawa->parsed()) {
      MatrixFile mf = read_matrix_file(z_file);
      IwasawaCoords c = iwasawa_decompose(mf.z);
      json y = json::array(), d = json::array();
      for (const auto& v : c.y_sq) y.push_back(v.get_str());
      for (const auto& v : c.d_sq) d.push_back(length_json(v, mf.n));
      print({{"x", matrix_json(c.x)}, {"y_sq", y}, {"d_sq", d}, {"siegel", in_siegel(c)}});
    } else if (classify_cmd->parsed()) {
      MatrixFile mf = read_matrix_file(z_file);
      LevelContext ctx(mf.n, mf.N);
      LXYClassification c = classify(ctx, mf.z);
      auto letter = [&](const LatticeLetter& l) {
        return json{{"letter", std::string(1, letter_char(l.letter))},
                    {"tie", l.tie},
                    {"a_expr", length_json(l.a_expr, mf.n)},
                    {"b_expr", length_json(l.b_expr, mf.n)}};
      };
      print({{"label", c.label()},
             {"L_z", letter(c.lz)},
             {"L_z_dual", letter(c.lz_dual)},
             {"L_zp", letter(c.lzp)},
             {"L_zp_dual", letter(c.lzp_dual)},
             {"ties", c.ties()}});
    } else if (reduce->parsed()) {
      MatrixFile mf = read_matrix_file(z_file);
      print(certificate_json(fricke_reduce(LevelContext(mf.n, mf.N), mf.z)));
    } else if (search->parsed()) {
      LevelContext ctx(s_n, s_N);
      if (s_norm->parsed()) print(search_json(normalizer_search(ctx, s_bound)));
      if (s_al->parsed()) print(search_json(atkin_lehner_search(ctx, s_bound)));
      if (s_fix->parsed()) print(search_json(fixed_lattice_search(ctx, s_bound)));
    } else if (cusps->parsed()) {
      MatrixFile mf = read_matrix_file(cusp_file);
      LevelContext ctx(mf.n, mf.N);
      IntMatrix xi = integral(mf.z);
      CuspDecomposition d = cusp_decompose(ctx, xi);
      print({{"k", d.k},
             {"gamma", matrix_json(d.gamma)},
             {"w_k", matrix_json(cusp_representative(mf.n, d.k))},
             {"u", matrix_json(d.u)},
             {"roundtrip", d.gamma * cusp_representative(mf.n, d.k) * d.u == xi},
             {"gamma_in_gamma0", is_gamma0(d.gamma, mf.N)}});
    } else if (hecke->parsed()) {
      LevelContext ctx(h_n, h_N);
      if (h_reps->parsed()) {
        std::vector<long> exps(static_cast<std::size_t>(h_n), 0);
        exps[0] = 1;
        if (!h_exps.empty()) {
          exps.clear();
          for (const auto& e : split(h_exps, ',')) exps.push_back(std::stol(e));
        }
        HeckeReps h = hecke_coset_reps(ctx, exps, h_p);
        json reps = json::array();
        for (const auto& m : h.reps) reps.push_back(matrix_json(m));
        print({{"diagonal", vec_json(h.diagonal)},
               {"count", h.reps.size()},
               {"reps", reps},
               {"pairwise_inequivalent", h.pairwise_inequivalent},
               {"closed", h.closed},
               {"transitive", h.transitive}});
      } else {
        HeckeProduct h = hecke_product_check(ctx, h_p, h_q);
        print({{"p", h.p},
               {"q", h.q},
               {"left_count", h.left_count},
               {"right_count", h.right_count},
               {"product_count", h.product_count},
               {"target_count", h.target_count},
               {"determinants_ok", h.determinants_ok},
               {"equal", h.equal}});
      }
    } else if (count->parsed()) {
      MatrixFile mf = read_matrix_file(c_file);
      LevelContext ctx(mf.n, mf.N);
      HQuery q(ctx, mf.z, parse_det(c_det, mf.n));
      if (!c_c2.empty()) q.c2 = parse_rational_arg(c_c2);
      if (!c_div.empty()) q.divisors = parse_divisors(c_div, mf.n);
      q.max_estimate = c_max_estimate;
      q.validate();
      try {
        CountResult r = enumerate_H(q);
        json j = count_json(r, mf.n);
        j["det"] = q.det.to_string();
        j["C2"] = q.c2.get_str();
        if (c_oracle) {
          CountResult o = naive_oracle(q);
          j["oracle_count"] = o.count;
          j["oracle_match"] = o.matrices == r.matrices;
          if (o.matrices != r.matrices) exit_code = 1;
        }
        if (c_census) {
          LastRowCensus c = last_row_census(q);
          j["census"] = {{"admissible_rows", c.admissible_rows},
                         {"total", c.total},
                         {"max_extension", c.max_extension},
                         {"max_extension_per_det", c.max_extension_per_det},
                         {"lambda_n", int_json(c.lambda_n)}};
        }
        print(j);
      } catch (const BudgetExceeded& e) {
        print({{"refused", true}, {"reason", e.what()}, {"estimate", e.estimate()}});
        exit_code = 2;
      }
    } else if (experiment->parsed()) {
      ExperimentConfig cfg = e_config.empty() ? ExperimentConfig(e_id, {}) : ExperimentConfig::from_file(e_id, e_config);
      validate_config(cfg);
      ExperimentReport r = run_experiment(cfg);
      std::vector<std::string> paths = write_report(r, cfg, e_out.empty() ? e_id : e_out);
      json j;
      j["id"] = r.id;
      j["files"] = paths;
      j["incomplete"] = r.incomplete;
      json checks = json::array();
      for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"hard", c.hard}, {"pass", c.pass}, {"violations", c.violations}, {"instances", c.instances}, {"detail", c.detail}});
      j["checks"] = checks;
      j["exit_code"] = r.exit_code();
      print(j);
      exit_code = r.exit_code();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return exit_code;
}
