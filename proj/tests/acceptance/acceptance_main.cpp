// Acceptance run: one PASS/FAIL line per criterion.  Grids, seeds and
// tolerances are pinned below rather than taken from suite defaults.
//
// Exit status is 0 when every criterion outside kKnownFailing passes and every
// criterion inside it still fails.  Known failures are printed as FAIL.
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "latfricke/experiments.hpp"

using namespace latfricke;

namespace {

// Criteria that fail at desk scale; see README.
const std::set<int> kKnownFailing = {5, 6, 7};

struct Pinned {
  std::string id;
  std::string config;
  double max_seconds;
};

const std::map<std::string, Pinned>& pinned() {
  static const std::map<std::string, Pinned> p = {
      {"E1", {"E1", "seed = 0\nn = 2,3,4\nN = 5,7,11\nsamples = 100\n", 60}},
      {"E2", {"E2", "seed = 0\nn = 2\nN = 5,7\nm_max = 6\nC2 = 1,2,4\nbulk = 3\n", 300}},
      {"E3", {"E3", "seed = 0\nn = 2,3,4\nsamples = 500\n", 60}},
      {"E4", {"E4", "seed = 0\nn = 2,3\nN = 5,7\nsamples = 50\nR2_factor = 4\n", 600}},
      {"E5", {"E5", "seed = 0\nn = 2,3\nN = 11,13,17,19,23,29,31\nsamples = 200\n", 600}},
      {"E6",
       {"E6",
        "seed = 0\nn = 2,3\nN = 11,13,17,19,23\nexponent = 3/4\nrigidity_exponent = 1/2\n"
        "ratio_constant = 200\nmonotone_tolerance = 1/10\nbulk = 10\n",
        600}},
      {"E7", {"E7", "seed = 0\nN = 7,11,13\nprimes = 2,3,5\nbulk = 2\n", 600}},
      {"E8",
       {"E8", "seed = 0\nn = 2,3,4\nsamples = 1000\nmoves = 100\nhecke_n = 2,3\nhecke_p = 2,3\nhecke_N = 5,7\n", 600}},
      {"E9", {"E9", "seed = 0\nn = 3\nN = 2,3\nbound = 8\ncontrast_bound = 4\n", 1800}},
  };
  return p;
}

struct Run {
  ExperimentConfig config;
  ExperimentReport report;
  double seconds = 0;
  std::string error;
};

Run execute(const Pinned& p) {
  Run r{ExperimentConfig::parse_string(p.id, p.config), {}, 0, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.report = run_experiment(r.config);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

// All named checks present and passing, the run complete and within its time limit.
Verdict checks(const Run& run, const Pinned& p, const std::vector<std::string>& names) {
  Verdict v;
  if (!run.error.empty()) return {false, "error: " + run.error};
  if (run.report.incomplete) {
    v.pass = false;
    v.detail += "incomplete; ";
  }
  for (const auto& name : names) {
    const InvariantCheck* c = run.report.check(name);
    if (!c) {
      v.pass = false;
      v.detail += name + " missing; ";
      continue;
    }
    if (!c->pass || c->instances == 0) v.pass = false;
    v.detail += name + " " + std::to_string(c->violations) + "/" + std::to_string(c->instances);
    if (!c->pass && !c->detail.empty()) v.detail += " (" + c->detail + ")";
    v.detail += "; ";
  }
  char t[64];
  std::snprintf(t, sizeof t, "%.1fs of %.0fs", run.seconds, p.max_seconds);
  if (run.seconds > p.max_seconds) v.pass = false;
  v.detail += t;
  return v;
}

bool same_tables(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.tables.size() != b.tables.size()) return false;
  for (const auto& [name, t] : a.tables) {
    auto it = b.tables.find(name);
    if (it == b.tables.end() || it->second.csv() != t.csv()) return false;
  }
  return true;
}

}  // namespace

int main() {
  std::map<std::string, Run> runs;
  for (const auto& [id, p] : pinned()) {
    runs.emplace(id, execute(p));
    std::fprintf(stderr, "ran %s in %.1fs\n", id.c_str(), runs.at(id).seconds);
  }
  auto rc = [&](const std::string& id, const std::vector<std::string>& names) {
    return checks(runs.at(id), pinned().at(id), names);
  };

  std::vector<std::pair<std::string, Verdict>> lines;
  lines.push_back({"exact identities", rc("E1", {"involution", "wedge_dual_isometry", "dual_level_identity",
                                                 "level_dual_identity"})});
  lines.push_back({"oracle equivalence", rc("E2", {"oracle_equivalence"})});
  lines.push_back({"Minkowski second theorem", rc("E3", {"minkowski_lower", "minkowski_upper"})});
  lines.push_back({"spectrum table exhaustiveness", rc("E4", {"spectrum_table_exhaustive"})});
  lines.push_back({"Fricke dichotomy", rc("E5", {"certified", "dichotomy_case_I_or_III", "case3_interval",
                                                 "case3_inner_y"})});
  {
    Verdict v = rc("E6", {"shape_constant", "shape_monotone"});
    const auto& s = runs.at("E6").report.summary;
    if (s.contains("max_ratio")) v.detail += "; constant 200, observed max " + s["max_ratio"].dump();
    lines.push_back({"counting bound shape", v});
  }
  lines.push_back({"rigidity", rc("E6", {"rigidity"})});
  lines.push_back({"parabolic exclusion", rc("E7", {"parabolic_empty"})});
  lines.push_back({"cusp suite", rc("E8", {"cusp_count", "cusp_roundtrip", "cusp_invariance"})});
  lines.push_back({"search certificates", rc("E9", {"normalizer_scalar_only", "atkin_lehner_class_only",
                                                    "fixed_lattices", "n2_contrast"})});
  lines.push_back({"Hecke suite", rc("E8", {"hecke_counts", "hecke_product"})});
  {
    Verdict v;
    std::string differing;
    for (const auto& [id, p] : pinned()) {
      Run again = execute(p);
      if (!again.error.empty() || !runs.at(id).error.empty() || !same_tables(runs.at(id).report, again.report))
        differing += id + " ";
    }
    v.pass = differing.empty();
    v.detail = v.pass ? "all 9 suites byte-identical on re-run" : "differing: " + differing;
    lines.push_back({"determinism", v});
  }

  int unexpected = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const bool known = kKnownFailing.count(k) > 0;
    const Verdict& v = lines[i].second;
    std::printf("%s criterion %d (%s)%s: %s\n", v.pass ? "PASS" : "FAIL", k, lines[i].first.c_str(),
                !v.pass && known ? " [known]" : "", v.detail.c_str());
    if (v.pass == known) {
      ++unexpected;
      if (known) std::printf("  criterion %d was expected to fail and passed; update kKnownFailing\n", k);
    }
  }
  std::fflush(stdout);
  return unexpected == 0 ? 0 : 1;
}
