#include "latfricke/experiments.hpp"

#include <gmp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "suites.hpp"

namespace latfricke {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

long parse_long(const std::string& key, const std::string& text) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("config key '" + key + "': not an integer: '" + text + "'");
  return v;
}

Rational parse_rational(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  long p = parse_long(key, num);
  long q = parse_long(key, den);
  if (q <= 0) throw ConfigError("config key '" + key + "': bad denominator in '" + text + "'");
  return make_rational(p, q);
}

}  // namespace

ExperimentConfig::ExperimentConfig(std::string id, std::map<std::string, std::string> values)
    : id_(std::move(id)), values_(std::move(values)) {}

ExperimentConfig ExperimentConfig::parse(const std::string& id, std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    if (values.count(key)) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    values[key] = value;
  }
  return ExperimentConfig(id, std::move(values));
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& id, const std::string& text) {
  std::istringstream in(text);
  return parse(id, in);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& id, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(id, in);
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_long(key, it->second);
}

std::uint64_t ExperimentConfig::get_seed(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::uint64_t v = 0;
  const std::string& t = it->second;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("config key '" + key + "': not an unsigned integer: '" + t + "'");
  return v;
}

Rational ExperimentConfig::get_rational(const std::string& key, const Rational& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_rational(key, it->second);
}

std::vector<long> ExperimentConfig::get_longs(const std::string& key, const std::vector<long>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_long(key, s));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<Rational> ExperimentConfig::get_rationals(const std::string& key,
                                                      const std::vector<Rational>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<Rational> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_rational(key, s));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string Table::csv() const {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) {
          if (ch == '"') out << '"';
          out << ch;
        }
        out << '"';
      } else {
        out << c;
      }
    }
    out << '\n';
  };
  emit(columns);
  for (const auto& r : rows) emit(r);
  return out.str();
}

const InvariantCheck* ExperimentReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool ExperimentReport::hard_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return !c.hard || c.pass; });
}

int ExperimentReport::exit_code() const {
  if (!hard_pass()) return 1;
  return incomplete ? 2 : 0;
}

nlohmann::json ExperimentReport::to_json(const ExperimentConfig& config) const {
  nlohmann::json j;
  j["id"] = id;
  j["title"] = title;
  j["config"] = config.values();
  j["incomplete"] = incomplete;
  j["refusals"] = refusals;
  j["exit_code"] = exit_code();
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name},
                  {"hard", c.hard},
                  {"pass", c.pass},
                  {"violations", c.violations},
                  {"instances", c.instances},
                  {"detail", c.detail}});
  j["checks"] = cs;
  j["summary"] = summary;
  nlohmann::json tables_json = nlohmann::json::object();
  for (const auto& [name, t] : tables) tables_json[name] = t.rows.size();
  j["table_rows"] = tables_json;
  j["environment"] = {{"latfricke", "0.1.0"},
                      {"compiler", __VERSION__},
                      {"gmp", gmp_version},
                      {"cxx_standard", static_cast<long>(__cplusplus)}};
  return j;
}

const std::vector<SuiteInfo>& experiment_suites() {
  static const std::vector<SuiteInfo> suites = {
      {"E1", "exact identities", {"seed", "workers", "n", "N", "samples"}},
      {"E2", "counting oracle equivalence", {"seed", "workers", "n", "N", "m_max", "C2", "bulk", "max_box"}},
      {"E3", "Minkowski and compound minima", {"seed", "workers", "n", "samples"}},
      {"E4", "spectrum table exhaustiveness", {"seed", "workers", "n", "N", "samples", "R2_factor", "word_length"}},
      {"E5", "Fricke reduction dichotomy", {"seed", "workers", "n", "N", "samples", "word_length"}},
      {"E6",
       "counting bound shape and rigidity",
       {"seed", "workers", "n", "N", "exponent", "rigidity_exponent", "C2", "bulk", "ratio_constant",
        "monotone_tolerance"}},
      {"E7",
       "parabolic exclusion and amplifier sums",
       {"seed", "workers", "N", "primes", "bulk", "nilpotent_budget", "amplifier_L", "amplifier_nu"}},
      {"E8", "cusps and Hecke cosets", {"seed", "workers", "n", "N", "samples", "moves", "hecke_n", "hecke_p", "hecke_N"}},
      {"E9", "search certificates", {"seed", "workers", "n", "N", "bound", "contrast_bound"}},
  };
  return suites;
}

const SuiteInfo& suite_info(const std::string& id) {
  for (const auto& s : experiment_suites())
    if (s.id == id) return s;
  throw ConfigError("unknown experiment id '" + id + "'");
}

void validate_config(const ExperimentConfig& config) {
  const SuiteInfo& info = suite_info(config.id());
  for (const auto& [key, value] : config.values())
    if (std::find(info.keys.begin(), info.keys.end(), key) == info.keys.end())
      throw ConfigError("config key '" + key + "' is not used by " + info.id);
  suites::validate(config);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentReport r = suites::run(config);
  r.id = config.id();
  r.title = suite_info(config.id()).title;
  return r;
}

std::vector<std::string> write_report(const ExperimentReport& report, const ExperimentConfig& config,
                                      const std::string& prefix) {
  std::vector<std::string> paths;
  for (const auto& [name, t] : report.tables) {
    std::string path = prefix + "_" + name + ".csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << t.csv();
    paths.push_back(path);
  }
  std::string path = prefix + ".json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report.to_json(config).dump(2) << '\n';
  paths.push_back(path);
  return paths;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace latfricke
