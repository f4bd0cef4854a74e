#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latfricke/rational.hpp"

namespace latfricke {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` text.  Lists are comma separated; '#' starts a comment.
// Keys are checked against the suite's key set when the config is bound to an
// experiment id.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  ExperimentConfig(std::string id, std::map<std::string, std::string> values);

  static ExperimentConfig parse(const std::string& id, std::istream& in);
  static ExperimentConfig parse_string(const std::string& id, const std::string& text);
  static ExperimentConfig from_file(const std::string& id, const std::string& path);

  const std::string& id() const { return id_; }
  const std::map<std::string, std::string>& values() const { return values_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  Rational get_rational(const std::string& key, const Rational& fallback) const;
  std::vector<long> get_longs(const std::string& key, const std::vector<long>& fallback) const;
  std::vector<Rational> get_rationals(const std::string& key, const std::vector<Rational>& fallback) const;

 private:
  std::string id_;
  std::map<std::string, std::string> values_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
};

struct InvariantCheck {
  std::string name;
  bool hard = true;
  bool pass = true;
  std::size_t violations = 0;
  std::size_t instances = 0;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  std::string title;
  std::map<std::string, Table> tables;  // written as <prefix>_<name>.csv
  std::vector<InvariantCheck> checks;
  nlohmann::json summary = nlohmann::json::object();
  bool incomplete = false;  // some instance ran out of budget
  std::vector<std::string> refusals;

  const InvariantCheck* check(const std::string& name) const;
  bool hard_pass() const;
  // 0 all hard invariants hold, 1 a hard invariant failed, 2 incomplete.
  int exit_code() const;
  nlohmann::json to_json(const ExperimentConfig& config) const;
};

struct SuiteInfo {
  std::string id;
  std::string title;
  std::vector<std::string> keys;
};
const std::vector<SuiteInfo>& experiment_suites();
const SuiteInfo& suite_info(const std::string& id);

// Rejects unknown ids, unknown keys and malformed values before any work.
void validate_config(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);
// Writes <prefix>_<table>.csv and <prefix>.json; returns the written paths.
std::vector<std::string> write_report(const ExperimentReport& report, const ExperimentConfig& config,
                                      const std::string& prefix);

// Runs f(0..count-1) on `workers` threads and returns results in index order.
template <class T>
std::vector<T> sharded_map(std::size_t count, std::size_t workers, const std::function<T(std::size_t)>& f);

std::string format_double(double x);

}  // namespace latfricke

#include "latfricke/detail/sharded_map.hpp"
