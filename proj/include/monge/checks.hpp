#pragma once

// Registry of verification checks and the report format shared by the CLI
// and the acceptance runner.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monge/expr.hpp"
#include "monge/zero_test.hpp"

namespace monge::checks {

enum class Status { Pass, Fail, SkippedDomain };
std::string to_string(Status s);

struct Outcome {
  bool pass = false;
  double residual = 0;
  int samples = 0;
  std::string message;
};

struct CheckDef {
  std::string id;
  std::string suite;
  int criterion = 0;  // acceptance criterion number, 0 for supplementary checks
  std::string description;
  std::map<std::string, std::string> inputs;
  std::function<Outcome(const sym::ZeroTestConfig&)> run;
};

struct CheckReport {
  std::string id, suite, description;
  int criterion = 0;
  std::map<std::string, std::string> inputs;
  Status status = Status::Fail;
  double residual = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0;
  std::string message;
};

struct RunOptions {
  std::string suite = "all";
  int samples = 32;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::optional<sym::Rational> m;  // replaces the m samples of parametric checks
  unsigned threads = 0;            // 0: hardware concurrency
};

class SelectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();  // without "all"

// Throws SelectorError for unknown suites and catalog::ModelError for an
// excluded m.
std::vector<CheckDef> registry(const RunOptions& opts);

// Per-check seed: FNV-1a of the id mixed with the run seed.
std::uint64_t check_seed(const std::string& id, std::uint64_t seed);

// Runs the selected checks on a worker pool; the result is sorted by id.
std::vector<CheckReport> run(const RunOptions& opts);
std::vector<CheckReport> run(const std::vector<CheckDef>& defs, const RunOptions& opts);

nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const std::vector<CheckReport>& rs);

}  // namespace monge::checks
