#pragma once

#include "kcayley/numkit.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kc::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { Ok = 0, SuiteFailure = 1, InvalidInput = 2 };

struct RunConfig {
  std::string command;  // invariant | boundary | product | verify
  std::string suite;    // verify only
  std::string model = "ssh";
  std::map<std::string, double> params;  // t1, t2, mu, t, delta
  int L = 40;
  int N = 32;
  int nk = 128;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;

  Tolerance tolerance() const;
};

// Keys accepted in config files and as flags (without the leading dashes).
const std::vector<std::string>& config_keys();

// Applies key=value lines ('#' starts a comment); unknown keys and malformed values throw a Domain error.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Precedence: explicit flags, then the config file, then the KCAYLEY_TOL value, then defaults.
RunConfig resolve_config(const std::string& command, const std::string& suite,
                         const std::map<std::string, std::string>& flags,
                         const std::optional<std::string>& config_path, const char* env_tol);

struct Report {
  Json inputs = Json::object();
  Json invariants = Json::object();
  Json residuals = Json::object();
  std::string status = "ok";  // ok | fail | error
  std::vector<std::string> failures;
  std::optional<std::string> error;
  std::optional<std::string> error_kind;
  std::vector<std::string> table_header;  // CSV plot/sweep data
  std::vector<std::vector<double>> table;
  int exit_code = ExitCode::Ok;
};

const std::vector<std::string>& verify_suites();

Report cmd_invariant(const RunConfig& cfg);
Report cmd_boundary(const RunConfig& cfg);
Report cmd_product(const RunConfig& cfg);
Report cmd_verify(const RunConfig& cfg);
// Dispatches on cfg.command; library errors become an error report with exit code 2.
Report run(const RunConfig& cfg);

Json to_json(const Report& r);
std::string render_json(const Report& r);
std::string render_csv(const Report& r);
std::string render(const Report& r, const std::string& format);

}  // namespace kc::cli
