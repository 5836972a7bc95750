#include "kcayley/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace kc::cli;

int main(int argc, char** argv) {
  CLI::App app{"kcayley: Cayley transforms, van Daele K-theory and Kasparov cycles on finite models"};
  app.set_version_flag("--version", std::string(KCAYLEY_VERSION));
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config;
    std::string suite;
  };
  std::map<std::string, Sub> subs;
  const std::map<std::string, std::string> help = {
      {"invariant", "bulk invariant of a lattice model, cross-checked against its edge"},
      {"boundary", "edge spectrum, signed edge counts and boundary-map leakage of a half-space model"},
      {"product", "circle index pairing and positivity margin of the product representative"},
      {"verify", "run a named verification suite"}};
  for (const auto& [name, text] : help) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, text);
    for (const auto& key : config_keys()) s.app->add_option("--" + key, s.values[key], key);
    s.app->add_option("--config", s.config, "key=value configuration file; flags take precedence");
  }
  std::string suite_help = "suite name:";
  for (const auto& n : verify_suites()) suite_help += " " + n;
  subs["verify"].app->add_option("suite", subs["verify"].suite, suite_help)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ExitCode::InvalidInput;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    std::map<std::string, std::string> given;
    for (const auto& key : config_keys())
      if (s.app->count("--" + key)) given[key] = s.values[key];
    std::optional<std::string> config;
    if (!s.config.empty()) config = s.config;

    RunConfig cfg;
    Report r;
    try {
      cfg = resolve_config(name, s.suite, given, config, std::getenv("KCAYLEY_TOL"));
      r = run(cfg);
    } catch (const kc::Error& e) {
      cfg.command = name;
      r.status = "error";
      r.error = e.what();
      r.error_kind = kc::to_string(e.kind());
      r.exit_code = ExitCode::InvalidInput;
    }
    std::string text = render(r, cfg.format);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) {
        std::cerr << "cannot write " << cfg.out << "\n";
        return ExitCode::InvalidInput;
      }
      f << text;
    }
    if (r.error) std::cerr << "error: " << *r.error << "\n";
    for (const auto& f : r.failures) std::cerr << "failed: " << f << "\n";
    return r.exit_code;
  }
  return ExitCode::InvalidInput;
}
