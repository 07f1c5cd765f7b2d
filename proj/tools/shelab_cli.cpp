// shelab: command-line runner.
//
//   shelab <command> [--key value ...]       run one command from flags
//   shelab run <config.ini | manifest.json>  run a config file or re-run a manifest
//   shelab validate <config.ini>             print the normalized config or every error
//
// Global options: --workers N, --output-dir DIR.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shelab/config.hpp"
#include "shelab/io.hpp"
#include "shelab/runner.hpp"

namespace {

using shelab::config::ExperimentConfig;
namespace runner = shelab::runner;

int report_validation(const shelab::config::ValidationError& e, const std::string& source) {
  std::cerr << source << ": " << e.diagnostics().size() << " error(s)\n";
  for (const auto& d : e.diagnostics()) std::cerr << "  " << d.str() << "\n";
  return runner::ExitCode::validation_failed;
}

int execute(const ExperimentConfig& cfg, const runner::RunOptions& opt) {
  try {
    const auto r = runner::run(cfg, opt);
    for (const auto& line : r.summary) std::cout << line << "\n";
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "wrote " << r.files.size() << " file(s) and manifest.json to " << r.output_dir.string() << "\n";
    return r.exit_code;
  } catch (const shelab::config::ValidationError& e) {
    return report_validation(e, cfg.command);
  } catch (const shelab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return runner::ExitCode::validation_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return runner::ExitCode::runtime_failed;
  }
}

bool is_manifest(const std::filesystem::path& p) { return p.extension() == ".json"; }

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic heat equation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SHELAB_VERSION));

  runner::RunOptions opt;
  opt.workers = shelab::parallel::default_workers();
  std::string output_dir;
  app.add_option("--workers", opt.workers, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "output directory");

  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "run a config file or re-run a manifest.json");
  run_cmd->add_option("path", run_path, "config file or manifest.json")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "validate a config file and print its normalized form");
  validate_cmd->add_option("path", validate_path, "config file")->required();

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, CLI::App*> command_apps;
  for (const auto& spec : shelab::config::commands()) {
    auto* sub = app.add_subcommand(spec.name, spec.summary);
    command_apps[spec.name] = sub;
    for (const auto& key : spec.keys) {
      std::string desc = key.help;
      if (key.default_value && !key.default_value->empty()) desc += " [default " + *key.default_value + "]";
      sub->add_option("--" + key.name, flag_values[spec.name][key.name], desc);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(runner::ExitCode::validation_failed);
  }
  opt.output_dir = output_dir;
  opt.invocation = join_args(argc, argv);

  try {
    if (*validate_cmd) {
      const auto cfg = shelab::config::validate_text(shelab::io::read_file(validate_path));
      std::cout << cfg.canonical_text();
      for (const auto& k : cfg.defaulted) std::cout << "# defaulted: " << k << " = " << cfg.text(k) << "\n";
      return runner::ExitCode::ok;
    }
    if (*run_cmd) {
      const std::filesystem::path p(run_path);
      const auto cfg = is_manifest(p) ? runner::config_from_manifest(p)
                                      : shelab::config::validate_text(shelab::io::read_file(p));
      return execute(cfg, opt);
    }
    for (const auto& [name, sub] : command_apps) {
      if (!*sub) continue;
      std::vector<shelab::config::RawEntry> entries;
      for (const auto& [key, value] : flag_values[name])
        if (sub->count("--" + key) > 0) entries.push_back({key, value, 0});
      const auto cfg = shelab::config::validate(name, entries, shelab::config::kSchemaVersion, false);
      return execute(cfg, opt);
    }
  } catch (const shelab::config::ValidationError& e) {
    return report_validation(e, run_path.empty() ? (validate_path.empty() ? "arguments" : validate_path) : run_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return runner::ExitCode::runtime_failed;
  }
  return runner::ExitCode::validation_failed;
}
