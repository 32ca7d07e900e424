// jetmech: batch front end. See README.md for the commands and config format.

#include <fmt/format.h>

#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jetmech/cli.hpp"
#include "jetmech/config.hpp"
#include "jetmech/error.hpp"

namespace {

struct Overrides {
  std::optional<double> dt;
  std::optional<double> t0;
  std::optional<double> t_end;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
};

jetmech::SystemConfig prepare(const std::string& path, const Overrides& ov) {
  jetmech::SystemConfig c = path.empty() ? jetmech::SystemConfig{} : jetmech::load_config(path);
  if (ov.dt) c.integrator.dt = *ov.dt;
  if (ov.t0) c.integrator.t0 = *ov.t0;
  if (ov.t_end) c.integrator.t_end = *ov.t_end;
  if (ov.seed) c.seed = *ov.seed;
  if (ov.samples) c.samples = *ov.samples;
  jetmech::validate_config(c);
  return c;
}

int run_one(const std::string& command, const std::string& path, const Overrides& ov,
            const jetmech::RunOptions& options, std::ostream& log) {
  jetmech::SystemConfig config;
  try {
    config = prepare(path, ov);
  } catch (const jetmech::InputError& e) {
    log << (path.empty() ? std::string() : path + ": ") << "input error: " << e.what() << '\n';
    return jetmech::kExitInput;
  }
  return jetmech::run_command(command, config, options, log);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent mechanics on jet and phase bundles"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::vector<std::string> configs;
  std::string out = ".";
  Overrides ov;
  std::optional<double> tolerance;
  bool sweep = false;

  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(jetmech::command_names()));
  app.add_option("--config", configs, "System config file (repeatable with --sweep)");
  app.add_option("--out", out, "Directory for CSV and JSON-lines artifacts");
  app.add_option("--dt", ov.dt, "Integrator step");
  app.add_option("--t0", ov.t0, "Start time");
  app.add_option("--t-end", ov.t_end, "End time");
  app.add_option("--seed", ov.seed, "Seed for sampled points");
  app.add_option("--samples", ov.samples, "Number of sampled points");
  app.add_option("--tolerance", tolerance, "Override the tolerance of every check");
  app.add_flag("--sweep", sweep, "Run each --config concurrently into OUT/<config name>/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jetmech::kExitInput;
  }

  if (!sweep && configs.size() > 1) {
    std::cerr << "input error: more than one --config needs --sweep\n";
    return jetmech::kExitInput;
  }
  if (configs.empty()) {
    if (command != "self-test") {
      std::cerr << "input error: --config is required for " << command << '\n';
      return jetmech::kExitInput;
    }
    configs.emplace_back();
  }

  if (!sweep) {
    jetmech::RunOptions options{out, tolerance};
    return run_one(command, configs.front(), ov, options, std::cout);
  }

  std::vector<std::future<int>> runs;
  std::vector<std::ostringstream> logs(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto stem = std::filesystem::path(configs[i]).stem().string();
    jetmech::RunOptions options{std::filesystem::path(out) / stem, tolerance};
    runs.push_back(std::async(std::launch::async, [&, i, options] {
      return run_one(command, configs[i], ov, options, logs[i]);
    }));
  }
  int worst = jetmech::kExitPass;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int code = runs[i].get();
    std::cout << fmt::format("== {} (exit {})\n", configs[i], code) << logs[i].str();
    worst = std::max(worst, code);
  }
  return worst;
}
