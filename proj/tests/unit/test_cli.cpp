#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("jetmech_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(JETMECH_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return std::string(JETMECH_CONFIGS) + "/" + name + ".cfg"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("oscillator trajectory csv") {
  const fs::path out = scratch("trajectory");
  CHECK(run("simulate-hamilton --config " + config("oscillator") + " --out " + out.string(), out / "log") == 0);
  const auto rows = lines(out / "trajectory.csv");
  REQUIRE(rows.size() == 6284 + 1);
  CHECK(rows.front() == "t,y1,p1");
  CHECK(rows[1] == "0,1,0");
  const std::string text = slurp(out / "trajectory.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  // 17 significant digits: the last time stamp reads back within rounding of 2π
  const std::string last = rows.back();
  CHECK(std::abs(std::stod(last.substr(0, last.find(','))) - 6.283185307179586) <= 2e-15);
}

TEST_CASE("row count follows the step rule") {
  for (const auto& [dt, t_end] : std::vector<std::pair<std::string, double>>{
           {"0.01", 1.0}, {"0.003", 1.0}, {"0.25", 3.0}, {"0.1", 0.95}}) {
    const fs::path out = scratch("rows");
    const std::string args = "simulate-lagrange --config " + config("oscillator") + " --dt " + dt +
                             " --t0 0 --t-end " + std::to_string(t_end) + " --out " + out.string();
    REQUIRE(run(args, out / "log") == 0);
    const auto expected = static_cast<std::size_t>(std::floor(t_end / std::stod(dt) + 1e-9)) + 1;
    CHECK_MESSAGE(lines(out / "trajectory.csv").size() == expected + 1, args);
  }
}

TEST_CASE("exit codes on the golden configs") {
  const std::vector<std::tuple<std::string, std::string, int>> cases{
      {"simulate-hamilton", "oscillator", 0},
      {"simulate-lagrange", "magnetic", 0},
      {"legendre", "oscillator", 0},
      {"bracket", "bracket", 0},
      {"bracket", "magnetic", 0},
      {"check-canonical", "canonical", 0},
      {"check-canonical", "noncanonical", 1},
      {"check-conservation", "oscillator", 0},
      {"check-conservation", "free_particle", 0},
      {"check-association", "degenerate", 0},
      {"check-constraints", "degenerate", 0},
      {"check-constraints", "magnetic", 0},
      {"rel-transform", "boost", 0},
      {"simulate-lagrange", "degenerate", 1},
      {"simulate-hamilton", "canonical", 2},
      {"bracket", "oscillator", 2},
      {"rel-transform", "oscillator", 2},
  };
  for (const auto& [command, name, code] : cases) {
    const fs::path out = scratch("codes");
    CHECK_MESSAGE(run(command + " --config " + config(name) + " --out " + out.string(), out / "log") == code,
                  (command + " " + name + ": " + slurp(out / "log")));
  }
  const fs::path out = scratch("flags");
  CHECK(run("self-test --out " + out.string(), out / "log") == 0);
  CHECK(run("simulate-hamilton --out " + out.string(), out / "log") == 2);
  CHECK(run("frobnicate --config " + config("oscillator"), out / "log") == 2);
  CHECK(run("simulate-hamilton --config /nonexistent.cfg", out / "log") == 2);
  CHECK(run("simulate-hamilton --config " + config("oscillator") + " --dt -1 --out " + out.string(), out / "log") == 2);
  CHECK(run("simulate-hamilton --config " + config("oscillator") + " --bogus", out / "log") == 2);
  CHECK(run("simulate-hamilton --config " + config("oscillator") + " --config " + config("free_particle"),
            out / "log") == 2);
}

TEST_CASE("a tight tolerance turns a pass into a failure") {
  const fs::path out = scratch("tolerance");
  CHECK(run("check-constraints --config " + config("degenerate") + " --out " + out.string(), out / "log") == 0);
  CHECK(run("check-constraints --config " + config("degenerate") + " --tolerance 1e-20 --out " + out.string(),
            out / "log") == 1);
}

TEST_CASE("reports are json lines") {
  const fs::path out = scratch("report");
  REQUIRE(run("check-canonical --config " + config("noncanonical") + " --out " + out.string(), out / "log") == 1);
  const auto rows = lines(out / "report.jsonl");
  REQUIRE(rows.size() == 3);
  bool mixed_failed = false;
  for (const auto& row : rows) {
    const auto j = nlohmann::json::parse(row);
    CHECK(j.size() == 4);
    CHECK(j.contains("check"));
    CHECK(j.contains("max_residual"));
    CHECK(j.contains("tolerance"));
    CHECK(j.contains("pass"));
    if (j["check"] == "canonical[flip].mixed") {
      mixed_failed = !j["pass"].get<bool>();
      CHECK(j["max_residual"].get<double>() == 2.0);
    }
  }
  CHECK(mixed_failed);
}

TEST_CASE("identical config and seed give identical artifacts") {
  for (const auto& [command, name] : std::vector<std::pair<std::string, std::string>>{
           {"simulate-hamilton", "oscillator"},
           {"check-conservation", "oscillator"},
           {"bracket", "bracket"},
           {"check-constraints", "degenerate"},
           {"rel-transform", "boost"}}) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run(command + " --config " + config(name) + " --out " + a.string(), a / "log");
    run(command + " --config " + config(name) + " --out " + b.string(), b / "log");
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto file = entry.path().filename();
      if (file == "log") continue;
      CHECK_MESSAGE(slurp(a / file) == slurp(b / file), (command + " " + file.string()));
    }
  }
  // another seed moves the sample points
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  run("bracket --config " + config("bracket") + " --out " + a.string(), a / "log");
  run("bracket --config " + config("bracket") + " --seed 10 --out " + b.string(), b / "log");
  CHECK(slurp(a / "bracket.csv") != slurp(b / "bracket.csv"));
}

TEST_CASE("sweep runs every config into its own directory") {
  const fs::path out = scratch("sweep");
  const int code = run("check-conservation --sweep --config " + config("oscillator") + " --config " +
                           config("free_particle") + " --out " + out.string(),
                       out / "log");
  CHECK(code == 0);
  CHECK(fs::exists(out / "oscillator" / "current.csv"));
  CHECK(fs::exists(out / "free_particle" / "current.csv"));
  const fs::path single = scratch("single");
  run("check-conservation --config " + config("oscillator") + " --out " + single.string(), single / "log");
  CHECK(slurp(out / "oscillator" / "current.csv") == slurp(single / "current.csv"));
}
