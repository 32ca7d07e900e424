#pragma once

// System configuration files.
//
//     # comment
//     n = 1
//     lagrangian = "v1^2/2 - y1^2/2"
//     frame = ["0"]
//
//     [integrator]
//     dt = 1e-3
//     t_end = 6.283185307179586
//
//     [transform swap]
//     y = ["p1"]
//     p = ["y1"]
//
// Top-level keys: n, seed, samples, box, lagrangian, hamiltonian, frame.
// Sections: [integrator] dt t0 t_end; [initial] state; [symmetry] u_t u;
// [bracket] f g kind; [transform NAME] y p | z; [metric] row0 row1 ...;
// [jet] z0 z v.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetmech/error.hpp"

namespace jetmech {

/// Syntax error in a config file; the message starts with "line N:".
class ConfigError : public InputError {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct IntegratorConfig {
  double dt = 1e-3;
  double t0 = 0.0;
  double t_end = 1.0;
};

struct TransformConfig {
  std::string name;
  std::vector<std::string> y;  // canonical transform: y', p'
  std::vector<std::string> p;
  std::vector<std::string> z;  // chart transform: z~0..z~m

  bool is_chart() const { return !z.empty(); }
};

struct SymmetryConfig {
  int u_t = 1;
  std::vector<std::string> u;  // empty: zero fibre part
};

struct BracketConfig {
  std::string f;
  std::string g;
  std::string kind = "vertical";  // vertical | homogeneous | lagrangian
};

/// A point of J1_1 Z for the relativistic commands.
struct RelJetConfig {
  double z0 = 0.0;
  std::vector<double> z;
  std::vector<double> v;
};

struct SystemConfig {
  int n = 1;
  std::uint64_t seed = 0;
  int samples = 100;
  double box_lo = -1.0;  // sample cube for random points
  double box_hi = 1.0;
  std::optional<std::string> lagrangian;
  std::optional<std::string> hamiltonian;
  std::vector<std::string> frame;
  IntegratorConfig integrator;
  std::vector<double> initial;
  SymmetryConfig symmetry;
  std::optional<BracketConfig> bracket;
  std::vector<TransformConfig> transforms;
  std::vector<std::vector<std::string>> metric;
  std::optional<RelJetConfig> jet;
};

/// Parses and validates config text. Syntax errors throw ConfigError; values
/// that parse but make no sense throw InputError naming the field.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

/// Structural checks: expressions parse and use the right variables, list
/// sizes match n, the integration window is sane.
void validate_config(const SystemConfig& c);

}  // namespace jetmech
