#include "jetmech/config.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "jetmech/bundle.hpp"
#include "jetmech/hamiltonian.hpp"
#include "jetmech/relativistic.hpp"
#include "jetmech/systems.hpp"

namespace jetmech {

ConfigError::ConfigError(int line, const std::string& what)
    : InputError(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

struct Value {
  enum class Kind { kNumber, kString, kList } kind = Kind::kNumber;
  std::string text;  // number token or string contents
  std::vector<Value> items;
  int line = 0;
};

class LineReader {
 public:
  LineReader(std::string_view s, int line) : s_(s), line_(line) {}

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  Value value() {
    skip_space();
    if (pos_ >= s_.size()) fail("expected a value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '[') return list();
    return number();
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(line_, what); }

 private:
  Value string() {
    ++pos_;
    Value v{Value::Kind::kString, {}, {}, line_};
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value list() {
    ++pos_;
    Value v{Value::Kind::kList, {}, {}, line_};
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    for (;;) {
      Value item = value();
      if (item.kind == Value::Kind::kList) fail("nested lists are not supported");
      v.items.push_back(std::move(item));
      skip_space();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      if (s_[pos_] != ',') fail("expected ',' or ']' in list");
      ++pos_;
    }
  }

  Value number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    Value v{Value::Kind::kNumber, std::string(s_.substr(start, pos_ - start)), {}, line_};
    double x = 0.0;
    const auto* first = v.text.data();
    const auto* last = first + v.text.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (v.text.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
      fail(fmt::format("expected a number, string or list, found '{}'", v.text));
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double as_number(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::kNumber) throw ConfigError(v.line, fmt::format("{} must be a number", field));
  return std::stod(v.text);
}

template <class Int>
Int as_integer(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::kNumber) {
    throw ConfigError(v.line, fmt::format("{} must be an integer", field));
  }
  Int x{};
  const auto* first = v.text.data();
  const auto* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(v.line, fmt::format("{} must be an integer, found '{}'", field, v.text));
  }
  return x;
}

std::string as_string(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::kString) {
    throw ConfigError(v.line, fmt::format("{} must be a quoted string", field));
  }
  return v.text;
}

std::vector<std::string> as_strings(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::kList) throw ConfigError(v.line, fmt::format("{} must be a list", field));
  std::vector<std::string> out;
  for (const auto& item : v.items) out.push_back(as_string(item, field + " entry"));
  return out;
}

std::vector<double> as_numbers(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::kList) throw ConfigError(v.line, fmt::format("{} must be a list", field));
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(as_number(item, field + " entry"));
  return out;
}

using Section = std::map<std::string, Value>;

struct RawConfig {
  Section top;
  std::vector<std::pair<std::string, Section>> sections;  // header text, keys
  std::vector<int> section_lines;
};

RawConfig read_raw(std::string_view text) {
  RawConfig raw;
  Section* current = &raw.top;
  std::set<std::string> headers;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line_no, "section header must end with ']'");
      std::string header = trim(std::string_view(body).substr(1, body.size() - 2));
      if (header.empty()) throw ConfigError(line_no, "empty section header");
      if (!headers.insert(header).second) {
        throw ConfigError(line_no, fmt::format("duplicate section [{}]", header));
      }
      raw.sections.emplace_back(header, Section{});
      raw.section_lines.push_back(line_no);
      current = &raw.sections.back().second;
      continue;
    }
    std::size_t k = 0;
    while (k < body.size() && is_key_char(body[k])) ++k;
    if (k == 0) throw ConfigError(line_no, "expected a key");
    const std::string key = body.substr(0, k);
    std::string_view rest = std::string_view(body).substr(k);
    const auto eq = rest.find_first_not_of(" \t");
    if (eq == std::string_view::npos || rest[eq] != '=') {
      throw ConfigError(line_no, fmt::format("expected '=' after '{}'", key));
    }
    LineReader value_reader(rest.substr(eq + 1), line_no);
    Value v = value_reader.value();
    if (!value_reader.at_end()) throw ConfigError(line_no, "unexpected text after value");
    if (!current->emplace(key, std::move(v)).second) {
      throw ConfigError(line_no, fmt::format("duplicate key '{}'", key));
    }
    if (end == text.size()) break;
  }
  return raw;
}

void reject_unknown(const Section& s, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : s) {
    if (!known.count(key)) {
      throw ConfigError(value.line, fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

const Value* find(const Section& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
  const RawConfig raw = read_raw(text);
  SystemConfig c;

  reject_unknown(raw.top,
                 {"n", "seed", "samples", "box", "lagrangian", "hamiltonian", "frame"},
                 "top level");
  if (auto* v = find(raw.top, "n")) c.n = as_integer<int>(*v, "n");
  if (auto* v = find(raw.top, "seed")) c.seed = as_integer<std::uint64_t>(*v, "seed");
  if (auto* v = find(raw.top, "samples")) c.samples = as_integer<int>(*v, "samples");
  if (auto* v = find(raw.top, "box")) {
    const auto box = as_numbers(*v, "box");
    if (box.size() != 2) throw ConfigError(v->line, "box must be [lo, hi]");
    c.box_lo = box[0];
    c.box_hi = box[1];
  }
  if (auto* v = find(raw.top, "lagrangian")) c.lagrangian = as_string(*v, "lagrangian");
  if (auto* v = find(raw.top, "hamiltonian")) c.hamiltonian = as_string(*v, "hamiltonian");
  if (auto* v = find(raw.top, "frame")) c.frame = as_strings(*v, "frame");

  for (std::size_t i = 0; i < raw.sections.size(); ++i) {
    const auto& [header, s] = raw.sections[i];
    const int line = raw.section_lines[i];
    if (header == "integrator") {
      reject_unknown(s, {"dt", "t0", "t_end"}, "[integrator]");
      if (auto* v = find(s, "dt")) c.integrator.dt = as_number(*v, "integrator.dt");
      if (auto* v = find(s, "t0")) c.integrator.t0 = as_number(*v, "integrator.t0");
      if (auto* v = find(s, "t_end")) c.integrator.t_end = as_number(*v, "integrator.t_end");
    } else if (header == "initial") {
      reject_unknown(s, {"state"}, "[initial]");
      if (auto* v = find(s, "state")) c.initial = as_numbers(*v, "initial.state");
    } else if (header == "symmetry") {
      reject_unknown(s, {"u_t", "u"}, "[symmetry]");
      if (auto* v = find(s, "u_t")) c.symmetry.u_t = as_integer<int>(*v, "symmetry.u_t");
      if (auto* v = find(s, "u")) c.symmetry.u = as_strings(*v, "symmetry.u");
    } else if (header == "bracket") {
      reject_unknown(s, {"f", "g", "kind"}, "[bracket]");
      BracketConfig b;
      const Value* f = find(s, "f");
      const Value* g = find(s, "g");
      if (f == nullptr || g == nullptr) throw ConfigError(line, "[bracket] needs both f and g");
      b.f = as_string(*f, "bracket.f");
      b.g = as_string(*g, "bracket.g");
      if (auto* v = find(s, "kind")) b.kind = as_string(*v, "bracket.kind");
      c.bracket = b;
    } else if (header.rfind("transform", 0) == 0 &&
               (header.size() == 9 || std::isspace(static_cast<unsigned char>(header[9])))) {
      reject_unknown(s, {"y", "p", "z"}, fmt::format("[{}]", header));
      TransformConfig t;
      t.name = trim(std::string_view(header).substr(9));
      if (t.name.empty()) throw ConfigError(line, "transform sections need a name: [transform NAME]");
      if (auto* v = find(s, "y")) t.y = as_strings(*v, "transform.y");
      if (auto* v = find(s, "p")) t.p = as_strings(*v, "transform.p");
      if (auto* v = find(s, "z")) t.z = as_strings(*v, "transform.z");
      c.transforms.push_back(std::move(t));
    } else if (header == "metric") {
      for (std::size_t r = 0; r < s.size(); ++r) {
        const std::string key = fmt::format("row{}", r);
        const Value* v = find(s, key);
        if (v == nullptr) {
          throw ConfigError(line, fmt::format("[metric] rows must be row0..row{}", s.size() - 1));
        }
        c.metric.push_back(as_strings(*v, "metric." + key));
      }
    } else if (header == "jet") {
      reject_unknown(s, {"z0", "z", "v"}, "[jet]");
      RelJetConfig j;
      if (auto* v = find(s, "z0")) j.z0 = as_number(*v, "jet.z0");
      if (auto* v = find(s, "z")) j.z = as_numbers(*v, "jet.z");
      if (auto* v = find(s, "v")) j.v = as_numbers(*v, "jet.v");
      c.jet = j;
    } else {
      throw ConfigError(line, fmt::format("unknown section [{}]", header));
    }
  }
  validate_config(c);
  return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

template <class Fn>
void field(const std::string& name, Fn&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", name, e.what()));
  }
}

}  // namespace

void validate_config(const SystemConfig& c) {
  if (c.n < 1) throw InputError(fmt::format("n: must be at least 1, got {}", c.n));
  if (c.samples < 1) throw InputError(fmt::format("samples: must be positive, got {}", c.samples));
  if (!(c.box_lo < c.box_hi)) throw InputError("box: lo must be below hi");
  const auto& in = c.integrator;
  if (!(in.dt > 0.0)) throw InputError(fmt::format("integrator.dt: must be positive, got {}", in.dt));
  if (!(in.t_end > in.t0)) throw InputError("integrator.t_end: must exceed integrator.t0");

  if (c.lagrangian) field("lagrangian", [&] { Lagrangian::parse(c.n, *c.lagrangian); });
  if (c.hamiltonian) field("hamiltonian", [&] { HamiltonianForm::parse(c.n, *c.hamiltonian); });
  if (!c.frame.empty()) {
    if (static_cast<int>(c.frame.size()) != c.n) {
      throw InputError(fmt::format("frame: has {} components, n = {}", c.frame.size(), c.n));
    }
    field("frame", [&] { ReferenceFrame::parse(c.frame); });
  }
  if (!c.initial.empty() && static_cast<int>(c.initial.size()) != 2 * c.n) {
    throw InputError(fmt::format("initial.state: has {} entries, expected 2n = {}",
                                 c.initial.size(), 2 * c.n));
  }
  if (c.symmetry.u_t != 0 && c.symmetry.u_t != 1) {
    throw InputError("symmetry.u_t: must be 0 or 1");
  }
  if (!c.symmetry.u.empty()) {
    if (static_cast<int>(c.symmetry.u.size()) != c.n) {
      throw InputError(fmt::format("symmetry.u: has {} components, n = {}", c.symmetry.u.size(), c.n));
    }
    field("symmetry.u", [&] { EventField::parse(c.symmetry.u); });
  }
  if (c.bracket) {
    const auto& k = c.bracket->kind;
    if (k != "vertical" && k != "homogeneous" && k != "lagrangian") {
      throw InputError(fmt::format("bracket.kind: unknown kind '{}'", k));
    }
    field("bracket.f", [&] { Expression::parse(c.bracket->f); });
    field("bracket.g", [&] { Expression::parse(c.bracket->g); });
  }
  for (const auto& t : c.transforms) {
    const std::string where = "transform " + t.name;
    if (t.is_chart()) {
      if (!t.y.empty() || !t.p.empty()) {
        throw InputError(where + ": give either z or y/p, not both");
      }
      field(where, [&] { ChartTransform::parse(t.z); });
    } else {
      if (static_cast<int>(t.y.size()) != c.n || static_cast<int>(t.p.size()) != c.n) {
        throw InputError(fmt::format("{}: y and p need n = {} entries each", where, c.n));
      }
      field(where, [&] { CanonicalTransform::parse(t.y, t.p); });
    }
  }
  if (!c.metric.empty()) field("metric", [&] { Metric::parse(c.metric); });
  if (c.jet && c.jet->z.size() != c.jet->v.size()) {
    throw InputError("jet: z and v need the same number of entries");
  }
}

}  // namespace jetmech
