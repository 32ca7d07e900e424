#include "jetmech/expr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>

#include "jet.hpp"
#include "jetmech/error.hpp"

namespace jetmech {

ParseError::ParseError(std::size_t offset, std::string expected, const std::string& source)
    : InputError(fmt::format("parse error at offset {}: expected {} in \"{}\"", offset, expected,
                             source)),
      offset_(offset),
      expected_(std::move(expected)) {}

UnboundVariable::UnboundVariable(std::string name)
    : EvalError(fmt::format("unbound variable '{}'", name)), name_(std::move(name)) {}

DomainError::DomainError(std::string node, std::string reason)
    : EvalError(fmt::format("domain error in '{}': {}", node, reason)), node_(std::move(node)) {}

IntegrationError::IntegrationError(const std::string& what, double last_good_t)
    : Error(fmt::format("{} (last finite state at t={})", what, last_good_t)),
      last_good_t_(last_good_t) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::int64_t kMaxIntegerExponent = 1024;

struct FunctionName {
  std::string_view name;
  UnaryOp op;
};

constexpr FunctionName kFunctions[] = {
    {"sin", UnaryOp::kSin}, {"cos", UnaryOp::kCos}, {"tan", UnaryOp::kTan},
    {"exp", UnaryOp::kExp}, {"log", UnaryOp::kLog}, {"sqrt", UnaryOp::kSqrt},
};

std::string_view function_name(UnaryOp op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "-";
}

NodePtr make_constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kConstant;
  n->value = value;
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kVariable;
  n->name = std::move(name);
  return n;
}

NodePtr make_unary(UnaryOp op, NodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kUnary;
  n->unary_op = op;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::kBinary;
  n->binary_op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// ---------------------------------------------------------------------------
// Parser

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) fail("expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (!at_end()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(std::string expected) const { fail_at(pos_, std::move(expected)); }
  [[noreturn]] void fail_at(std::size_t pos, std::string expected) const {
    throw ParseError(pos, std::move(expected), std::string(src_));
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      NodePtr rhs = parse_term();
      lhs = make_binary(c == '+' ? BinaryOp::kAdd : BinaryOp::kSub, lhs, rhs);
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      NodePtr rhs = parse_unary();
      lhs = make_binary(c == '*' ? BinaryOp::kMul : BinaryOp::kDiv, lhs, rhs);
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return make_unary(UnaryOp::kNeg, parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    return make_binary(BinaryOp::kPow, base, parse_unary());
  }

  NodePtr parse_primary() {
    skip_ws();
    if (at_end()) fail("number, identifier or '('");
    const char c = peek();
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      skip_ws();
      if (peek() != ')') fail("')'");
      ++pos_;
      return inner;
    }
    fail("number, identifier or '('");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (is_digit(peek())) {
      ++pos_;
      digits = true;
    }
    if (peek() == '.') {
      ++pos_;
      while (is_digit(peek())) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) fail_at(start, "number");
    if (peek() == 'e' || peek() == 'E') {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        pos_ = p;
        while (is_digit(peek())) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) fail_at(start, "finite number");
    return make_constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (is_ident_char(peek())) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    const std::size_t after_name = pos_;
    skip_ws();
    const bool call = peek() == '(';
    for (const auto& f : kFunctions) {
      if (f.name == name) {
        if (!call) fail_at(pos_, fmt::format("'(' after function '{}'", name));
        ++pos_;
        NodePtr arg = parse_expr();
        skip_ws();
        if (peek() != ')') fail("')'");
        ++pos_;
        return make_unary(f.op, arg);
      }
    }
    if (call) fail_at(start, fmt::format("known function name, got '{}'", name));
    pos_ = after_name;
    return make_variable(std::move(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
    case ExprNode::Kind::kVariable:
      return 5;
    case ExprNode::Kind::kUnary:
      return n.unary_op == UnaryOp::kNeg ? 3 : 5;
    case ExprNode::Kind::kBinary:
      switch (n.binary_op) {
        case BinaryOp::kAdd:
        case BinaryOp::kSub:
          return 1;
        case BinaryOp::kMul:
        case BinaryOp::kDiv:
          return 2;
        case BinaryOp::kPow:
          return 4;
      }
  }
  return 5;
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
      if (std::signbit(n.value)) {
        out += fmt::format("(-{})", -n.value);
      } else {
        out += fmt::format("{}", n.value);
      }
      return;
    case ExprNode::Kind::kVariable:
      out += n.name;
      return;
    case ExprNode::Kind::kUnary:
      if (n.unary_op == UnaryOp::kNeg) {
        out += '-';
        print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
      } else {
        out += function_name(n.unary_op);
        out += '(';
        print(*n.lhs, out);
        out += ')';
      }
      return;
    case ExprNode::Kind::kBinary: {
      const int p = precedence(n);
      if (n.binary_op == BinaryOp::kPow) {
        print_wrapped(*n.lhs, precedence(*n.lhs) <= 4, out);
        out += '^';
        print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
        return;
      }
      print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
      switch (n.binary_op) {
        case BinaryOp::kAdd: out += " + "; break;
        case BinaryOp::kSub: out += " - "; break;
        case BinaryOp::kMul: out += "*"; break;
        case BinaryOp::kDiv: out += "/"; break;
        case BinaryOp::kPow: break;
      }
      print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
  }
}

std::string node_text(const ExprNode& n) {
  std::string s;
  print(n, s);
  return s;
}

void collect_vars(const ExprNode& n, std::set<std::string, std::less<>>& vars) {
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
      return;
    case ExprNode::Kind::kVariable:
      vars.insert(n.name);
      return;
    case ExprNode::Kind::kUnary:
      collect_vars(*n.lhs, vars);
      return;
    case ExprNode::Kind::kBinary:
      collect_vars(*n.lhs, vars);
      collect_vars(*n.rhs, vars);
      return;
  }
}

NodePtr substitute_node(const NodePtr& n,
                        const std::map<std::string, Expression, std::less<>>& repl) {
  switch (n->kind) {
    case ExprNode::Kind::kConstant:
      return n;
    case ExprNode::Kind::kVariable: {
      auto it = repl.find(n->name);
      if (it == repl.end()) return n;
      // Expression roots are immutable and shared.
      return std::shared_ptr<const ExprNode>(std::make_shared<ExprNode>(it->second.root()));
    }
    case ExprNode::Kind::kUnary:
      return make_unary(n->unary_op, substitute_node(n->lhs, repl));
    case ExprNode::Kind::kBinary:
      return make_binary(n->binary_op, substitute_node(n->lhs, repl),
                         substitute_node(n->rhs, repl));
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Compiled postfix program

namespace detail {

enum class OpCode {
  kConst, kVar, kNeg, kSin, kCos, kTan, kExp, kLog, kSqrt,
  kAdd, kSub, kMul, kDiv, kPow, kPowInt,
};

struct Instruction {
  OpCode code = OpCode::kConst;
  int slot = 0;
  double constant = 0.0;
  std::int64_t exponent = 0;
  const ExprNode* node = nullptr;
};

struct Program {
  std::vector<Instruction> code;
  std::size_t max_depth = 0;
};

namespace {

double fold_constant(const ExprNode& n);

void emit(const ExprNode& n, const std::vector<std::string>& vars, Program& prog,
          std::size_t depth) {
  prog.max_depth = std::max(prog.max_depth, depth + 1);
  Instruction ins;
  ins.node = &n;
  switch (n.kind) {
    case ExprNode::Kind::kConstant:
      ins.code = OpCode::kConst;
      ins.constant = n.value;
      break;
    case ExprNode::Kind::kVariable:
      ins.code = OpCode::kVar;
      ins.slot = static_cast<int>(std::lower_bound(vars.begin(), vars.end(), n.name) - vars.begin());
      break;
    case ExprNode::Kind::kUnary:
      emit(*n.lhs, vars, prog, depth);
      switch (n.unary_op) {
        case UnaryOp::kNeg: ins.code = OpCode::kNeg; break;
        case UnaryOp::kSin: ins.code = OpCode::kSin; break;
        case UnaryOp::kCos: ins.code = OpCode::kCos; break;
        case UnaryOp::kTan: ins.code = OpCode::kTan; break;
        case UnaryOp::kExp: ins.code = OpCode::kExp; break;
        case UnaryOp::kLog: ins.code = OpCode::kLog; break;
        case UnaryOp::kSqrt: ins.code = OpCode::kSqrt; break;
      }
      break;
    case ExprNode::Kind::kBinary: {
      if (n.binary_op == BinaryOp::kPow) {
        std::set<std::string, std::less<>> exponent_vars;
        collect_vars(*n.rhs, exponent_vars);
        if (exponent_vars.empty()) {
          double k = std::nan("");
          try {
            k = fold_constant(*n.rhs);
          } catch (const DomainError&) {
          }
          if (std::isfinite(k) && std::trunc(k) == k && std::abs(k) <= kMaxIntegerExponent) {
            emit(*n.lhs, vars, prog, depth);
            ins.code = OpCode::kPowInt;
            ins.exponent = static_cast<std::int64_t>(k);
            break;
          }
        }
      }
      emit(*n.lhs, vars, prog, depth);
      emit(*n.rhs, vars, prog, depth + 1);
      switch (n.binary_op) {
        case BinaryOp::kAdd: ins.code = OpCode::kAdd; break;
        case BinaryOp::kSub: ins.code = OpCode::kSub; break;
        case BinaryOp::kMul: ins.code = OpCode::kMul; break;
        case BinaryOp::kDiv: ins.code = OpCode::kDiv; break;
        case BinaryOp::kPow: ins.code = OpCode::kPow; break;
      }
      break;
    }
  }
  prog.code.push_back(ins);
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

template <class T, class MakeConstant>
T execute(const Program& prog, std::span<const T> slots, MakeConstant&& make_const) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;
  std::vector<T> stack;
  stack.reserve(prog.max_depth);
  for (const Instruction& ins : prog.code) {
    switch (ins.code) {
      case OpCode::kConst:
        stack.push_back(make_const(ins.constant));
        continue;
      case OpCode::kVar:
        stack.push_back(slots[ins.slot]);
        continue;
      default:
        break;
    }
    if (ins.code == OpCode::kAdd || ins.code == OpCode::kSub || ins.code == OpCode::kMul ||
        ins.code == OpCode::kDiv || ins.code == OpCode::kPow) {
      T rhs = std::move(stack.back());
      stack.pop_back();
      T& lhs = stack.back();
      switch (ins.code) {
        case OpCode::kAdd: lhs = lhs + rhs; break;
        case OpCode::kSub: lhs = lhs - rhs; break;
        case OpCode::kMul: lhs = lhs * rhs; break;
        case OpCode::kDiv:
          if (value_of(rhs) == 0.0) throw DomainError(node_text(*ins.node), "division by zero");
          lhs = lhs / rhs;
          break;
        case OpCode::kPow:
          if (!(value_of(lhs) > 0.0)) {
            throw DomainError(node_text(*ins.node), "non-integer power of a non-positive base");
          }
          lhs = exp(rhs * log(lhs));
          break;
        default:
          break;
      }
      continue;
    }
    T& x = stack.back();
    switch (ins.code) {
      case OpCode::kNeg: x = -x; break;
      case OpCode::kSin: x = sin(x); break;
      case OpCode::kCos: x = cos(x); break;
      case OpCode::kTan: x = tan(x); break;
      case OpCode::kExp: x = exp(x); break;
      case OpCode::kLog:
        if (!(value_of(x) > 0.0)) throw DomainError(node_text(*ins.node), "log of non-positive");
        x = log(x);
        break;
      case OpCode::kSqrt:
        if (!(value_of(x) >= 0.0)) throw DomainError(node_text(*ins.node), "sqrt of negative");
        x = sqrt(x);
        break;
      case OpCode::kPowInt:
        if (ins.exponent < 0 && value_of(x) == 0.0) {
          throw DomainError(node_text(*ins.node), "negative power of zero");
        }
        x = pow_int(x, ins.exponent, make_const(1.0));
        break;
      default:
        break;
    }
  }
  return std::move(stack.back());
}

double fold_constant(const ExprNode& n) {
  Program prog;
  emit(n, {}, prog, 0);
  return execute<double>(prog, {}, [](double c) { return c; });
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// Expression

Expression::Expression() : Expression(make_constant(0.0)) {}

Expression::Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
  std::set<std::string, std::less<>> vars;
  collect_vars(*root_, vars);
  free_vars_.assign(vars.begin(), vars.end());
  auto prog = std::make_shared<detail::Program>();
  detail::emit(*root_, free_vars_, *prog, 0);
  program_ = std::move(prog);
}

Expression Expression::parse(std::string_view source) { return Expression(Parser(source).parse()); }
Expression Expression::constant(double value) { return Expression(make_constant(value)); }
Expression Expression::variable(std::string name) { return Expression(make_variable(std::move(name))); }

Expression Expression::unary(UnaryOp op, const Expression& operand) {
  return Expression(make_unary(op, operand.root_));
}

Expression Expression::binary(BinaryOp op, const Expression& lhs, const Expression& rhs) {
  return Expression(make_binary(op, lhs.root_, rhs.root_));
}

bool Expression::depends_on(std::string_view name) const {
  return std::binary_search(free_vars_.begin(), free_vars_.end(), name);
}

std::string Expression::to_string() const { return node_text(*root_); }

Expression Expression::substitute(
    const std::map<std::string, Expression, std::less<>>& replacements) const {
  return Expression(substitute_node(root_, replacements));
}

Expression Expression::rename(const std::map<std::string, std::string, std::less<>>& names) const {
  std::map<std::string, Expression, std::less<>> repl;
  for (const auto& [from, to] : names) repl.emplace(from, Expression::variable(to));
  return substitute(repl);
}

namespace {

std::vector<double> bind_slots(const std::vector<std::string>& vars, const Bindings& b) {
  std::vector<double> slots;
  slots.reserve(vars.size());
  for (const auto& name : vars) {
    auto it = b.find(name);
    if (it == b.end()) throw UnboundVariable(name);
    slots.push_back(it->second);
  }
  return slots;
}

std::vector<detail::Jet> seed_slots(const std::vector<std::string>& free,
                                    std::span<const std::string> wrt, const Bindings& b,
                                    bool second) {
  const std::vector<double> values = bind_slots(free, b);
  const auto dim = static_cast<Eigen::Index>(wrt.size());
  std::vector<detail::Jet> slots;
  slots.reserve(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    auto it = std::find(wrt.begin(), wrt.end(), free[i]);
    if (it == wrt.end()) {
      slots.push_back(detail::make_constant(values[i], dim, second));
    } else {
      slots.push_back(detail::make_seed(values[i], dim, it - wrt.begin(), second));
    }
  }
  return slots;
}

}  // namespace

double Expression::evaluate(const Bindings& bindings) const {
  const std::vector<double> slots = bind_slots(free_vars_, bindings);
  return detail::execute<double>(*program_, slots, [](double c) { return c; });
}

Vector Expression::gradient(std::span<const std::string> vars, const Bindings& bindings) const {
  const auto slots = seed_slots(free_vars_, vars, bindings, false);
  const auto dim = static_cast<Eigen::Index>(vars.size());
  detail::Jet r = detail::execute<detail::Jet>(
      *program_, slots, [dim](double c) { return detail::make_constant(c, dim, false); });
  return r.g;
}

Matrix Expression::hessian(std::span<const std::string> vars, const Bindings& bindings) const {
  return derivatives(vars, bindings).hessian;
}

SecondOrder Expression::derivatives(std::span<const std::string> vars,
                                    const Bindings& bindings) const {
  const auto slots = seed_slots(free_vars_, vars, bindings, true);
  const auto dim = static_cast<Eigen::Index>(vars.size());
  detail::Jet r = detail::execute<detail::Jet>(
      *program_, slots, [dim](double c) { return detail::make_constant(c, dim, true); });
  SecondOrder out;
  out.value = r.v;
  out.gradient = std::move(r.g);
  out.hessian = std::move(r.h);
  if (out.hessian.rows() != dim) out.hessian = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) out.hessian(i, j) = out.hessian(j, i);
  }
  return out;
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::kConstant:
      return a.value == b.value;
    case ExprNode::Kind::kVariable:
      return a.name == b.name;
    case ExprNode::Kind::kUnary:
      return a.unary_op == b.unary_op && structurally_equal(*a.lhs, *b.lhs);
    case ExprNode::Kind::kBinary:
      return a.binary_op == b.binary_op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool operator==(const Expression& a, const Expression& b) {
  return structurally_equal(*a.root_, *b.root_);
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::kAdd, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::kSub, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::kMul, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::kDiv, a, b);
}
Expression operator-(const Expression& a) { return Expression::unary(UnaryOp::kNeg, a); }
Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
Expression pow(const Expression& base, const Expression& exponent) {
  return Expression::binary(BinaryOp::kPow, base, exponent);
}

std::vector<Expression> parse_all(std::span<const std::string> sources) {
  std::vector<Expression> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(Expression::parse(s));
  return out;
}

}  // namespace jetmech
