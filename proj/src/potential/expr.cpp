#include "potential/expr.hpp"

#include "common/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace sq::potential {

ExprAST::ExprAST(std::vector<Node> nodes, int num_vars, std::string source)
    : nodes_(std::move(nodes)), num_vars_(num_vars), source_(std::move(source)) {}

int ExprAST::max_variable() const noexcept {
  int m = 0;
  for (const Node& n : nodes_)
    if (n.op == OpCode::Variable) m = std::max(m, n.variable + 1);
  return m;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, int num_vars) : s_(text), num_vars_(num_vars) {}

  ExprAST run() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return ExprAST(std::move(nodes_), num_vars_, s_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::Syntax) const {
    throw SyntaxError(kind, pos_ + 1, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(OpCode op, int l, int r) { return push(Node{op, 0.0, 0, 0, l, r}); }

  int expr() {
    int acc = term();
    for (;;) {
      if (accept('+')) acc = binary(OpCode::Add, acc, term());
      else if (accept('-')) acc = binary(OpCode::Sub, acc, term());
      else return acc;
    }
  }

  int term() {
    int acc = unary();
    for (;;) {
      if (accept('*')) acc = binary(OpCode::Mul, acc, unary());
      else if (accept('/')) acc = binary(OpCode::Div, acc, unary());
      else return acc;
    }
  }

  int unary() {
    if (accept('-')) return push(Node{OpCode::Neg, 0.0, 0, 0, unary(), -1});
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    int base = primary();
    if (!accept('^')) return base;
    skip();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      fail("exponent must be an integer literal");
    int e = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, e);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (accept('^')) {
      --pos_;
      fail("chained exponents need parentheses");
    }
    return push(Node{OpCode::Pow, 0.0, 0, negative ? -e : e, base, -1});
  }

  int primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  int number() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || !std::isfinite(v)) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return push(Node{OpCode::Constant, v, 0, 0, -1, -1});
  }

  int identifier() {
    const std::size_t start = pos_;
    std::string word;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) word += s_[pos_++];
    if (word == "sqrt" || word == "exp") return call(word == "sqrt" ? OpCode::Sqrt : OpCode::Exp, word);
    if (word.size() >= 2 && word[0] == 'x' && word.find_first_not_of("0123456789", 1) == std::string::npos &&
        word[1] != '0' && word.size() <= 6) {
      int j = std::stoi(word.substr(1));
      if (j >= 1 && j <= num_vars_) return push(Node{OpCode::Variable, 0.0, j - 1, 0, -1, -1});
    }
    pos_ = start;
    fail("unknown identifier '" + word + "'", ErrorKind::UnknownIdentifier);
  }

  int call(OpCode op, const std::string& name) {
    if (!accept('(')) fail("expected '(' after " + name);
    skip();
    if (pos_ < s_.size() && s_[pos_] == ')') fail(name + " takes exactly one argument", ErrorKind::Arity);
    int arg = expr();
    skip();
    if (pos_ < s_.size() && s_[pos_] == ',') fail(name + " takes exactly one argument", ErrorKind::Arity);
    if (!accept(')')) fail("expected ')'");
    return push(Node{op, 0.0, 0, 0, arg, -1});
  }

  const std::string& s_;
  int num_vars_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

double ipow(double b, int e) {
  unsigned u = e < 0 ? -static_cast<unsigned>(e) : static_cast<unsigned>(e);
  double r = 1.0;
  for (; u; u >>= 1, b *= b)
    if (u & 1u) r *= b;
  return e < 0 ? 1.0 / r : r;
}

bool sweep(const ExprAST& ast, std::span<const double> x, std::vector<double>& v, const char** why) {
  const auto& nodes = ast.nodes();
  v.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.op) {
      case OpCode::Constant: v[i] = n.constant; break;
      case OpCode::Variable: v[i] = x[n.variable]; break;
      case OpCode::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
      case OpCode::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
      case OpCode::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
      case OpCode::Div:
        if (v[n.rhs] == 0.0) { *why = "division by zero"; return false; }
        v[i] = v[n.lhs] / v[n.rhs];
        break;
      case OpCode::Neg: v[i] = -v[n.lhs]; break;
      case OpCode::Pow:
        if (n.exponent < 0 && v[n.lhs] == 0.0) { *why = "negative power of zero"; return false; }
        v[i] = ipow(v[n.lhs], n.exponent);
        break;
      case OpCode::Sqrt:
        if (!(v[n.lhs] > 0.0)) { *why = "sqrt of a nonpositive argument"; return false; }
        v[i] = std::sqrt(v[n.lhs]);
        break;
      case OpCode::Exp: v[i] = std::exp(v[n.lhs]); break;
    }
  }
  if (!std::isfinite(v.back())) { *why = "non-finite result"; return false; }
  return true;
}

}  // namespace

ExprAST parse(const std::string& text, int num_vars) {
  if (num_vars < 1) throw Error(ErrorKind::Dimension, "potential needs at least one variable");
  return Parser(text, num_vars).run();
}

double evaluate(const ExprAST& ast, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ast.num_vars())
    throw Error(ErrorKind::Dimension, "point dimension does not match the potential");
  std::vector<double> scratch;
  const char* why = nullptr;
  if (!sweep(ast, x, scratch, &why))
    throw Error(std::string(why) == "non-finite result" ? ErrorKind::NonFinite : ErrorKind::Domain, why);
  return scratch.back();
}

bool try_evaluate(const ExprAST& ast, std::span<const double> x, std::vector<double>& scratch, double& out) {
  const char* why = nullptr;
  if (!sweep(ast, x, scratch, &why)) return false;
  out = scratch.back();
  return true;
}

}  // namespace sq::potential
