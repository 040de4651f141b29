#pragma once

#include <span>
#include <string>
#include <vector>

namespace sq::potential {

enum class OpCode { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Exp };

/// One node of a flattened expression tree. Children always precede their
/// parent, so a single forward sweep evaluates the whole tree.
struct Node {
  OpCode op;
  double constant = 0.0;  // Constant
  int variable = 0;       // Variable, 0-based
  int exponent = 0;       // Pow
  int lhs = -1;
  int rhs = -1;
};

/// Parsed potential expression over variables x1..x{num_vars}.
class ExprAST {
 public:
  ExprAST() = default;
  ExprAST(std::vector<Node> nodes, int num_vars, std::string source);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int num_vars() const noexcept { return num_vars_; }
  const std::string& source() const noexcept { return source_; }
  /// Highest variable index referenced (1-based), 0 if none.
  int max_variable() const noexcept;

 private:
  std::vector<Node> nodes_;
  int num_vars_ = 0;
  std::string source_;
};

/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' ['-'] integer)?
///   primary := number | x<j> | sqrt '(' expr ')' | exp '(' expr ')' | '(' expr ')'
/// Offsets in errors are 1-based character positions.
ExprAST parse(const std::string& text, int num_vars);

/// Value-only evaluation. Throws domain or non-finite errors.
double evaluate(const ExprAST& ast, std::span<const double> x);

/// Same as evaluate but reuses caller-provided scratch storage and reports
/// failure through the return flag instead of throwing.
bool try_evaluate(const ExprAST& ast, std::span<const double> x, std::vector<double>& scratch, double& out);

}  // namespace sq::potential
