#pragma once

#include "potential/expr.hpp"
#include "potential/jet.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sq::potential {

/// Axis-aligned sampling box, the same interval on every axis.
struct Box {
  double lo = -1.0;
  double hi = 1.0;
};

struct ClosedFormCertificate {
  std::string reason;
};

/// Sampled certificate: min Hessian eigenvalue exceeded tau at every grid
/// point of the box. Not a proof.
struct GridCertificate {
  Box box;
  int grid_density = 0;
  double tau = 1e-8;
  double min_eigenvalue = 0.0;
};

using Certificate = std::variant<ClosedFormCertificate, GridCertificate>;

struct Refutation {
  std::vector<double> witness;
  double min_eigenvalue = 0.0;
  Box box;
  double tau = 1e-8;
};

/// Description of a builtin family member, kept for reports.
struct BuiltinInfo {
  std::string name;             // "F1" or "F2"
  std::vector<double> mu;       // F2 only
  double epsilon = 0.0;         // F2 only
};

/// A potential F on R^(n+m): expression, dimensions and, once checked, a
/// convexity certificate.
class ConvexPotential {
 public:
  ConvexPotential(ExprAST ast, int n, int m);

  const ExprAST& ast() const noexcept { return ast_; }
  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int dim() const noexcept { return n_ + m_; }

  const std::optional<Certificate>& certificate() const noexcept { return certificate_; }
  bool certified() const noexcept { return certificate_.has_value(); }
  void set_certificate(Certificate c) { certificate_ = std::move(c); }

  const std::optional<BuiltinInfo>& builtin() const noexcept { return builtin_; }
  void set_builtin(BuiltinInfo b) { builtin_ = std::move(b); }

  double value(std::span<const double> x) const { return evaluate(ast_, x); }

 private:
  ExprAST ast_;
  int n_;
  int m_;
  std::optional<Certificate> certificate_;
  std::optional<BuiltinInfo> builtin_;
};

/// Parses `text` as a potential in n+m variables. The result is uncertified.
ConvexPotential from_expression(const std::string& text, int n, int m);

/// F1(x) = x1^2 + ... + x_{n+m}^2, with a closed-form certificate.
ConvexPotential builtin_F1(int n, int m);

/// F2(x) = sum_j (-mu_j x_j + eps sqrt(x_j^2 + 1)), eps > 0, closed-form
/// certificate. mu has length n+m.
ConvexPotential builtin_F2(std::span<const double> mu, double epsilon, int n, int m);

/// Value, gradient and Hessian at x by forward-mode AD. The Hessian is
/// symmetric entry for entry.
Jet2 eval_jet2(const ConvexPotential& f, std::span<const double> x);
Jet2 eval_jet2(const ExprAST& ast, std::span<const double> x);

using CertifyResult = std::variant<Certificate, Refutation>;

/// Samples a grid_density^(n+m) grid over `box` and checks that the smallest
/// Hessian eigenvalue exceeds tau everywhere. Potentials that already carry
/// a closed-form certificate return it unchanged. On failure the worst grid
/// point is returned as witness.
CertifyResult certify_strict_convexity(const ConvexPotential& f, Box box, int grid_density, double tau = 1e-8);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& h);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace sq::potential
