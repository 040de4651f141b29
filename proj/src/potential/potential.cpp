#include "potential/potential.hpp"

#include "common/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace sq::potential {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ConvexPotential::ConvexPotential(ExprAST ast, int n, int m) : ast_(std::move(ast)), n_(n), m_(m) {
  if (n < 0 || m < 0) throw Error(ErrorKind::Dimension, "negative dimension");
  if (n + m < 1) throw Error(ErrorKind::Dimension, "potential needs n+m >= 1");
  if (ast_.num_vars() != n + m) throw Error(ErrorKind::Dimension, "expression arity differs from n+m");
}

ConvexPotential from_expression(const std::string& text, int n, int m) {
  if (n < 0 || m < 0 || n + m < 1) throw Error(ErrorKind::Dimension, "potential needs n+m >= 1");
  return ConvexPotential(parse(text, n + m), n, m);
}

ConvexPotential builtin_F1(int n, int m) {
  if (n < 0 || m < 0 || n + m < 1) throw Error(ErrorKind::Dimension, "potential needs n+m >= 1");
  std::string text;
  for (int j = 1; j <= n + m; ++j) text += (j > 1 ? " + x" : "x") + std::to_string(j) + "^2";
  ConvexPotential f = from_expression(text, n, m);
  f.set_certificate(ClosedFormCertificate{"Hessian = 2I"});
  f.set_builtin(BuiltinInfo{"F1", {}, 0.0});
  return f;
}

ConvexPotential builtin_F2(std::span<const double> mu, double epsilon, int n, int m) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::InvalidArgument, "F2 needs epsilon > 0");
  if (static_cast<int>(mu.size()) != n + m) throw Error(ErrorKind::Dimension, "F2 needs mu of length n+m");
  std::string text;
  for (int j = 1; j <= n + m; ++j) {
    const std::string x = "x" + std::to_string(j);
    if (j > 1) text += " + ";
    text += "(" + format_double(-mu[j - 1]) + ")*" + x + " + " + format_double(epsilon) + "*sqrt(" + x + "^2 + 1)";
  }
  ConvexPotential f = from_expression(text, n, m);
  f.set_certificate(ClosedFormCertificate{"Hessian diagonal eps*(x_j^2+1)^(-3/2) > 0"});
  f.set_builtin(BuiltinInfo{"F2", std::vector<double>(mu.begin(), mu.end()), epsilon});
  return f;
}

Jet2 eval_jet2(const ExprAST& ast, std::span<const double> x) {
  const int dim = ast.num_vars();
  if (static_cast<int>(x.size()) != dim)
    throw Error(ErrorKind::Dimension, "point dimension does not match the potential");
  const auto& nodes = ast.nodes();
  std::vector<Jet2> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.op) {
      case OpCode::Constant: v[i] = Jet2::constant(n.constant, dim); break;
      case OpCode::Variable: v[i] = Jet2::variable(x[n.variable], n.variable, dim); break;
      case OpCode::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
      case OpCode::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
      case OpCode::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
      case OpCode::Div: {
        const double b = v[n.rhs].value;
        if (b == 0.0) throw Error(ErrorKind::Domain, "division by zero");
        v[i] = v[n.lhs] * chain(v[n.rhs], 1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b));
        break;
      }
      case OpCode::Neg: v[i] = -v[n.lhs]; break;
      case OpCode::Pow: {
        const double u = v[n.lhs].value;
        const int p = n.exponent;
        if (p < 0 && u == 0.0) throw Error(ErrorKind::Domain, "negative power of zero");
        const double f = std::pow(u, p);
        const double df = p == 0 ? 0.0 : p * std::pow(u, p - 1);
        const double d2f = (p == 0 || p == 1) ? 0.0 : p * (p - 1) * std::pow(u, p - 2);
        v[i] = chain(v[n.lhs], f, df, d2f);
        break;
      }
      case OpCode::Sqrt: {
        const double u = v[n.lhs].value;
        if (!(u > 0.0)) throw Error(ErrorKind::Domain, "sqrt of a nonpositive argument");
        const double s = std::sqrt(u);
        v[i] = chain(v[n.lhs], s, 0.5 / s, -0.25 / (s * u));
        break;
      }
      case OpCode::Exp: {
        const double e = std::exp(v[n.lhs].value);
        v[i] = chain(v[n.lhs], e, e, e);
        break;
      }
    }
  }
  Jet2 out = std::move(v.back());
  // Mirror the upper triangle so stored entries agree bit for bit.
  for (int r = 0; r < dim; ++r)
    for (int c = r + 1; c < dim; ++c) out.hessian(c, r) = out.hessian(r, c);
  if (!std::isfinite(out.value) || !out.gradient.allFinite() || !out.hessian.allFinite())
    throw Error(ErrorKind::NonFinite, "non-finite jet");
  return out;
}

Jet2 eval_jet2(const ConvexPotential& f, std::span<const double> x) { return eval_jet2(f.ast(), x); }

double min_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CertifyResult certify_strict_convexity(const ConvexPotential& f, Box box, int grid_density, double tau) {
  if (f.certificate() && std::holds_alternative<ClosedFormCertificate>(*f.certificate()))
    return *f.certificate();
  if (!(box.lo <= box.hi)) throw Error(ErrorKind::InvalidArgument, "certification box bounds out of order");
  if (grid_density < 1) throw Error(ErrorKind::InvalidArgument, "grid density must be positive");
  const int dim = f.dim();
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  auto coord = [&](int i) {
    return grid_density == 1 ? 0.5 * (box.lo + box.hi)
                             : box.lo + (box.hi - box.lo) * i / static_cast<double>(grid_density - 1);
  };
  for (;;) {
    for (int d = 0; d < dim; ++d) x[d] = coord(idx[d]);
    double lam;
    try {
      lam = min_eigenvalue(eval_jet2(f, x).hessian);
    } catch (const Error&) {
      lam = -std::numeric_limits<double>::infinity();
    }
    if (lam < worst) {
      worst = lam;
      witness = x;
    }
    int d = 0;
    while (d < dim && ++idx[d] == grid_density) idx[d++] = 0;
    if (d == dim) break;
  }
  if (worst > tau) return Certificate{GridCertificate{box, grid_density, tau, worst}};
  return Refutation{witness, worst, box, tau};
}

}  // namespace sq::potential
