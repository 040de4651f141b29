#include "kahler/kahler.hpp"

#include "common/error.hpp"
#include "grassmann/element.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <tuple>
#include <random>

namespace sq::kahler {

using potential::ConvexPotential;
using potential::eval_jet2;

namespace {

void check_size(std::size_t got, int want, const char* what) {
  if (static_cast<int>(got) != want)
    throw Error(ErrorKind::Dimension, std::string(what) + " has length " + std::to_string(got) + ", expected " +
                                          std::to_string(want));
}

}  // namespace

SuperKahlerData build_form(const ConvexPotential& f, int k, std::span<const std::pair<double, double>> odd) {
  if (!f.certified()) throw Error(ErrorKind::Uncertified, "potential has no strict convexity certificate");
  if (k < 0 || k > grassmann::kMaxPairs) throw Error(ErrorKind::Dimension, "odd dimension k outside [0, 16]");
  if (!odd.empty()) check_size(odd.size(), k, "odd coefficient list");

  SuperKahlerData d{f, f.n(), f.m(), k, {}, {}, {}, {}, Eigen::MatrixXd::Zero(f.dim(), 2 * k)};
  const auto ast = f.ast();
  d.even_block = [ast](std::span<const double> x) { return eval_jet2(ast, x).hessian; };
  for (int r = 0; r < k; ++r) {
    double a = 1.0, b = 1.0;
    if (!odd.empty()) std::tie(a, b) = odd[r];
    if (!(a > 0.0) || !(b > 0.0))
      throw Error(ErrorKind::InvalidArgument, "odd coefficients must be positive");
    // A positive (1,1)-form pairs dxi_r and deta_r through dzeta_r ^ dzbar_r.
    if (a != b) throw Error(ErrorKind::InvalidArgument, "odd coefficients a_r and b_r must agree");
    d.odd_rescaling.push_back(1.0 / std::sqrt(a));
    d.odd_a.push_back(1.0);
    d.odd_b.push_back(1.0);
  }
  return d;
}

CheckReport verify_axioms(const SuperKahlerData& omega, const std::vector<std::vector<double>>& samples,
                          AxiomTolerances tol) {
  const int dim = omega.even_dim();
  CheckResult positivity{"positivity", true, 0.0, 0.0, {}, "residual = -(smallest eigenvalue or odd coefficient)"};
  CheckResult closedness{"closedness", true, 0.0, tol.closedness, {},
                         "relative asymmetry of d_s G_pq under permutations of (s,p,q)"};
  CheckResult consistency{"consistency", true, 0.0, 0.0, {}, "largest even/odd cross coefficient"};

  double odd_min = std::numeric_limits<double>::infinity();
  for (int r = 0; r < omega.k; ++r) odd_min = std::min({odd_min, omega.odd_a[r], omega.odd_b[r]});

  const double cross = omega.cross_terms.size() ? omega.cross_terms.cwiseAbs().maxCoeff() : 0.0;

  for (const auto& x : samples) {
    check_size(x.size(), dim, "sample point");
    const Eigen::MatrixXd g = omega.even_block(x);
    const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    const double lam = std::min(potential::min_eigenvalue(sym), odd_min);
    if (positivity.witness.empty() || -lam > positivity.worst_residual) {
      positivity.worst_residual = -lam;
      positivity.witness = x;
    }
    if (!(lam > 0.0)) positivity.passed = false;

    // T(s, p, q) = d_s G_pq by central differences.
    std::vector<Eigen::MatrixXd> t(dim);
    std::vector<double> xp = x;
    for (int s = 0; s < dim; ++s) {
      const double h = kClosednessStep * std::max(1.0, std::abs(x[s]));
      xp[s] = x[s] + h;
      Eigen::MatrixXd gp = omega.even_block(xp);
      xp[s] = x[s] - h;
      Eigen::MatrixXd gm = omega.even_block(xp);
      xp[s] = x[s];
      t[s] = (gp - gm) / (2.0 * h);
    }
    double scale = 1.0, worst = 0.0;
    for (int s = 0; s < dim; ++s) scale = std::max(scale, t[s].cwiseAbs().maxCoeff());
    for (int s = 0; s < dim; ++s)
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
          const double v = t[s](p, q);
          for (double w : {t[s](q, p), t[p](s, q), t[p](q, s), t[q](s, p), t[q](p, s)})
            worst = std::max(worst, std::abs(v - w));
        }
    closedness.observe(worst / scale, x);
    consistency.observe(cross, x);
  }
  return CheckReport{{positivity, closedness, consistency}};
}

MomentValue moment_map(const SuperKahlerData& omega, const SuperPoint& pt) {
  check_size(pt.x.size(), omega.even_dim(), "x");
  check_size(pt.xi.size(), omega.k, "xi");
  if (!pt.y.empty()) check_size(pt.y.size(), omega.even_dim(), "y");
  if (!pt.eta.empty()) check_size(pt.eta.size(), omega.k, "eta");
  const auto jet = eval_jet2(omega.potential, pt.x);
  MomentValue out;
  out.even_part.resize(pt.x.size());
  for (std::size_t p = 0; p < pt.x.size(); ++p) out.even_part[p] = -jet.gradient[p];
  for (double v : pt.xi) out.odd_part.push_back(2.0 * v);
  return out;
}

OneForm moment_differential(const SuperKahlerData& omega, std::span<const double> x, std::span<const double> u,
                            std::span<const double> w) {
  const int dim = omega.even_dim();
  check_size(x.size(), dim, "x");
  check_size(u.size(), dim, "u");
  check_size(w.size(), omega.k, "w");
  const auto jet = eval_jet2(omega.potential, x);
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), dim);
  OneForm d{-(jet.hessian * uv), Eigen::VectorXd::Zero(dim), Eigen::VectorXd(omega.k),
            Eigen::VectorXd::Zero(omega.k)};
  for (int s = 0; s < omega.k; ++s) d.dxi[s] = 2.0 * w[s];
  return d;
}

OneForm contract(const SuperKahlerData& omega, std::span<const double> x, std::span<const double> u,
                 std::span<const double> w) {
  const int dim = omega.even_dim();
  check_size(x.size(), dim, "x");
  check_size(u.size(), dim, "u");
  check_size(w.size(), omega.k, "w");
  const Eigen::MatrixXd g = omega.even_block(x);
  OneForm c{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(omega.k),
            Eigen::VectorXd::Zero(omega.k)};
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) c.dx[p] -= g(p, q) * u[q];
  for (int s = 0; s < omega.k; ++s) c.dxi[s] = 2.0 * omega.odd_a[s] * w[s];
  return c;
}

CheckReport verify_moment_identity(const SuperKahlerData& omega, std::span<const double> u,
                                   std::span<const double> w, const std::vector<std::vector<double>>& samples,
                                   double tol) {
  CheckResult r{"moment_identity", true, 0.0, tol, {}, "max |d(Phi,v) - iota(v#)omega| / max(1, |coefficients|)"};
  for (const auto& x : samples) {
    OneForm lhs = moment_differential(omega, x, u, w);
    OneForm rhs = contract(omega, x, u, w);
    double worst = 0.0, scale = 1.0;
    auto fold = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      if (a.size() == 0) return;
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
      scale = std::max({scale, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    };
    fold(lhs.dx, rhs.dx);
    fold(lhs.dy, rhs.dy);
    fold(lhs.dxi, rhs.dxi);
    fold(lhs.deta, rhs.deta);
    r.observe(worst / scale, x);
  }
  return CheckReport{{r}};
}

namespace {

/// Coefficient matrix of i d dbar H in the basis dzeta_s ^ dzbar_r, taken as
/// i * D_{zbar_r} D_{zeta_s} H with left derivations.
std::vector<std::vector<grassmann::ComplexQ>> odd_levi_form(int k) {
  using namespace grassmann;
  Element h(k);
  for (int r = 1; r <= k; ++r) h.add_term(Blade::from_indices(k, {r, k + r}), ComplexQ(0, -1));
  std::vector<std::vector<ComplexQ>> c(k, std::vector<ComplexQ>(k));
  for (int s = 1; s <= k; ++s)
    for (int r = 1; r <= k; ++r) {
      Element d = derivation(k + r, derivation(s, h));
      c[s - 1][r - 1] = ComplexQ::i() * d.coefficient(Blade::unit(k));
    }
  return c;
}

}  // namespace

CheckReport dolbeault_check(const SuperKahlerData& omega, const std::vector<std::vector<double>>& samples,
                            double tol) {
  const int dim = omega.even_dim();
  const auto& ast = omega.potential.ast();
  // F viewed as a function of (x, y) that ignores y.
  const potential::ExprAST lifted(ast.nodes(), 2 * dim, ast.source());
  CheckResult quarter{"quarter_hessian", true, 0.0, tol, {},
                      "max |d2F/dz_j dzbar_k - H_jk/4| / max(1, |H/4|)"};
  for (const auto& x : samples) {
    check_size(x.size(), dim, "sample point");
    std::vector<double> xy(x);
    for (int j = 0; j < dim; ++j) xy.push_back(0.25 + 0.5 * j - x[j]);  // any y works
    const auto big = eval_jet2(lifted, xy).hessian;
    const auto h = eval_jet2(omega.potential, x).hessian;
    double worst = 0.0, scale = 1.0;
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        // d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2.
        const std::complex<double> wirtinger =
            0.25 * std::complex<double>(big(j, k) + big(dim + j, dim + k), big(j, dim + k) - big(dim + j, k));
        const double rhs = 0.25 * h(j, k);
        worst = std::max(worst, std::abs(wirtinger - rhs));
        scale = std::max(scale, std::abs(rhs));
      }
    quarter.observe(worst / scale, x);
  }

  CheckResult odd{"odd_potential", true, 0.0, 0.0, {}, "max |i d dbar H - omega'| over the zeta/zbar block"};
  const auto levi = odd_levi_form(omega.k);
  double worst = 0.0;
  for (int s = 0; s < omega.k; ++s)
    for (int r = 0; r < omega.k; ++r) {
      const double expected = s == r ? omega.odd_a[s] : 0.0;
      const auto got = levi[s][r].to_complex();
      worst = std::max(worst, std::abs(got - expected));
    }
  odd.observe(worst, {});
  return CheckReport{{quarter, odd}};
}

std::vector<std::vector<double>> sample_points(int dim, double lo, double hi, int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

}  // namespace sq::kahler
