#pragma once

#include "common/check.hpp"
#include "potential/potential.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace sq::kahler {

/// Coefficient matrix G(x) of the even block sum_{p,q} G_pq dx_p ^ dy_q.
using EvenBlock = std::function<Eigen::MatrixXd(std::span<const double>)>;

/// Coefficient data of an invariant super Kahler form
///   omega = sum G_pq dx_p ^ dy_q + sum_r (a_r (dxi_r)^2 + b_r (deta_r)^2).
/// build_form sets G to the Hessian of the potential and normalizes a = b = 1.
struct SuperKahlerData {
  potential::ConvexPotential potential;
  int n = 0, m = 0, k = 0;
  EvenBlock even_block;
  std::vector<double> odd_a;
  std::vector<double> odd_b;
  /// Factor applied to each zeta_r during normalization (1/sqrt(a_r)).
  std::vector<double> odd_rescaling;
  /// Even/odd cross coefficients, (n+m) x 2k. Zero for every form this
  /// module builds; a nonzero entry breaks consistency.
  Eigen::MatrixXd cross_terms;

  int even_dim() const { return n + m; }
};

/// Builds the canonical form from a certified potential. `odd_coefficients`
/// optionally supplies pre-normalization pairs (a_r, b_r); they must be
/// positive with a_r == b_r and are rescaled to 1. Throws Uncertified when
/// the potential carries no convexity certificate.
SuperKahlerData build_form(const potential::ConvexPotential& f, int k,
                           std::span<const std::pair<double, double>> odd_coefficients = {});

/// Closedness residual uses nested central differences with this step.
inline constexpr double kClosednessStep = 1e-4;

struct AxiomTolerances {
  double closedness = 1e-7;  // relative to max(1, |third partials|)
};

/// Positivity, closedness (symmetry of d_s G_pq under all permutations of
/// s, p, q) and consistency (no even/odd cross terms) at each sample point.
CheckReport verify_axioms(const SuperKahlerData& omega, const std::vector<std::vector<double>>& samples,
                          AxiomTolerances tol = {});

/// Point (x, y, xi, eta) of M. Only x and xi enter the moment map.
struct SuperPoint {
  std::vector<double> x, y, xi, eta;
};

struct MomentValue {
  std::vector<double> even_part;  // -F'(x)
  std::vector<double> odd_part;   // 2 xi
};

MomentValue moment_map(const SuperKahlerData& omega, const SuperPoint& point);

/// Both sides of d(Phi, v) = iota(v#) omega as 1-form coefficients in the
/// basis (dx, dy, dxi, deta).
struct OneForm {
  Eigen::VectorXd dx, dy, dxi, deta;
};

/// Differential of x -> <Phi(x, xi), (u, w)> from the second-order jet.
OneForm moment_differential(const SuperKahlerData& omega, std::span<const double> x,
                            std::span<const double> u, std::span<const double> w);

/// Contraction of omega with u# + w# = sum u_q d/dy_q + sum w_s d/dxi_s,
/// using iota(d/dy_q)(dx_p ^ dy_q) = -dx_p and iota(d/dxi_s)(dxi_s)^2 = 2 dxi_s.
OneForm contract(const SuperKahlerData& omega, std::span<const double> x, std::span<const double> u,
                 std::span<const double> w);

CheckReport verify_moment_identity(const SuperKahlerData& omega, std::span<const double> u,
                                   std::span<const double> w, const std::vector<std::vector<double>>& samples,
                                   double tol = 1e-8);

/// Quarter-Hessian identity d^2F/dz_j dzbar_k = (1/4) d^2F/dx_j dx_k, with the
/// left side computed from the Hessian of F lifted to (x, y); plus the odd
/// identity i d dbar H = omega' for H = -i sum zeta_r zbar_r, checked exactly
/// in the Grassmann algebra.
CheckReport dolbeault_check(const SuperKahlerData& omega, const std::vector<std::vector<double>>& samples,
                            double tol = 1e-7);

/// Deterministic uniform samples in [lo, hi]^dim.
std::vector<std::vector<double>> sample_points(int dim, double lo, double hi, int count, unsigned long long seed);

}  // namespace sq::kahler
