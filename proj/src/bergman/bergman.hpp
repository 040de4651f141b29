#pragma once

#include "common/check.hpp"
#include "common/weight.hpp"
#include "grassmann/blade.hpp"
#include "grassmann/scalar.hpp"
#include "potential/potential.hpp"

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace sq::bergman {

enum class VerdictKind { Converges, Diverges, Inconclusive };
const char* to_string(VerdictKind k);

/// Result of either oracle. The integral oracle fills the truncation history;
/// the Legendre oracle fills point/gradient_norm/iterations.
struct ConvergenceVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double value = std::numeric_limits<double>::quiet_NaN();
  double log_value = std::numeric_limits<double>::quiet_NaN();
  double error_estimate = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> radii;
  /// log I(R) for each radius reached; nondecreasing.
  std::vector<double> log_truncations;
  std::vector<double> point;
  double gradient_norm = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string reason;
};

/// Expanding-box schedule: radii r0 * growth^j for j = 0..max_doublings,
/// rounded up to a multiple of the panel width so boxes nest panel-wise.
struct TruncationSchedule {
  double r0 = 4.0;
  double growth = 2.0;
  int max_doublings = 6;
  int order = 32;  // Gauss-Legendre nodes per axis per panel
  double panel_width = 2.0;
  double rel_tol = 1e-6;
  double divergence_ratio = 10.0;
  int divergence_run = 3;
  /// Integrand evaluations allowed per integral before giving up.
  long long max_evaluations = 400'000'000;

  void validate() const;
};

/// Gauss-Legendre orders available at runtime.
const std::vector<int>& supported_orders();

/// Integral of exp(-2 lambda.x - 2F(x)) over R^(n+m). Torus and y directions
/// carry unit Haar volume and contribute a factor 1. Converges when the last
/// shell adds at most rel_tol of the total; Diverges after divergence_run
/// successive growth factors of at least divergence_ratio with the largest
/// integrand value of the last shell on the outer rim of panels.
ConvergenceVerdict weighted_norm_integral(std::span<const double> lambda, const potential::ConvexPotential& f,
                                          const TruncationSchedule& schedule = {});

struct LegendreParams {
  double gradient_tol = 1e-10;
  double escape_radius = 1e6;
  int max_iterations = 200;
  /// A stationary point also needs a Newton step below step_tol * (1 + |x|).
  double step_tol = 1e-8;
  /// Starting point; empty means the origin.
  std::vector<double> start;

  void validate() const;
};

/// Minimizes G(x) = F(x) + lambda.x by damped Newton. Converges when a
/// stationary point is reached, Diverges when the iterates leave the escape
/// radius, Inconclusive on the iteration cap or a failed line search.
ConvergenceVerdict legendre_attainment(std::span<const double> lambda, const potential::ConvexPotential& f,
                                       const LegendreParams& params = {});

enum class Occurrence { Occurs, DoesNotOccur, Inconclusive };
const char* to_string(Occurrence o);

struct ClassifyOptions {
  double delta = 1e-3;
  TruncationSchedule schedule;
  LegendreParams legendre;
};

/// Both oracles at one evaluation point.
struct PointEvaluation {
  std::vector<double> lambda;
  ConvergenceVerdict integral;
  ConvergenceVerdict legendre;
  bool contradictory() const;
};

struct WeightClassification {
  Weight weight;
  Occurrence verdict = Occurrence::Inconclusive;
  /// Center first, then lambda_flat +/- delta e_j in axis order.
  std::vector<PointEvaluation> points;
  bool discrepancy = false;
  std::string reason;
};

/// Occurs when both oracles converge at the center and at every flat
/// perturbation; DoesNotOccur when both diverge at the center; otherwise
/// Inconclusive. Contradictory definite verdicts set `discrepancy`.
WeightClassification classify_weight(const Weight& lambda, const potential::ConvexPotential& f,
                                     const ClassifyOptions& options = {});

/// Holomorphic section c * e^(-lambda z) * zeta_P.
struct SectionCoefficient {
  Weight lambda;
  grassmann::Blade blade;
  std::complex<double> scalar;

  int parity() const { return blade.degree() % 2; }
};

struct SectionNorm {
  ConvergenceVerdict verdict;
  /// |c|^2 * berezin(zeta_P star(zeta_P)) * integral; NaN unless converged.
  std::complex<double> value{std::numeric_limits<double>::quiet_NaN(), 0.0};
};

SectionNorm section_norm(const SectionCoefficient& s, const potential::ConvexPotential& f,
                         const TruncationSchedule& schedule = {});

/// <s, t> for sections with convergent norms. Zero unless the weights agree,
/// by orthogonality of characters.
std::complex<double> inner_product(const SectionCoefficient& s, const SectionCoefficient& t,
                                   const potential::ConvexPotential& f, const TruncationSchedule& schedule = {});

/// Consistency, super Hermitian symmetry and super positivity on all pairs of
/// the family. Throws InvalidArgument if some member has no convergent norm.
CheckReport metric_axioms_check(const std::vector<SectionCoefficient>& family, const potential::ConvexPotential& f,
                                const TruncationSchedule& schedule = {});

}  // namespace sq::bergman
