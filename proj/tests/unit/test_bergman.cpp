#include "doctest.h"

#include "bergman/bergman.hpp"
#include "common/error.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace sq::bergman;
using namespace sq::potential;
using sq::Weight;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Closed form of the 1D weighted integral for F(x) = -mu x + eps sqrt(x^2+1):
// int exp(-a sqrt(x^2+1) - b x) dx = 2 a K1(c) / c with c = sqrt(a^2 - b^2).
double f2_closed_form(double lambda, double mu, double eps) {
  const double a = 2 * eps, b = 2 * (lambda - mu);
  const double c = std::sqrt(a * a - b * b);
  return 2 * a * boost::math::cyl_bessel_k(1, c) / c;
}

}  // namespace

TEST_CASE("Gaussian benchmark") {
  std::vector<double> zero{0.0};
  ConvergenceVerdict v = weighted_norm_integral(zero, builtin_F1(1, 0));
  REQUIRE(v.kind == VerdictKind::Converges);
  CHECK(rel(v.value, std::sqrt(std::numbers::pi / 2)) < 1e-6);
  CHECK(v.error_estimate < 1e-6 * v.value);
}

TEST_CASE("shifted Gaussians match the closed form") {
  // int exp(-2 l x - 2 x^2) dx = sqrt(pi/2) exp(l^2 / 2)
  for (double l : {-5.0, -1.5, 0.25, 3.0, 5.0}) {
    std::vector<double> lam{l};
    ConvergenceVerdict v = weighted_norm_integral(lam, builtin_F1(1, 0));
    REQUIRE(v.kind == VerdictKind::Converges);
    CHECK(rel(v.value, std::sqrt(std::numbers::pi / 2) * std::exp(l * l / 2)) < 1e-9);
  }
  std::vector<double> lam{2.0, -3.0};
  ConvergenceVerdict v = weighted_norm_integral(lam, builtin_F1(1, 1));
  REQUIRE(v.kind == VerdictKind::Converges);
  CHECK(rel(v.value, std::numbers::pi / 2 * std::exp((4.0 + 9.0) / 2)) < 1e-9);
}

TEST_CASE("F2 integrals match the Bessel closed form") {
  std::vector<double> mu{3.0};
  for (auto [eps, lambda] : std::vector<std::pair<double, double>>{{0.5, 3.0}, {1.5, 2.0}, {1.5, 4.0}, {2.0, 3.5}}) {
    std::vector<double> lam{lambda};
    ConvergenceVerdict v = weighted_norm_integral(lam, builtin_F2(mu, eps, 1, 0));
    INFO(eps, " ", lambda);
    REQUIRE(v.kind == VerdictKind::Converges);
    CHECK(rel(v.value, f2_closed_form(lambda, 3.0, eps)) < 1e-6);
  }
}

TEST_CASE("truncation history is monotone and divergence is sustained") {
  std::vector<double> mu{3.0, -2.0};
  ConvexPotential f2 = builtin_F2(mu, 0.5, 2, 0);
  std::vector<double> at_mu{3.0, -2.0}, off{4.0, -2.0};
  ConvergenceVerdict c = weighted_norm_integral(at_mu, f2);
  CHECK(c.kind == VerdictKind::Converges);
  ConvergenceVerdict d = weighted_norm_integral(off, f2);
  REQUIRE(d.kind == VerdictKind::Diverges);
  for (const auto* v : {&c, &d})
    for (std::size_t i = 1; i < v->log_truncations.size(); ++i)
      CHECK(v->log_truncations[i] >= v->log_truncations[i - 1]);
  const auto& h = d.log_truncations;
  REQUIRE(h.size() >= 4);
  for (std::size_t i = h.size() - 3; i < h.size(); ++i) CHECK(h[i] - h[i - 1] >= std::log(10.0));
}

TEST_CASE("large exponents stay finite in log space") {
  std::vector<double> lam{-40.0};
  ConvergenceVerdict v = weighted_norm_integral(lam, builtin_F1(1, 0));
  REQUIRE(v.kind == VerdictKind::Converges);
  CHECK(std::abs(v.log_value - (0.5 * std::log(std::numbers::pi / 2) + 800.0)) < 1e-9);
}

TEST_CASE("schedule validation and domain failures") {
  std::vector<double> zero{0.0};
  TruncationSchedule bad;
  bad.growth = 1.0;
  CHECK_THROWS_AS(weighted_norm_integral(zero, builtin_F1(1, 0), bad), sq::Error);
  bad = {};
  bad.max_doublings = 2;
  CHECK_THROWS_AS(weighted_norm_integral(zero, builtin_F1(1, 0), bad), sq::Error);
  bad = {};
  bad.order = 33;
  CHECK_THROWS_AS(weighted_norm_integral(zero, builtin_F1(1, 0), bad), sq::Error);
  std::vector<double> two{0.0, 0.0};
  CHECK_THROWS_AS(weighted_norm_integral(two, builtin_F1(1, 0)), sq::Error);

  ConvergenceVerdict v = weighted_norm_integral(zero, from_expression("sqrt(x1 + 1)", 1, 0));
  CHECK(v.kind == VerdictKind::Inconclusive);
  CHECK(v.reason.find("not evaluable") != std::string::npos);

  TruncationSchedule tiny;
  tiny.max_evaluations = 100;
  CHECK(weighted_norm_integral(zero, builtin_F1(1, 0), tiny).kind == VerdictKind::Inconclusive);
}

TEST_CASE("Legendre attainment") {
  ConvexPotential f1 = builtin_F1(2, 0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> lam{u(rng), u(rng)};
    ConvergenceVerdict v = legendre_attainment(lam, f1);
    REQUIRE(v.kind == VerdictKind::Converges);
    CHECK(std::abs(v.point[0] + lam[0] / 2) < 1e-12);
    CHECK(std::abs(v.point[1] + lam[1] / 2) < 1e-12);
  }
  std::vector<double> zero{0.0, 0.0};
  ConvergenceVerdict z = legendre_attainment(zero, f1);
  CHECK(z.kind == VerdictKind::Converges);
  CHECK(z.point == std::vector<double>{0.0, 0.0});

  std::vector<double> mu{3.0, -2.0};
  ConvexPotential f2 = builtin_F2(mu, 0.5, 2, 0);
  ConvergenceVerdict inside = legendre_attainment(mu, f2);
  CHECK(inside.kind == VerdictKind::Converges);
  CHECK(inside.gradient_norm < 1e-10);

  // On the boundary of the open image the infimum is not attained.
  std::vector<double> boundary{2.5, -2.0};
  CHECK(legendre_attainment(boundary, f2).kind == VerdictKind::Diverges);
  std::vector<double> outside{4.0, -2.0};
  CHECK(legendre_attainment(outside, f2).kind == VerdictKind::Diverges);

  LegendreParams capped;
  capped.max_iterations = 1;
  CHECK(legendre_attainment(boundary, f2, capped).kind == VerdictKind::Inconclusive);
  CHECK_THROWS_AS(legendre_attainment(zero, from_expression("x1^2 + x2^2", 2, 0)), sq::Error);
}

TEST_CASE("classify_weight examples") {
  ConvexPotential f1 = builtin_F1(2, 0);
  Weight w{{7, -4}, {}};
  WeightClassification c = classify_weight(w, f1);
  CHECK(c.verdict == Occurrence::Occurs);
  CHECK(c.points.size() == 1);

  std::vector<double> mu{3.0, -2.0};
  ConvexPotential f2 = builtin_F2(mu, 0.5, 2, 0);
  CHECK(classify_weight(Weight{{3, -2}, {}}, f2).verdict == Occurrence::Occurs);
  CHECK(classify_weight(Weight{{4, -2}, {}}, f2).verdict == Occurrence::DoesNotOccur);

  std::vector<double> frac{2.5, -2.0};
  ConvexPotential f3 = builtin_F2(frac, 0.25, 2, 0);
  for (std::int64_t a = 1; a <= 4; ++a) {
    WeightClassification r = classify_weight(Weight{{a, -2}, {}}, f3);
    CHECK(r.verdict == Occurrence::DoesNotOccur);
    CHECK_FALSE(r.discrepancy);
  }

  // Flat weights test a neighborhood: center plus 2m perturbations.
  ConvexPotential g = builtin_F1(1, 1);
  WeightClassification flat = classify_weight(Weight{{1}, {-0.5}}, g);
  CHECK(flat.verdict == Occurrence::Occurs);
  REQUIRE(flat.points.size() == 3);
  CHECK(flat.points[1].lambda[1] == -0.5 - 1e-3);
  CHECK(flat.points[2].lambda[1] == -0.5 + 1e-3);

  CHECK_THROWS_AS(classify_weight(Weight{{1, 2}, {}}, g), sq::Error);
}

TEST_CASE("flat perturbations leaving the image give Inconclusive") {
  // Image of -F' in the flat direction is the open interval (-1, 1).
  ConvexPotential f = from_expression("x1^2 + sqrt(x2^2 + 1)", 1, 1);
  f.set_certificate(ClosedFormCertificate{"test"});
  ClassifyOptions opt;
  opt.delta = 0.5;
  WeightClassification c = classify_weight(Weight{{0}, {0.75}}, f, opt);
  CHECK(c.verdict == Occurrence::Inconclusive);
  CHECK_FALSE(c.discrepancy);
  opt.delta = 0.1;
  CHECK(classify_weight(Weight{{0}, {0.75}}, f, opt).verdict == Occurrence::Occurs);
}

TEST_CASE("section norms") {
  using sq::grassmann::Blade;
  ConvexPotential f1 = builtin_F1(1, 0);
  SectionNorm s = section_norm(SectionCoefficient{Weight{{0}, {}}, Blade::unit(2), 1.0}, f1);
  REQUIRE(s.verdict.kind == VerdictKind::Converges);
  CHECK(rel(s.value.real(), std::sqrt(std::numbers::pi / 2)) < 1e-6);
  CHECK(s.value.imag() == 0.0);

  SectionNorm odd = section_norm(SectionCoefficient{Weight{{0}, {}}, Blade::generator(2, 1), {0.0, 2.0}}, f1);
  CHECK(rel(odd.value.imag(), 4.0 * std::sqrt(std::numbers::pi / 2)) < 1e-6);
  CHECK(odd.value.real() == 0.0);

  std::vector<double> mu{3.0};
  ConvexPotential f2 = builtin_F2(mu, 0.5, 1, 0);
  CHECK(section_norm(SectionCoefficient{Weight{{5}, {}}, Blade::unit(1), 1.0}, f2).verdict.kind ==
        VerdictKind::Diverges);
  SectionNorm zero = section_norm(SectionCoefficient{Weight{{5}, {}}, Blade::unit(1), 0.0}, f2);
  CHECK(zero.verdict.kind == VerdictKind::Converges);
  CHECK(zero.value == std::complex<double>(0.0));

  CHECK_THROWS_AS(section_norm(SectionCoefficient{Weight{{0}, {}}, Blade::generator(1, 2), 1.0}, f1), sq::Error);
}

TEST_CASE("metric axioms on section families") {
  using sq::grassmann::Blade;
  ConvexPotential f = builtin_F1(1, 1);
  const int k = 2;
  std::vector<SectionCoefficient> family = {
      {Weight{{0}, {0.5}}, Blade::unit(k), {1.0, 0.5}},
      {Weight{{0}, {0.5}}, Blade::generator(k, 1), {-0.25, 2.0}},
      {Weight{{0}, {0.5}}, Blade::generator(k, 2), {3.0, 0.0}},
      {Weight{{0}, {0.5}}, Blade::from_indices(k, {1, 2}), {0.0, -1.0}},
      {Weight{{1}, {0.5}}, Blade::generator(k, 1), {1.0, 1.0}},
      {Weight{{0}, {0.5}}, Blade::generator(k, 1), {0.5, 0.5}},
      {Weight{{2}, {-1.0}}, Blade::unit(k), {0.0, 0.0}},
  };
  sq::CheckReport r = metric_axioms_check(family, f);
  CHECK(r.passed());
  CHECK(r.find("consistency")->worst_residual == 0.0);
  CHECK(r.find("hermitian_symmetry")->worst_residual < 1e-12);

  // even vs odd pair is zero, odd norm lies on the positive imaginary axis
  CHECK(inner_product(family[0], family[1], f) == std::complex<double>(0.0));
  std::complex<double> oo = inner_product(family[1], family[1], f);
  CHECK(oo.real() == 0.0);
  CHECK(oo.imag() > 0.0);
  std::complex<double> cross = inner_product(family[1], family[5], f);
  CHECK(std::abs(cross - (-1.0) * std::conj(inner_product(family[5], family[1], f))) < 1e-12 * std::abs(cross));

  std::vector<double> mu{3.0};
  ConvexPotential f2 = builtin_F2(mu, 0.5, 1, 0);
  std::vector<SectionCoefficient> divergent = {{Weight{{6}, {}}, Blade::unit(1), 1.0}};
  CHECK_THROWS_AS(metric_axioms_check(divergent, f2), sq::Error);
}
