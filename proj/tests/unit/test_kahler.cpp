#include "doctest.h"

#include "common/error.hpp"
#include "kahler/kahler.hpp"

#include <cmath>

using namespace sq::kahler;
using namespace sq::potential;
using sq::CheckReport;

namespace {

ConvexPotential certified(const std::string& text, int n, int m, double radius) {
  ConvexPotential f = from_expression(text, n, m);
  auto r = certify_strict_convexity(f, Box{-radius, radius}, 9);
  REQUIRE(std::holds_alternative<Certificate>(r));
  f.set_certificate(std::get<Certificate>(r));
  return f;
}

std::vector<ConvexPotential> suite() {
  std::vector<double> mu{3.0, -2.0};
  return {builtin_F1(2, 0),
          builtin_F2(mu, 0.5, 2, 0),
          certified("x1^2 + x1*x2 + x2^2", 2, 0, 3.0),
          certified("exp(x1+x2) + exp(x1-x2)", 2, 0, 1.5),
          certified("sqrt(x1^2 + 1) + sqrt(x2^2 + 1) + 0.25*(x1+x2)^2", 1, 1, 3.0)};
}

}  // namespace

TEST_CASE("build_form normalizes odd coefficients") {
  SuperKahlerData d = build_form(builtin_F1(2, 0), 2);
  CHECK(d.odd_a == std::vector<double>{1.0, 1.0});
  CHECK(d.odd_b == std::vector<double>{1.0, 1.0});
  CHECK(d.cross_terms.rows() == 2);
  CHECK(d.cross_terms.cols() == 4);

  std::vector<std::pair<double, double>> odd{{4.0, 4.0}};
  SuperKahlerData e = build_form(builtin_F1(1, 0), 1, odd);
  CHECK(e.odd_a[0] == 1.0);
  CHECK(e.odd_rescaling[0] == 0.5);

  std::vector<std::pair<double, double>> bad{{1.0, 2.0}};
  CHECK_THROWS_AS(build_form(builtin_F1(1, 0), 1, bad), sq::Error);
  std::vector<std::pair<double, double>> negative{{-1.0, -1.0}};
  CHECK_THROWS_AS(build_form(builtin_F1(1, 0), 1, negative), sq::Error);
  CHECK_THROWS_AS(build_form(builtin_F1(1, 0), 2, odd), sq::Error);
}

TEST_CASE("build_form rejects uncertified potentials") {
  ConvexPotential quartic = from_expression("x1^4", 1, 0);
  CHECK(std::holds_alternative<Refutation>(certify_strict_convexity(quartic, Box{-1, 1}, 21)));
  try {
    build_form(quartic, 1);
    FAIL("expected Uncertified");
  } catch (const sq::Error& e) {
    CHECK(e.kind() == sq::ErrorKind::Uncertified);
  }
}

TEST_CASE("axioms hold for the canonical forms") {
  for (const auto& f : suite()) {
    SuperKahlerData d = build_form(f, 2);
    auto pts = sample_points(d.even_dim(), -1.5, 1.5, 50, 7);
    CheckReport r = verify_axioms(d, pts);
    INFO(f.ast().source());
    CHECK(r.passed());
    CHECK(r.find("closedness")->worst_residual < 1e-7);
  }
}

TEST_CASE("closedness fails for an asymmetrized even block") {
  SuperKahlerData d = build_form(builtin_F1(2, 0), 1);
  auto base = d.even_block;
  d.even_block = [base](std::span<const double> x) {
    Eigen::MatrixXd g = base(x);
    g(0, 1) += x[0];
    g(1, 0) -= x[0];
    return g;
  };
  CheckReport r = verify_axioms(d, sample_points(2, -1, 1, 10, 3));
  CHECK_FALSE(r.find("closedness")->passed);
  CHECK(r.find("positivity")->passed);
  CHECK(r.find("consistency")->passed);
}

TEST_CASE("positivity and consistency detect bad data") {
  SuperKahlerData d = build_form(builtin_F1(1, 0), 2);
  d.odd_a[1] = -1.0;
  CheckReport r = verify_axioms(d, sample_points(1, -1, 1, 5, 1));
  CHECK_FALSE(r.find("positivity")->passed);
  CHECK(r.find("positivity")->worst_residual == 1.0);

  SuperKahlerData c = build_form(builtin_F1(1, 0), 1);
  c.cross_terms(0, 1) = 0.25;
  CHECK_FALSE(verify_axioms(c, sample_points(1, -1, 1, 5, 1)).find("consistency")->passed);
}

TEST_CASE("moment map examples") {
  SuperKahlerData d = build_form(builtin_F1(2, 0), 1);
  MomentValue v = moment_map(d, SuperPoint{{1.0, -1.0}, {}, {0.5}, {}});
  CHECK(v.even_part == std::vector<double>{-2.0, 2.0});
  CHECK(v.odd_part == std::vector<double>{1.0});

  // Independent of y and eta.
  MomentValue w = moment_map(d, SuperPoint{{1.0, -1.0}, {7.0, 3.0}, {0.5}, {-2.0}});
  CHECK(w.even_part == v.even_part);
  CHECK(w.odd_part == v.odd_part);

  std::vector<double> mu{3.0, -2.0};
  SuperKahlerData d2 = build_form(builtin_F2(mu, 0.5, 2, 0), 0);
  MomentValue z = moment_map(d2, SuperPoint{{0.0, 0.0}, {}, {}, {}});
  CHECK(z.even_part[0] == doctest::Approx(3.0));
  CHECK(z.even_part[1] == doctest::Approx(-2.0));

  CHECK_THROWS_AS(moment_map(d, SuperPoint{{1.0}, {}, {0.5}, {}}), sq::Error);
}

TEST_CASE("moment identity in even and odd directions") {
  std::vector<std::vector<double>> dirs_u = {{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}, {0.3, -1.2}};
  std::vector<std::vector<double>> dirs_w = {{0.0, 0.0}, {0.0, 0.0}, {1.0, -0.5}, {0.7, 2.0}};
  for (const auto& f : suite()) {
    SuperKahlerData d = build_form(f, 2);
    auto pts = sample_points(2, -1.5, 1.5, 40, 11);
    for (std::size_t i = 0; i < dirs_u.size(); ++i) {
      CheckReport r = verify_moment_identity(d, dirs_u[i], dirs_w[i], pts);
      INFO(f.ast().source());
      CHECK(r.passed());
      CHECK(r.checks[0].worst_residual < 1e-8);
    }
  }
}

TEST_CASE("even image of the moment map matches finite differences of -grad F") {
  std::vector<double> mu{3.0, -2.0};
  SuperKahlerData d = build_form(builtin_F2(mu, 0.5, 2, 0), 0);
  const double h = 1e-5;
  std::vector<double> u{0.4, -0.9};
  for (const auto& x : sample_points(2, -2, 2, 20, 5)) {
    std::vector<double> xp{x[0] + h * u[0], x[1] + h * u[1]}, xm{x[0] - h * u[0], x[1] - h * u[1]};
    auto mp = moment_map(d, SuperPoint{xp, {}, {}, {}}).even_part;
    auto mm = moment_map(d, SuperPoint{xm, {}, {}, {}}).even_part;
    OneForm c = contract(d, x, u, {});
    for (int p = 0; p < 2; ++p) CHECK(std::abs((mp[p] - mm[p]) / (2 * h) - c.dx[p]) < 1e-6);
  }
}

TEST_CASE("Dolbeault identities") {
  SuperKahlerData d1 = build_form(builtin_F1(1, 0), 1);
  std::vector<std::vector<double>> origin{{0.0}};
  CheckReport r1 = dolbeault_check(d1, origin);
  CHECK(r1.passed());
  CHECK(r1.find("quarter_hessian")->worst_residual == 0.0);
  CHECK(r1.find("odd_potential")->worst_residual == 0.0);

  for (const auto& f : suite()) {
    SuperKahlerData d = build_form(f, 3);
    CheckReport r = dolbeault_check(d, sample_points(2, -1.5, 1.5, 30, 13));
    INFO(f.ast().source());
    CHECK(r.passed());
  }

  SuperKahlerData broken = build_form(builtin_F1(1, 0), 2);
  broken.odd_a[0] = 2.0;
  CHECK_FALSE(dolbeault_check(broken, origin).find("odd_potential")->passed);
}

TEST_CASE("sample_points is deterministic") {
  CHECK(sample_points(3, -1, 1, 10, 99) == sample_points(3, -1, 1, 10, 99));
  CHECK(sample_points(3, -1, 1, 10, 99) != sample_points(3, -1, 1, 10, 98));
}
