#include "doctest.h"

#include "common/error.hpp"
#include "reps/reps.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sq::reps;
using sq::Weight;
using sq::bergman::Occurrence;
using namespace sq::potential;

namespace {

IrrepLabel label(std::vector<std::int64_t> t, std::vector<double> f, int p) { return IrrepLabel{Weight{t, f}, p}; }

IrrepLabel random_label(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> i(-50, 50);
  // Flat parts on a dyadic grid so sums are exact.
  return label({i(rng), i(rng)}, {i(rng) / 8.0}, i(rng) % 2 ? -1 : 1);
}

}  // namespace

TEST_CASE("tensor and parity switch") {
  CHECK(tensor(label({1, 2}, {}, 1), label({3, -1}, {}, -1)) == label({4, 1}, {}, -1));
  const IrrepLabel zero = label({0, 0}, {}, 1);
  const IrrepLabel x = label({5, -7}, {}, -1);
  CHECK(tensor(zero, x) == x);
  CHECK(tensor(label({3, 2}, {}, -1), label({-3, -2}, {}, -1)) == zero);
  CHECK(pi_switch(label({2}, {}, 1)) == label({2}, {}, -1));
  CHECK(pi_switch(pi_switch(x)) == x);
  CHECK(pi_switch(x).weight == x.weight);
  CHECK_THROWS_AS(tensor(label({1}, {}, 1), label({1, 2}, {}, 1)), sq::Error);
}

TEST_CASE("labels form an Abelian group") {
  std::mt19937_64 rng(17);
  const IrrepLabel e = label({0, 0}, {0.0}, 1);
  for (int t = 0; t < 200; ++t) {
    IrrepLabel a = random_label(rng), b = random_label(rng), c = random_label(rng);
    CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));
    CHECK(tensor(a, b) == tensor(b, a));
    CHECK(tensor(a, e) == a);
    IrrepLabel inv{Weight{{-a.weight.torus[0], -a.weight.torus[1]}, {-a.weight.flat[0]}}, a.parity};
    CHECK(tensor(a, inv) == e);
  }
}

TEST_CASE("characters") {
  Weight zero{{0, 0}, {0.0}};
  CHECK(character_eval(zero, GroupPoint{{0.3, 0.7}, {2.0}}) == std::complex<double>(1.0, 0.0));
  std::complex<double> half = character_eval(Weight{{1}, {}}, GroupPoint{{0.5}, {}});
  CHECK(std::abs(half - std::complex<double>(-1.0, 0.0)) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(-3, 3);
  std::uniform_int_distribution<int> k(-10, 10);
  for (int t = 0; t < 200; ++t) {
    Weight l{{k(rng), k(rng)}, {r(rng)}}, m{{k(rng), k(rng)}, {r(rng)}};
    Weight sum{{l.torus[0] + m.torus[0], l.torus[1] + m.torus[1]}, {l.flat[0] + m.flat[0]}};
    GroupPoint g{{r(rng), r(rng)}, {r(rng)}};
    CHECK(std::abs(character_eval(l, g) * character_eval(m, g) - character_eval(sum, g)) < 1e-12);
    CHECK(std::abs(std::abs(character_eval(l, g)) - 1.0) < 1e-15);
    GroupPoint shifted{{g.torus[0] + k(rng), g.torus[1] + k(rng)}, g.flat};
    CHECK(std::abs(character_eval(l, g) - character_eval(l, shifted)) < 1e-12);
  }
  CHECK_THROWS_AS(character_eval(zero, GroupPoint{{0.1}, {0.0}}), sq::Error);
}

TEST_CASE("weight box enumeration") {
  WeightBox box{{{-1, 0, 1}}, {{-0.5, 2.0}}};
  auto ws = box.enumerate();
  REQUIRE(ws.size() == 6);
  CHECK(ws[0] == Weight{{-1}, {-0.5}});
  CHECK(ws[1] == Weight{{-1}, {2.0}});
  CHECK(ws[5] == Weight{{1}, {2.0}});
  CHECK(WeightBox{{{1, 2}}, {{}}}.enumerate().empty());
}

TEST_CASE("occurrences") {
  WeightBox box{{{-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}}, {}};
  OccurrenceReport r = occurrences(builtin_F1(2, 0), box);
  REQUIRE(r.entries.size() == 50);
  for (const auto& e : r.entries) {
    if (e.label.parity == 1) CHECK(e.verdict == Occurrence::Occurs);
    else CHECK(e.verdict == Occurrence::DoesNotOccur);
  }
  CHECK(r.inconclusive.empty());
  CHECK(r.discrepancies.empty());

  std::vector<double> mu{3.0, -2.0};
  WeightBox near{{{1, 2, 3, 4, 5}, {-4, -3, -2, -1, 0}}, {}};
  OccurrenceReport r2 = occurrences(builtin_F2(mu, 1.5, 2, 0), near, {}, 2);
  int count = 0;
  for (const auto& e : r2.entries) {
    if (e.verdict != Occurrence::Occurs) continue;
    ++count;
    CHECK(e.label.parity == 1);
    CHECK(std::abs(e.label.weight.torus[0] - 3) <= 1);
    CHECK(std::abs(e.label.weight.torus[1] + 2) <= 1);
  }
  CHECK(count == 9);
  CHECK(r2.inconclusive.empty());

  CHECK_THROWS_AS(occurrences(from_expression("x1^2", 1, 0), WeightBox{{{0}}, {}}), sq::Error);
  CHECK_THROWS_AS(occurrences(builtin_F1(2, 0), WeightBox{{{0}}, {}}), sq::Error);
}

TEST_CASE("occurrence results do not depend on the thread count") {
  std::vector<double> mu{0.0, 1.0};
  ConvexPotential f = builtin_F2(mu, 1.7, 2, 0);
  WeightBox box{{{-2, -1, 0, 1, 2}, {-1, 0, 1, 2, 3}}, {}};
  OccurrenceReport a = occurrences(f, box, {}, 1), b = occurrences(f, box, {}, 4);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].verdict == b.entries[i].verdict);
    if (!a.entries[i].data.points.empty())
      CHECK(a.entries[i].data.points[0].integral.log_truncations ==
            b.entries[i].data.points[0].integral.log_truncations);
  }
}

TEST_CASE("Gelfand model check") {
  WeightBox box{{{-1, 0, 1}}, {{-0.5, 1.75}}};
  ModelReport m = gelfand_model_check(builtin_F1(1, 1), box);
  CHECK(m.confirmed);
  REQUIRE(m.labels.size() == 12);
  for (const auto& l : m.labels) {
    CHECK(l.confirmed);
    CHECK(l.multiplicity == 1);
  }
  // Attainment point of -F1' is -lambda / 2.
  CHECK(std::abs(m.labels[0].attainment[0] - 0.5) < 1e-12);
  CHECK(std::abs(m.labels[0].attainment[1] - 0.25) < 1e-12);
  CHECK(m.monotonicity_margin > 1.9);

  std::vector<double> mu{3.0};
  ModelReport bad = gelfand_model_check(builtin_F2(mu, 0.5, 1, 0), WeightBox{{{2, 3, 4}}, {}});
  CHECK_FALSE(bad.confirmed);
  CHECK(bad.labels[2].confirmed);
  CHECK_FALSE(bad.labels[0].confirmed);

  ModelReport empty = gelfand_model_check(builtin_F1(1, 1), WeightBox{{{}}, {{0.0}}});
  CHECK(empty.confirmed);
  CHECK(empty.labels.empty());
}

TEST_CASE("u_B membership examples") {
  SuperHilbertSample v{1, 1, Eigen::MatrixXcd::Zero(2, 2)};
  v.B(0, 0) = 1.0;
  v.B(1, 1) = {0.0, 1.0};
  v.validate();
  CHECK(u_B_membership(Eigen::MatrixXcd::Zero(2, 2), v) == 0.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
  u(0, 0) = u(1, 1) = {0.0, 1.0};
  CHECK(u_B_membership(u, v) < 1e-15);

  std::mt19937_64 rng(8);
  SuperHilbertSample w = random_sample(3, 2, rng);
  Eigen::MatrixXcd generic = Eigen::MatrixXcd::Random(5, 5);
  generic.topRightCorner(3, 2).setZero();
  generic.bottomLeftCorner(2, 3).setZero();
  CHECK(u_B_membership(generic, w) > 1e-3);

  CHECK_THROWS_AS(u_B_membership(Eigen::MatrixXcd::Ones(2, 2), v), sq::Error);
  CHECK_THROWS_AS(u_B_membership(Eigen::MatrixXcd::Zero(3, 3), v), sq::Error);

  SuperHilbertSample broken = v;
  broken.B(1, 1) = {0.0, -1.0};
  CHECK_THROWS_AS(broken.validate(), sq::Error);
  broken.B(1, 1) = 1.0;
  CHECK_THROWS_AS(broken.validate(), sq::Error);
}

TEST_CASE("u_B bases have the dimensions of u(p) + u(q) and 2pq") {
  std::mt19937_64 rng(21);
  for (int p = 0; p <= 8; p += 2)
    for (int q = 0; q <= 8; q += 3) {
      if (p + q == 0) continue;
      SuperHilbertSample v = random_sample(p, q, rng);
      v.validate();
      auto even = u_B_basis(v, 0), odd = u_B_basis(v, 1);
      CHECK(even.size() == static_cast<std::size_t>(p * p + q * q));
      CHECK(odd.size() == static_cast<std::size_t>(2 * p * q));
      for (int t = 0; t < 3; ++t) {
        CHECK(u_B_membership(random_u_B_member(v, 0, rng), v) < kMembershipTolerance);
        CHECK(u_B_membership(random_u_B_member(v, 1, rng), v) < kMembershipTolerance);
      }
    }
}

TEST_CASE("odd part acts trivially") {
  std::mt19937_64 rng(4);
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {4, 4}, {8, 8}}) {
    SuperHilbertSample v = random_sample(p, q, rng);
    sq::CheckReport r = odd_triviality_check(v, 100, 99);
    INFO(p, "|", q);
    CHECK(r.passed());
    CHECK(r.find("odd_square_zero")->worst_residual < 1e-10);
  }

  SuperHilbertSample c11{1, 1, Eigen::MatrixXcd::Zero(2, 2)};
  c11.B(0, 0) = 1.0;
  c11.B(1, 1) = {0.0, 1.0};
  sq::CheckReport r = odd_triviality_check(c11, 50, 1);
  CHECK(r.passed());
  // Unit odd A in u_B has |a| = |b| = 1/sqrt(2) and A^2 = ab I.
  CHECK(std::abs(r.find("unit_square_gap")->worst_residual - std::sqrt(0.5)) < 1e-9);

  SuperHilbertSample purely_even = random_sample(3, 0, rng);
  CHECK(odd_triviality_check(purely_even, 10, 1).passed());
  CHECK_THROWS_AS(odd_triviality_check(random_sample(9, 1, rng), 10, 1), sq::Error);
}

TEST_CASE("indefinite forms admit odd nilpotents") {
  // Negative control: with indefinite even and odd blocks, X = all-ones gives
  // X^* E X = 0 and X H X^* = 0, so A^2 = 0 has nonzero odd solutions.
  SuperHilbertSample v{2, 2, Eigen::MatrixXcd::Zero(4, 4)};
  v.B(0, 0) = 1.0;
  v.B(1, 1) = -1.0;
  v.B(2, 2) = {0.0, 1.0};
  v.B(3, 3) = {0.0, -1.0};
  CHECK_THROWS_AS(v.validate(), sq::Error);
  sq::CheckReport r = odd_triviality_check(v, 50, 5);
  CHECK_FALSE(r.find("odd_square_zero")->passed);
  CHECK_FALSE(r.find("unit_square_gap")->passed);
  CHECK(r.find("odd_square_identity")->passed);
}

TEST_CASE("exterior algebra module checks") {
  for (int k = 1; k <= 4; ++k) {
    sq::CheckReport r = lambda_module_checks(k);
    INFO(k);
    CHECK(r.passed());
    CHECK(r.checks.size() == 3);
  }
  CHECK_THROWS_AS(lambda_module_checks(0), sq::Error);
  CHECK_THROWS_AS(lambda_module_checks(5), sq::Error);
}
