#include "doctest.h"

#include "common/error.hpp"
#include "grassmann/element.hpp"
#include "grassmann/exact_linalg.hpp"

#include <random>

using namespace sq::grassmann;

namespace {

// Sign of the permutation that sorts `seq`, by explicit bubble sort. Test-side
// oracle for blade_product.
int bubble_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = 0; j + 1 < seq.size() - i; ++j)
      if (seq[j] > seq[j + 1]) {
        std::swap(seq[j], seq[j + 1]);
        sign = -sign;
      }
  return sign;
}

Element random_element(std::mt19937_64& rng, int k, int max_terms, int parity = -1) {
  const std::uint32_t dim = 1u << (2 * k);
  std::uniform_int_distribution<std::uint32_t> blade(0, dim - 1);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), nterms(1, max_terms);
  Element e(k);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    std::uint32_t mask = blade(rng);
    if (parity >= 0 && std::popcount(mask) % 2 != parity) continue;
    e.add_term(Blade(k, mask), ComplexQ(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
  }
  return e;
}

Element gen(int k, int slot) { return Element(Blade::generator(k, slot)); }

}  // namespace

TEST_CASE("blade_product examples") {
  const int k = 2;
  Blade x1 = Blade::generator(k, 1), x2 = Blade::generator(k, 2);
  Blade x12 = Blade::from_indices(k, {1, 2});
  CHECK_FALSE(blade_product(x12, x2).has_value());
  auto p = blade_product(x2, x1);
  REQUIRE(p);
  CHECK(p->sign == -1);
  CHECK(p->blade == x12);
  p = blade_product(x1, x2);
  REQUIRE(p);
  CHECK(p->sign == 1);
  CHECK_THROWS_AS(blade_product(x1, Blade::generator(3, 1)), sq::Error);
  CHECK_THROWS_AS(Blade::from_indices(k, {2, 1}), sq::Error);
}

TEST_CASE("blade_product sign matches permutation parity, exhaustive k <= 3") {
  for (int k = 1; k <= 3; ++k) {
    const std::uint32_t dim = 1u << (2 * k);
    for (std::uint32_t a = 0; a < dim; ++a)
      for (std::uint32_t b = 0; b < dim; ++b) {
        Blade ba(k, a), bb(k, b);
        auto p = blade_product(ba, bb);
        if (a & b) {
          CHECK_FALSE(p.has_value());
          continue;
        }
        std::vector<int> seq = ba.indices();
        for (int s : bb.indices()) seq.push_back(s);
        REQUIRE(p);
        CHECK(p->sign == bubble_sign(seq));
        CHECK(p->blade.mask() == (a | b));
      }
  }
}

TEST_CASE("multiply examples") {
  const int k = 2;
  Element one = Element::scalar(k, 1);
  CHECK(multiply(one + gen(k, 1), one - gen(k, 1)) == one);
  Element s = gen(k, 1) + gen(k, 2);
  CHECK(multiply(s, s).is_zero());
  Element a = ComplexQ(2) * gen(k, 1), b = ComplexQ(3) * gen(k, 2);
  CHECK(multiply(a, b) == Element(Blade::from_indices(k, {1, 2}), ComplexQ(6)));
  CHECK_THROWS_AS(multiply(gen(1, 1), gen(2, 1)), sq::Error);
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 4;
    Element a = random_element(rng, k, 6), b = random_element(rng, k, 6), c = random_element(rng, k, 6);
    REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
  }
}

TEST_CASE("super-commutativity, exhaustive over blades for k <= 3") {
  for (int k = 1; k <= 3; ++k) {
    const std::uint32_t dim = 1u << (2 * k);
    for (std::uint32_t a = 0; a < dim; ++a)
      for (std::uint32_t b = 0; b < dim; ++b) {
        Element ea(Blade(k, a)), eb(Blade(k, b));
        const int sign = (std::popcount(a) * std::popcount(b)) % 2 ? -1 : 1;
        REQUIRE(multiply(ea, eb) == ComplexQ(sign) * multiply(eb, ea));
      }
  }
}

TEST_CASE("degree-one elements square to zero") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 4;
    Element z(k);
    std::uniform_int_distribution<int> c(-7, 7);
    for (int s = 1; s <= 2 * k; ++s) z.add_term(Blade::generator(k, s), ComplexQ(c(rng), c(rng)));
    CHECK(multiply(z, z).is_zero());
  }
}

TEST_CASE("star examples") {
  Element s = star(Blade::generator(1, 1));
  CHECK(s == Element(Blade::generator(1, 2), ComplexQ::i()));
  for (int k = 0; k <= 3; ++k) {
    CHECK(star(Blade::unit(k)) == Element(Blade::top(k)));
    CHECK(star(Blade::top(k)) == Element::scalar(k, 1));
  }
}

TEST_CASE("star defining relation, exhaustive k <= 4") {
  for (int k = 0; k <= 4; ++k) {
    const std::uint32_t dim = 1u << (2 * k);
    for (std::uint32_t m = 0; m < dim; ++m) {
      Blade b(k, m);
      Element lhs = multiply(Element(b), star(b));
      Element rhs(Blade::top(k), i_power_mod2(b.degree()));
      REQUIRE(lhs == rhs);
      // The star is supported on the complementary blade only.
      REQUIRE(star(b).terms().size() == 1);
      REQUIRE(star(b).terms().begin()->first == b.complement().mask());
    }
  }
}

TEST_CASE("star_element conjugates coefficients") {
  Element f(Blade::generator(1, 1), ComplexQ(2, 1));
  Element expected(Blade::generator(1, 2), ComplexQ(2, -1) * ComplexQ::i());
  CHECK(star_element(f) == expected);
  CHECK(star_element(Element::scalar(2, ComplexQ(Rational(3, 2)))) == Element(Blade::top(2), ComplexQ(Rational(3, 2))));
  CHECK(star_element(Element(2)).is_zero());
}

TEST_CASE("berezin_top") {
  Element f = ComplexQ(5) * Element(Blade::top(1)) + ComplexQ(3) * gen(1, 1);
  CHECK(berezin_top(f) == ComplexQ(5));
  CHECK(berezin_top(gen(1, 1)) == ComplexQ(0));
  CHECK(berezin_top(Element(1)) == ComplexQ(0));
}

TEST_CASE("derivation examples and errors") {
  const int k = 1;
  Element x12(Blade::from_indices(k, {1, 2}));
  CHECK(derivation(1, x12) == gen(k, 2));
  CHECK(derivation(2, x12) == ComplexQ(-1) * gen(k, 1));
  CHECK(derivation(1, Element::scalar(k, 1)).is_zero());
  CHECK(derivation(1, gen(k, 1)) == Element::scalar(k, 1));
  CHECK_THROWS_AS(derivation(0, x12), sq::Error);
  CHECK_THROWS_AS(derivation(3, x12), sq::Error);
}

TEST_CASE("derivations: no top term, square to zero, lower the filtration") {
  for (int k = 1; k <= 3; ++k) {
    const std::uint32_t dim = 1u << (2 * k);
    for (std::uint32_t m = 0; m < dim; ++m) {
      Element f(Blade(k, m));
      for (int i = 1; i <= 2 * k; ++i) {
        Element d = derivation(i, f);
        REQUIRE(berezin_top(d).is_zero());
        REQUIRE(derivation(i, d).is_zero());
        if (!d.is_zero()) REQUIRE(filtration_degree(d) == filtration_degree(f) - 1);
      }
    }
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Element f = random_element(rng, 2, 8);
    for (int i = 1; i <= 4; ++i) CHECK(derivation(i, derivation(i, f)).is_zero());
  }
}

TEST_CASE("filtration degree") {
  const int k = 1;
  Element f = Element(Blade::from_indices(k, {1, 2})) + gen(k, 1);
  CHECK(filtration_degree(f) == 2);
  CHECK(filtration_degree(Element(k)) == -1);
}

TEST_CASE("joint derivation kernel is span{1} for k <= 4") {
  for (int k = 0; k <= 4; ++k) {
    auto basis = joint_derivation_kernel(k);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == Element::scalar(k, 1));
  }
  CHECK_THROWS_AS(joint_derivation_kernel(7), sq::Error);
  CHECK_THROWS_AS(joint_derivation_kernel(3, 2), sq::Error);
}

TEST_CASE("exact nullspace on a small system") {
  SparseMatrix m;
  m.columns = 3;
  m.rows = {SparseRow{{0, Rational(1)}, {1, Rational(2)}}, SparseRow{{1, Rational(1)}, {2, Rational(-1)}}};
  auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  // x0 + 2 x1 = 0, x1 = x2  ->  (-2, 1, 1)
  CHECK(ns[0].at(2) == 1);
  CHECK(ns[0].at(1) == 1);
  CHECK(ns[0].at(0) == -2);
  CHECK(rank(m) == 2);
}

TEST_CASE("parity") {
  CHECK(gen(2, 1).parity() == Parity::Odd);
  CHECK(Element(Blade::from_indices(2, {1, 3})).parity() == Parity::Even);
  CHECK((gen(2, 1) + Element::scalar(2, 1)).parity() == Parity::Mixed);
  CHECK(combine(Parity::Odd, Parity::Odd) == Parity::Even);
  CHECK(combine(Parity::Even, Parity::Odd) == Parity::Odd);
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 3;
    Element f = random_element(rng, k, 5);
    for (Naming n : {Naming::Zeta, Naming::XiEta}) {
      std::string text = print_element(f, n);
      INFO(text);
      REQUIRE(parse_element(text, k) == f);
    }
  }
}

TEST_CASE("parse examples") {
  Element f = parse_element("5*ztop + 3*zeta1", 1);
  CHECK(berezin_top(f) == ComplexQ(5));
  CHECK(berezin_top(parse_element("zeta1", 1)) == ComplexQ(0));
  CHECK(berezin_top(parse_element("(zeta1)*(i*zbar1)", 1)) == ComplexQ::i());
  CHECK(parse_element("xi1*eta1", 1) == parse_element("zeta1*zbar1", 1));
  CHECK(parse_element("0.5*xi2 - 1/2*xi2", 2).is_zero());
  CHECK(print_element(parse_element("zbar1*zeta1", 1)) == "-zeta1*zbar1");
  CHECK_THROWS_AS(parse_element("zeta2", 1), sq::SyntaxError);
  CHECK_THROWS_AS(parse_element("zeta1 +", 1), sq::SyntaxError);
  CHECK_THROWS_AS(parse_element("zeta1 / zeta1", 1), sq::SyntaxError);
}
