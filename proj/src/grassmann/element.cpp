#include "grassmann/element.hpp"

#include "common/error.hpp"
#include "grassmann/exact_linalg.hpp"

#include <bit>

namespace sq::grassmann {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
  }
  return "mixed";
}

Parity combine(Parity a, Parity b) {
  if (a == Parity::Mixed || b == Parity::Mixed) return Parity::Mixed;
  return a == b ? Parity::Even : Parity::Odd;
}

Element::Element(int k) : k_(k) {
  if (k < 0 || k > kMaxPairs)
    throw Error(ErrorKind::Resource, "generator-pair count outside [0, 16]");
}

Element::Element(const Blade& b, ComplexQ coeff) : k_(b.k()) {
  if (!coeff.is_zero()) terms_.emplace(b.mask(), std::move(coeff));
}

Element Element::scalar(int k, ComplexQ c) { return Element(Blade::unit(k), std::move(c)); }

ComplexQ Element::coefficient(const Blade& b) const {
  if (b.k() != k_) throw Error(ErrorKind::Dimension, "blade and element differ in k");
  auto it = terms_.find(b.mask());
  return it == terms_.end() ? ComplexQ() : it->second;
}

void Element::add_term(const Blade& b, const ComplexQ& c) {
  if (b.k() != k_) throw Error(ErrorKind::Dimension, "blade and element differ in k");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(b.mask(), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Parity Element::parity() const {
  bool even = false, odd = false;
  for (const auto& [mask, c] : terms_) (std::popcount(mask) % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::Mixed;
  return odd ? Parity::Odd : Parity::Even;
}

Element operator+(const Element& a, const Element& b) {
  if (a.k_ != b.k_) throw Error(ErrorKind::Dimension, "sum of elements over different k");
  Element out = a;
  for (const auto& [mask, c] : b.terms_) out.add_term(Blade(b.k_, mask), c);
  return out;
}

Element operator-(const Element& a, const Element& b) { return a + ComplexQ(-1) * b; }

Element operator*(const ComplexQ& c, const Element& a) {
  Element out(a.k_);
  if (c.is_zero()) return out;
  for (const auto& [mask, coeff] : a.terms_) out.terms_.emplace(mask, c * coeff);
  return out;
}

Element multiply(const Element& a, const Element& b) {
  if (a.k() != b.k()) throw Error(ErrorKind::Dimension, "product of elements over different k");
  Element out(a.k());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto p = blade_product(Blade(a.k(), ma), Blade(b.k(), mb));
      if (!p) continue;
      ComplexQ c = ca * cb;
      if (p->sign < 0) c = -c;
      out.add_term(p->blade, c);
    }
  }
  return out;
}

Element star(const Blade& b) {
  Blade comp = b.complement();
  auto p = blade_product(b, comp);  // disjoint by construction
  ComplexQ factor = i_power_mod2(b.holomorphic_count() + b.antiholomorphic_count());
  if (p->sign < 0) factor = -factor;
  return Element(comp, factor);
}

Element star_element(const Element& f) {
  Element out(f.k());
  for (const auto& [mask, c] : f.terms()) {
    Element s = star(Blade(f.k(), mask));
    out = out + c.conj() * s;
  }
  return out;
}

ComplexQ berezin_top(const Element& f) { return f.coefficient(Blade::top(f.k())); }

Element derivation(int slot, const Element& f) {
  if (slot < 1 || slot > 2 * f.k())
    throw Error(ErrorKind::Dimension, "derivation index " + std::to_string(slot) + " outside [1, 2k]");
  const std::uint32_t bit = 1u << (slot - 1);
  Element out(f.k());
  for (const auto& [mask, c] : f.terms()) {
    if ((mask & bit) == 0) continue;
    int preceding = std::popcount(mask & (bit - 1));
    out.add_term(Blade(f.k(), mask & ~bit), preceding % 2 == 0 ? c : -c);
  }
  return out;
}

int filtration_degree(const Element& f) {
  int deg = -1;
  for (const auto& [mask, c] : f.terms()) deg = std::max(deg, std::popcount(mask));
  return deg;
}

std::vector<Element> joint_derivation_kernel(int k, int bound) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative generator-pair count");
  if (k > bound)
    throw Error(ErrorKind::Resource,
                "k = " + std::to_string(k) + " exceeds the configured bound " + std::to_string(bound));
  const std::size_t dim = std::size_t{1} << (2 * k);
  // One row per (derivation, output blade); column j is blade mask j.
  std::map<std::pair<int, std::uint32_t>, SparseRow> by_output;
  for (int slot = 1; slot <= 2 * k; ++slot) {
    for (std::size_t col = 0; col < dim; ++col) {
      Element image = derivation(slot, Element(Blade(k, static_cast<std::uint32_t>(col))));
      // Derivation images have real coefficients.
      for (const auto& [mask, c] : image.terms()) by_output[{slot, mask}][col] += c.re;
    }
  }
  SparseMatrix rows;
  rows.columns = dim;
  for (auto& [key, row] : by_output) rows.rows.push_back(std::move(row));
  std::vector<Element> basis;
  for (const auto& v : nullspace(rows)) {
    Element e(k);
    for (const auto& [col, q] : v) e.add_term(Blade(k, static_cast<std::uint32_t>(col)), ComplexQ(q));
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace sq::grassmann
