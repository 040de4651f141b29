#pragma once

#include "grassmann/blade.hpp"
#include "grassmann/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sq::grassmann {

enum class Parity { Even, Odd, Mixed };

const char* to_string(Parity p);

/// Group law on {+, -}; Mixed absorbs.
Parity combine(Parity a, Parity b);

/// Generator naming used when printing. Parsing accepts both families.
enum class Naming { Zeta, XiEta };

/// Element of the complex Grassmann algebra on 2k odd generators with exact
/// coefficients. Zero coefficients are never stored.
class Element {
 public:
  explicit Element(int k);
  Element(const Blade& b, ComplexQ coeff = ComplexQ(1));

  static Element scalar(int k, ComplexQ c);

  int k() const noexcept { return k_; }
  const std::map<std::uint32_t, ComplexQ>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient of `b`, zero when absent.
  ComplexQ coefficient(const Blade& b) const;
  void add_term(const Blade& b, const ComplexQ& c);

  Parity parity() const;

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const ComplexQ& c, const Element& a);
  friend bool operator==(const Element& a, const Element& b) {
    return a.k_ == b.k_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

 private:
  int k_;
  std::map<std::uint32_t, ComplexQ> terms_;
};

/// Bilinear extension of blade_product.
Element multiply(const Element& a, const Element& b);

/// The scalar multiple of the complementary blade with
/// b * star(b) = i^(|P|+|Q| mod 2) * top.
Element star(const Blade& b);

/// Antilinear extension of star: conjugates each coefficient.
Element star_element(const Element& f);

/// Coefficient of the top monomial.
ComplexQ berezin_top(const Element& f);

/// Left odd derivation d/d(g_slot), slot in 1..2k. The Koszul sign counts the
/// generators that precede `slot` in each blade.
Element derivation(int slot, const Element& f);

/// Largest blade degree present; -1 for the zero element.
int filtration_degree(const Element& f);

/// Basis of the common kernel of all 2k derivations, computed by exact
/// elimination over the 2^(2k) blade basis. Throws a resource error when k
/// exceeds `bound`.
std::vector<Element> joint_derivation_kernel(int k, int bound = 6);

/// Parses `coeff * gen gen ...` sums. Generators: zeta<r>, zbar<r>, xi<r>,
/// eta<r>, ztop; the imaginary unit is `i`; products may be parenthesised.
Element parse_element(const std::string& text, int k);

/// Prints in a form parse_element reads back exactly.
std::string print_element(const Element& f, Naming naming = Naming::Zeta);

}  // namespace sq::grassmann
