#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace sq::grassmann {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Exact complex number with rational real and imaginary parts.
struct ComplexQ {
  Rational re{0};
  Rational im{0};

  ComplexQ() = default;
  ComplexQ(Rational r) : re(std::move(r)) {}
  ComplexQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  ComplexQ(int r) : re(r) {}

  static ComplexQ i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  ComplexQ conj() const { return {re, -im}; }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  friend ComplexQ operator+(const ComplexQ& a, const ComplexQ& b) { return {a.re + b.re, a.im + b.im}; }
  friend ComplexQ operator-(const ComplexQ& a, const ComplexQ& b) { return {a.re - b.re, a.im - b.im}; }
  friend ComplexQ operator-(const ComplexQ& a) { return {-a.re, -a.im}; }
  friend ComplexQ operator*(const ComplexQ& a, const ComplexQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexQ operator/(const ComplexQ& a, const ComplexQ& b) {
    Rational d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  ComplexQ& operator+=(const ComplexQ& o) { re += o.re; im += o.im; return *this; }
  ComplexQ& operator-=(const ComplexQ& o) { re -= o.re; im -= o.im; return *this; }
  ComplexQ& operator*=(const ComplexQ& o) { return *this = *this * o; }

  friend bool operator==(const ComplexQ& a, const ComplexQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const ComplexQ& a, const ComplexQ& b) { return !(a == b); }
};

/// i^e with e reduced mod 2 into {1, i}, the convention used for super
/// positivity and for the star operator.
inline ComplexQ i_power_mod2(int e) { return (e % 2 == 0) ? ComplexQ(1) : ComplexQ::i(); }

/// Renders a complex rational as `a`, `b*i`, or `(a+b*i)`.
std::string to_string(const ComplexQ& c);

/// Renders a rational as `p` or `p/q`.
std::string to_string(const Rational& r);

}  // namespace sq::grassmann
