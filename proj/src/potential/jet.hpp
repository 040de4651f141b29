#pragma once

#include <Eigen/Dense>

namespace sq::potential {

/// Second-order forward-mode jet: value, gradient and Hessian of a scalar
/// function with respect to the potential's input variables.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;

  static Jet2 constant(double c, int dim) {
    return {c, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
  }
  static Jet2 variable(double x, int index, int dim) {
    Jet2 j = constant(x, dim);
    j.gradient[index] = 1.0;
    return j;
  }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.gradient + b.gradient, a.hessian + b.hessian};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.gradient - b.gradient, a.hessian - b.hessian};
}

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.gradient, -a.hessian}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Eigen::MatrixXd cross = a.gradient * b.gradient.transpose();
  return {a.value * b.value, b.value * a.gradient + a.value * b.gradient,
          b.value * a.hessian + a.value * b.hessian + cross + cross.transpose()};
}

/// f(u) given f(u.value), f'(u.value), f''(u.value).
inline Jet2 chain(const Jet2& u, double f, double df, double d2f) {
  return {f, df * u.gradient, df * u.hessian + d2f * (u.gradient * u.gradient.transpose())};
}

}  // namespace sq::potential
