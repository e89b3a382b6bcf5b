#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace deblog {

/// Dense univariate polynomial c_0 + c_1 t + ... + c_d t^d.
///
/// Coefficients live in an Eigen column vector so the same type serves as
/// the unknown vector of interpolation systems (solved in long double when
/// conditioning matters) and as the evaluation-time representation.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coefficients::Zero(1)) {}
  explicit Polynomial(Coefficients coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = Coefficients::Zero(1);
  }

  static Polynomial constant(Scalar c) {
    Coefficients v(1);
    v(0) = c;
    return Polynomial(v);
  }

  static Polynomial monomial(Scalar c, Eigen::Index power) {
    Coefficients v = Coefficients::Zero(power + 1);
    v(power) = c;
    return Polynomial(v);
  }

  Eigen::Index degree() const { return coeffs_.size() - 1; }
  const Coefficients& coefficients() const { return coeffs_; }
  Scalar coefficient(Eigen::Index i) const {
    return i < coeffs_.size() ? coeffs_(i) : Scalar(0);
  }

  Scalar operator()(Scalar t) const {
    Scalar acc = coeffs_(coeffs_.size() - 1);
    for (Eigen::Index i = coeffs_.size() - 2; i >= 0; --i) acc = acc * t + coeffs_(i);
    return acc;
  }

  /// r-th derivative evaluated at t, without materializing the derivative.
  Scalar derivative(Scalar t, int order) const {
    if (order == 0) return (*this)(t);
    if (order > degree()) return Scalar(0);
    Scalar acc(0);
    for (Eigen::Index i = coeffs_.size() - 1; i >= order; --i) {
      Scalar falling(1);
      for (int r = 0; r < order; ++r) falling *= Scalar(i - r);
      acc = acc * t + falling * coeffs_(i);
    }
    return acc;
  }

  Polynomial derivative() const {
    if (degree() == 0) return Polynomial();
    Coefficients d(degree());
    for (Eigen::Index i = 1; i <= degree(); ++i) d(i - 1) = Scalar(i) * coeffs_(i);
    return Polynomial(d);
  }

  /// Antiderivative vanishing at t = 0.
  Polynomial antiderivative() const {
    Coefficients a = Coefficients::Zero(coeffs_.size() + 1);
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) a(i + 1) = coeffs_(i) / Scalar(i + 1);
    return Polynomial(a);
  }

  Scalar integrate(Scalar lo, Scalar hi) const {
    const Polynomial a = antiderivative();
    return a(hi) - a(lo);
  }

  template <typename Other>
  Polynomial<Other> cast() const {
    return Polynomial<Other>(coeffs_.template cast<Other>());
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Coefficients c = Coefficients::Zero(std::max(a.coeffs_.size(), b.coeffs_.size()));
    c.head(a.coeffs_.size()) += a.coeffs_;
    c.head(b.coeffs_.size()) += b.coeffs_;
    return Polynomial(c);
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Coefficients c = Coefficients::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i)
      for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) c(i + j) += a.coeffs_(i) * b.coeffs_(j);
    return Polynomial(c);
  }

  friend Polynomial operator*(Scalar s, const Polynomial& p) { return Polynomial(s * p.coeffs_); }

 private:
  Coefficients coeffs_;
};

}  // namespace deblog
