#pragma once

#include "deblog/polynomial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <tuple>
#include <vector>

namespace deblog {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point of the chart (x, theta_1, ..., theta_{2n-1}) on Z x (-1, 1).
class ChartPoint {
 public:
  ChartPoint(double x, Eigen::VectorXd thetas);

  double x() const { return x_; }
  const Eigen::VectorXd& thetas() const { return thetas_; }
  double theta(int i) const { return thetas_(i - 1); }  // 1-based, as dtheta_i
  int dimension() const { return static_cast<int>(thetas_.size()) + 1; }

  ChartPoint with_x(double x) const { return {x, thetas_}; }
  ChartPoint with_theta(int i, double value) const;

 private:
  double x_;
  Eigen::VectorXd thetas_;
};

/// Coefficient function of a differential form.
///
/// Two representations: an exact trigonometric polynomial
///   sum_j c_j x^{p_j} trig_j(k_j . theta),   trig in {cos, sin},
/// which admits exact products, x-derivatives and torus integrals, and an
/// opaque evaluator supplying x-derivatives up to a declared order. Sums and
/// products of trig polynomials stay exact; anything touching an opaque field
/// becomes opaque. Constants are trig polynomials with the single mode
/// (p = 0, cos, k = 0).
class ScalarField {
 public:
  enum class Mode { Cos, Sin };

  /// Evaluates d^order/dx^order of the field at a point.
  using Evaluator = std::function<double(const ChartPoint&, int order)>;

  ScalarField() = default;  // identically zero
  ScalarField(double c);    // NOLINT: implicit constant promotion keeps form tables terse

  static ScalarField constant(double c) { return ScalarField(c); }
  static ScalarField x_power(double c, int power);
  /// c x^power cos(wave . theta); wave indexed by theta_1, theta_2, ...
  static ScalarField cos_mode(double c, std::vector<int> wave, int power = 0);
  static ScalarField sin_mode(double c, std::vector<int> wave, int power = 0);
  static ScalarField opaque(Evaluator eval, int max_order);

  bool is_polynomial() const { return opaque_ == nullptr; }
  bool is_constant() const;
  bool is_zero() const;
  /// Largest power of x present (polynomial representation only).
  int x_degree() const;
  /// True if no coefficient depends on x.
  bool is_x_independent() const;
  /// Highest x-derivative order available; unbounded for trig polynomials.
  int max_derivative_order() const;

  double evaluate(const ChartPoint& p, int x_order = 0) const;
  double operator()(const ChartPoint& p) const { return evaluate(p, 0); }

  /// Integral over the angle torus T^d (d = number of angles), returned as an
  /// exact polynomial in x. Throws UnsupportedError for opaque fields.
  Polynomial<double> integrate_over_torus(int num_angles) const;

  ScalarField operator-() const;
  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + (-b); }
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  ScalarField& operator+=(const ScalarField& o) { return *this = *this + o; }

 private:
  struct Key {
    int power;
    Mode mode;
    std::vector<int> wave;  // trailing zeros trimmed; first nonzero entry positive
    auto tie() const { return std::tie(power, mode, wave); }
    bool operator<(const Key& o) const { return tie() < o.tie(); }
  };

  void add_term(Key key, double c);
  static ScalarField make_opaque(Evaluator eval, int max_order);
  Evaluator as_evaluator() const;

  std::map<Key, double> terms_;
  std::shared_ptr<const Evaluator> opaque_;
  int opaque_order_ = 0;
};

inline bool is_zero(const ScalarField& f) { return f.is_zero(); }
inline bool is_zero(double v) { return v == 0.0; }

}  // namespace deblog
