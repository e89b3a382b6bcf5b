#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deblog/errors.hpp"
#include "deblog/forms.hpp"

#include <cmath>
#include <random>

using namespace deblog;
using doctest::Approx;

namespace {

constexpr BasisMask kDx = 1;
BasisMask dtheta(int i) { return BasisMask{1} << i; }

ChartPoint point(double x, std::vector<double> thetas) {
  return {x, Eigen::Map<Eigen::VectorXd>(thetas.data(), static_cast<Eigen::Index>(thetas.size()))};
}

FormValue random_form(std::mt19937_64& rng, int dim, int degree) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  FormValue f(dim, degree);
  for (BasisMask m = 0; m < (BasisMask{1} << dim); ++m)
    if (mask_degree(m) == degree) f.add(m, coef(rng));
  return f;
}

}  // namespace

TEST_CASE("wedge examples") {
  const auto dx = FormValue::basis(4, {0});
  const auto dt1 = FormValue::basis(4, {1});
  const auto e = wedge(dx, dt1);
  CHECK(e.coefficient(kDx | dtheta(1)) == 1.0);
  CHECK(wedge(dx, dx).is_zero());

  const auto w = FormValue::basis(4, {0, 1}) + FormValue::basis(4, {2, 3});
  const auto w2 = wedge(w, w);
  CHECK(w2.terms().size() == 1);
  CHECK(w2.coefficient(0b1111) == 2.0);
  CHECK(top_coefficient(w2) == 2.0);

  CHECK_THROWS_AS(wedge(w2, dx), InputError);
  CHECK(FormValue::basis(4, {1, 0}).coefficient(0b11) == -1.0);
}

TEST_CASE("wedge_power examples") {
  const auto a = FormValue::basis(4, {0, 1});
  CHECK(max_abs_difference(wedge_power(a, 1), a) == 0.0);
  CHECK(wedge_power(a, 2).is_zero());
  const auto w = a + FormValue::basis(4, {2, 3});
  CHECK(top_coefficient(wedge_power(w, 2)) == 2.0);
  const auto one = wedge_power(w, 0);
  CHECK(one.degree() == 0);
  CHECK(one.coefficient(0) == 1.0);
  CHECK_THROWS_AS(wedge_power(w, 3), InputError);
  CHECK_THROWS_AS(wedge_power(w, -1), InputError);
}

TEST_CASE("evaluate examples") {
  const auto c = FormField::basis(2, {0, 1}, ScalarField(3.5));
  CHECK(evaluate(c, point(0.3, {1.0})).coefficient(0b11) == 3.5);
  const auto x2 = FormField::basis(2, {0, 1}, ScalarField::x_power(1.0, 2));
  CHECK(evaluate(x2, point(0.5, {2.0})).coefficient(0b11) == Approx(0.25).epsilon(1e-15));
  const auto cos1 = FormField::basis(2, {1}, ScalarField::cos_mode(1.0, {1}));
  CHECK(evaluate(cos1, point(0.1, {0.0})).coefficient(dtheta(1)) == 1.0);
  CHECK(evaluate(FormField::basis(4, {0, 1}) + FormField::basis(4, {2, 3}), point(0.0, {0, 0, 0}))
            .terms()
            .size() == 2);
}

TEST_CASE("top_coefficient") {
  CHECK(top_coefficient(FormValue::basis(4, {0, 1, 2, 3})) == 1.0);
  CHECK(top_coefficient(FormValue::basis(4, {0, 1, 2, 3}, 2.0)) == 2.0);
  const auto w = FormField::basis(4, {0, 1}) + FormField::basis(4, {2, 3});
  CHECK(top_coefficient(evaluate(wedge_power(w, 2), point(0.2, {0.1, 0.2, 0.3}))) == 2.0);
  CHECK_THROWS_AS(top_coefficient(FormValue::basis(4, {0, 1})), InputError);
}

TEST_CASE("contract examples") {
  VectorValue d_theta1 = VectorValue::Zero(4);
  d_theta1(1) = 1.0;
  VectorValue d_x = VectorValue::Zero(4);
  d_x(0) = 1.0;
  CHECK(contract(d_theta1, FormValue::basis(4, {1})).coefficient(0) == 1.0);
  CHECK(contract(d_theta1, FormValue::basis(4, {2, 3})).is_zero());
  const auto r = contract(d_x, FormValue::basis(4, {0, 1}));
  CHECK(r.degree() == 1);
  CHECK(r.coefficient(dtheta(1)) == 1.0);
  CHECK(contract(d_theta1, FormValue::basis(4, {0, 1})).coefficient(kDx) == -1.0);
  CHECK_THROWS_AS(contract(d_x, FormValue::one(4)), InputError);
}

TEST_CASE("exterior derivative residual") {
  const auto p = point(0.3, {0.4, 1.1, 2.0});
  CHECK(exterior_derivative_residual(FormField::basis(4, {2, 3}, ScalarField(2.0)), p) < 1e-12);
  const auto x_dt1 = FormField::basis(4, {1}, ScalarField::x_power(1.0, 1));
  CHECK(exterior_derivative_residual(x_dt1, p) == Approx(1.0).epsilon(1e-8));
  const auto sin_dt1 = FormField::basis(4, {1}, ScalarField::sin_mode(1.0, {1}));
  for (double h : {1e-2, 1e-3, 1e-4}) CHECK(exterior_derivative_residual(sin_dt1, p, h) < 1e-12 + h * h);
  // d(sin(theta_2) dtheta_1) = cos(theta_2) dtheta_2 ^ dtheta_1
  const auto mixed = FormField::basis(4, {1}, ScalarField::sin_mode(1.0, {0, 1}));
  CHECK(exterior_derivative_residual(mixed, p, 1e-3) == Approx(std::abs(std::cos(1.1))).epsilon(1e-6));
  CHECK_THROWS_AS(exterior_derivative_residual(x_dt1, point(0.99995, {0, 0, 0})), InputError);
}

TEST_CASE("2-form matrices round-trip") {
  std::mt19937_64 rng(11);
  const auto w = random_form(rng, 6, 2);
  const Eigen::MatrixXd m = to_matrix(w);
  CHECK((m + m.transpose()).norm() == 0.0);
  CHECK(max_abs_difference(from_matrix(m), w) == 0.0);
  // det W = (top(w^n) / n!)^2 for a 2-form on a 2n-dimensional space.
  const double pf = top_coefficient(wedge_power(w, 3)) / 6.0;
  CHECK(m.determinant() == Approx(pf * pf).epsilon(1e-10));
}

TEST_CASE("property: antisymmetry, associativity, powers, Leibniz") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int dim = 6;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_form(rng, dim, 1);
    const auto b = random_form(rng, dim, 1);
    CHECK(max_abs_difference(wedge(a, b), -wedge(b, a)) <= 1e-15);

    const auto c = random_form(rng, dim, 2);
    const auto d = random_form(rng, dim, 2);
    CHECK(max_abs_difference(wedge(wedge(a, c), d), wedge(a, wedge(c, d))) <= 1e-12);

    auto repeated = FormValue::one(dim);
    for (int p = 0; p <= 3; ++p) {
      CHECK(max_abs_difference(wedge_power(c, p), repeated) <= 1e-12);
      if (p < 3) repeated = wedge(repeated, c);
    }
    const auto one_form = random_form(rng, 4, 1);
    auto rep1 = FormValue::one(4);
    for (int p = 0; p <= 4; ++p) {
      CHECK(max_abs_difference(wedge_power(one_form, p), rep1) <= 1e-12);
      if (p < 4) rep1 = wedge(rep1, one_form);
    }

    VectorValue v(dim);
    for (int i = 0; i < dim; ++i) v(i) = coef(rng);
    const auto lhs = contract(v, wedge(c, a));
    const auto rhs = wedge(contract(v, c), a) + wedge(c, contract(v, a));
    CHECK(max_abs_difference(lhs, rhs) <= 1e-12);
    const auto lhs2 = contract(v, wedge(a, c));
    const auto rhs2 = wedge(contract(v, a), c) - wedge(a, contract(v, c));
    CHECK(max_abs_difference(lhs2, rhs2) <= 1e-12);
  }
}

TEST_CASE("scalar fields") {
  const auto p = point(0.5, {0.3, 1.2});
  const auto c = ScalarField::cos_mode(1.0, {1});
  const auto s = ScalarField::sin_mode(1.0, {1});
  CHECK((c * c + s * s).evaluate(p) == Approx(1.0).epsilon(1e-15));
  CHECK((c * c + s * s).is_constant());
  CHECK(ScalarField::x_power(3.0, 2).evaluate(p, 1) == Approx(3.0));
  CHECK(ScalarField::x_power(3.0, 2).evaluate(p, 3) == 0.0);
  const auto torus = (c * c).integrate_over_torus(2);
  CHECK(torus(0.7) == Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  const auto xdep = ScalarField::x_power(2.0, 3) * ScalarField::cos_mode(1.0, {0, 2}) + ScalarField(1.0);
  const auto poly = xdep.integrate_over_torus(2);
  CHECK(poly.degree() <= 3);
  CHECK(poly(0.9) == Approx(kTwoPi * kTwoPi).epsilon(1e-14));
  const auto opaque = ScalarField::opaque([](const ChartPoint& q, int order) { return order == 0 ? q.x() : 1.0; }, 1);
  CHECK((opaque * ScalarField::x_power(1.0, 1)).evaluate(p, 1) == Approx(1.0));
  CHECK_THROWS_AS(opaque.integrate_over_torus(2), UnsupportedError);
  CHECK(point(0.0, {7.0}).theta(1) == Approx(7.0 - kTwoPi));
}
