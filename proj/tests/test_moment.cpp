#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deblog/errors.hpp"
#include "deblog/moment.hpp"

#include <cmath>
#include <cstring>

using namespace deblog;
using doctest::Approx;

TEST_CASE("case 2 examples") {
  const Profile p1 = build_even_profile(1, 4);
  const auto img = moment_image_case2(p1, 0.1, 0.5);
  CHECK(std::abs(img.upper - 18.0) <= 1e-12);
  CHECK(img.lower == -img.upper);
  CHECK(img.case_tag == "case2");

  for (int k = 1; k <= 3; ++k) {
    const Profile p = build_even_profile(k, 2 * k + 2);
    const double eps = 0.3;
    const auto at_eps = moment_image_case2(p, eps, eps * (1 + 1e-15));
    const double f1 = std::pow(eps, -(2 * k - 1)) * (2.0 - 1.0 / (2 * k - 1));
    CHECK(at_eps.upper == Approx(f1).epsilon(1e-12));
    CHECK(at_eps.lower == Approx(-f1).epsilon(1e-12));
  }

  CHECK_THROWS_AS(moment_image_case2(p1, 0.5, 0.5), InputError);
  CHECK_THROWS_AS(moment_image_case2(p1, 0.1, 1.5), InputError);
  CHECK_THROWS_AS(moment_image_case2(build_odd_profile(1, 4), 0.1, 0.5), InputError);
}

TEST_CASE("case 2 endpoints scale like eps^{-(2k-1)}") {
  for (int k = 1; k <= 2; ++k) {
    const auto r = moment_scaling_report(build_even_profile(k, 2 * k + 2), {0.04, 0.02, 0.01, 0.005}, 0.5);
    INFO(r.to_string());
    CHECK(r.pass());
    CHECK(r.value("upper_times_eps_power_over_2") == Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("beyond lambda the image moves rigidly with eps") {
  // f_eps(x) - f_eps(lambda) does not depend on eps for x >= lambda > eps.
  const Profile p = build_even_profile(2, 6);
  const double lambda = 0.5;
  for (double x : {0.5, 0.6, 0.75, 0.9}) {
    const double ref = eval_scaled(p, 0.1, x, 0) - eval_scaled(p, 0.1, lambda, 0);
    for (double eps : {0.2, 0.05, 0.01}) {
      const double v = eval_scaled(p, eps, x, 0) - eval_scaled(p, eps, lambda, 0);
      CHECK(std::abs(v - ref) <= 1e-12 * std::max(1.0, std::abs(eval_scaled(p, eps, x, 0))));
    }
  }
}

TEST_CASE("case 1 examples") {
  const auto model = darboux_model(2, 2);
  const auto img = moment_image_case1(model, ScalarField::sin_mode(1.0, {0, 1}));
  CHECK(img.lower == Approx(-1.0));
  CHECK(img.upper == Approx(1.0));
  CHECK(img.case_tag == "case1");
  const auto c = moment_image_case1(model, ScalarField(2.5));
  CHECK(c.lower == 2.5);
  CHECK(c.upper == 2.5);
  const auto again = moment_image_case1(model, ScalarField::sin_mode(1.0, {0, 1}));
  CHECK(std::memcmp(&again.lower, &img.lower, sizeof(double)) == 0);
  CHECK(std::memcmp(&again.upper, &img.upper, sizeof(double)) == 0);
}
