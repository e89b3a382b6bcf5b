#include "deblog/moment.hpp"

#include "deblog/errors.hpp"
#include "deblog/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deblog {

MomentImage moment_image_case2(const Profile& profile, double eps, double lambda) {
  if (profile.parity != Parity::Even) throw InputError("case 2 moment images need an even-case profile");
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (!(lambda <= 1.0)) throw InputError("lambda must be <= 1");
  if (!(eps < lambda)) throw InputError("case 2 needs eps < lambda");
  MomentImage img;
  img.case_tag = "case2";
  img.eps = eps;
  img.lower = eval_scaled(profile, eps, -lambda, 0);
  img.upper = eval_scaled(profile, eps, lambda, 0);
  img.provenance = "formula";
  return img;
}

MomentImage moment_image_case1(const LaurentModel& model, const ScalarField& leaf_moment, int theta_points) {
  MomentImage img;
  img.case_tag = "case1";
  img.eps = std::numeric_limits<double>::quiet_NaN();
  img.lower = std::numeric_limits<double>::infinity();
  img.upper = -std::numeric_limits<double>::infinity();
  for (const auto& th : theta_grid(model.num_angles(), theta_points)) {
    const double v = leaf_moment.evaluate(ChartPoint(0.0, th));
    img.lower = std::min(img.lower, v);
    img.upper = std::max(img.upper, v);
  }
  img.provenance = "scan";
  return img;
}

CheckReport moment_scaling_report(const Profile& profile, const std::vector<double>& eps_ladder, double lambda,
                                  double rel_tol) {
  CheckReport report("moment_scaling lambda=" + std::to_string(lambda));
  if (eps_ladder.size() < 2) throw InputError("ratio test needs at least two eps values");
  const int e = profile.scaling_exponent();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i) {
    const auto a = moment_image_case2(profile, eps_ladder[i], lambda);
    const auto b = moment_image_case2(profile, eps_ladder[i + 1], lambda);
    const double expected = std::pow(eps_ladder[i] / eps_ladder[i + 1], e);
    worst = std::max(worst, std::abs(b.upper / a.upper / expected - 1.0));
    worst = std::max(worst, std::abs(b.lower / a.lower / expected - 1.0));
  }
  report.at_most("max_ratio_deviation", worst, rel_tol);
  const double last = eps_ladder.back();
  report.info("upper_times_eps_power_over_2",
              moment_image_case2(profile, last, lambda).upper * std::pow(last, e) / 2.0);
  return report;
}

}  // namespace deblog
