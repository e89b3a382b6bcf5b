#pragma once

#include "deblog/check_report.hpp"
#include "deblog/model.hpp"
#include "deblog/profile.hpp"

#include <string>
#include <vector>

namespace deblog {

struct MomentImage {
  std::string case_tag;  // "case1" or "case2"
  double eps = 0.0;      // NaN for case1
  double lower = 0.0;
  double upper = 0.0;
  std::string provenance;  // "formula" or "scan"
};

/// Image of f_eps over [-lambda, lambda]: [f_eps(-lambda), f_eps(lambda)].
MomentImage moment_image_case2(const Profile& profile, double eps, double lambda);

/// Min and max of leaf_moment over a Z-grid (x = 0).
MomentImage moment_image_case1(const LaurentModel& model, const ScalarField& leaf_moment, int theta_points = 32);

/// Ratio test: for consecutive eps in the ladder the case-2 endpoints scale
/// like eps^{-(2k-1)} within rel_tol.
CheckReport moment_scaling_report(const Profile& profile, const std::vector<double>& eps_ladder, double lambda,
                                  double rel_tol = 0.05);

}  // namespace deblog
