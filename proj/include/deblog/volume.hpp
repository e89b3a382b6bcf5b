#pragma once

#include "deblog/model.hpp"
#include "deblog/polynomial.hpp"
#include "deblog/profile.hpp"

#include <string>
#include <utility>
#include <vector>

namespace deblog {

/// I_i = int_{-1}^{1} f'(y) y^i dy for i = 0..i_max, exact.
std::vector<double> moment_integrals(const Profile& profile, int i_max);

/// Volumes use the Liouville measure omega^n / n!. Its density on the tube is
///   (f'(x) Q-density + G-density) dx ^ dtheta,
/// and integrating over Z gives polynomials in x:
///   leaf(x)  = int_Z A ^ beta_L^{n-1} / (n-1)!,
///   gamma(x) = int_Z gamma ^ beta_L^{n-1} / (n-1)!.
struct ZDensity {
  Polynomial<double> leaf;
  Polynomial<double> gamma;
};

/// Throws UnsupportedError when the data are not trigonometric polynomials.
ZDensity z_density(const LaurentModel& model);

/// int_Z alpha_i ^ beta_{j_1} ^ ... ^ beta_{j_{n-1}} for nondecreasing j.
struct ZIntegral {
  int alpha_index;
  std::vector<int> beta_indices;
  double value;
};
std::vector<ZIntegral> z_integral_table(const LaurentModel& model);

/// Volume of Z x ((-1, -eps] U [eps, 1)) under omega, exact.
double volume_complement(const LaurentModel& model, double eps);

/// Volume of Z x (-w, w) under omega_eps, w = eps * core_half_width(), by
/// adaptive Gauss-Kronrod in y = x / eps over the profile pieces.
double volume_inside(const LaurentModel& model, const Profile& profile, double eps);

struct VolumeSample {
  double eps;
  double complement;  // over |x| >= w
  double inside;      // over |x| < w
  double total;       // complement + inside + cap offset
};

VolumeSample volume_sample(const LaurentModel& model, const Profile& profile, double eps, double cap_offset = 0.0);

/// Volume of Z x (-1, 1) under omega_eps, plus an optional cap offset.
double volume_desingularized(const LaurentModel& model, const Profile& profile, double eps, double cap_offset = 0.0);

/// V(eps) ~ sum_{i=1..k} d_i eps^{-(2i-1)} + d_0.
struct VolumeExpansion {
  enum class Provenance { Fitted, Predicted };

  int k = 1;
  std::vector<double> d;     // d[0] constant term, d[i] coefficient of eps^{-(2i-1)}
  std::vector<double> even;  // augmented fit only: even[i-1] coefficient of eps^{-2i}
  double residual = 0.0;     // max relative deviation over the samples
  Provenance provenance = Provenance::Fitted;

  double operator()(double eps) const;
};

struct PredictedExpansion {
  VolumeExpansion expansion;
  std::vector<double> inside;      // a_i, i = 1..k (index 0 unused)
  std::vector<double> complement;  // c_i, i = 1..k (index 0 unused)
  double z0 = 0.0;                 // int_Z alpha_0 ^ beta_0^{n-1} / (n-1)!
  double stated_leading = 0.0;      // 2 (2 + 1/(2k-1)) z0
  double oracle_leading = 0.0;     // 4 z0
  std::vector<ZIntegral> z_integrals;
};

/// Even case only; throws UnsupportedError otherwise.
PredictedExpansion predicted_expansion(const LaurentModel& model, const Profile& profile);

/// Weighted (1/V) least squares in {eps^{-(2i-1)}} U {1}, optionally
/// augmented by {eps^{-2i}}. Throws InputError when there are too few
/// distinct samples or the basis is ill-conditioned.
VolumeExpansion fit_expansion(const std::vector<std::pair<double, double>>& samples, int k, bool augmented = false,
                              double max_condition = 1e4);

}  // namespace deblog
