#pragma once

#include "deblog/check_report.hpp"
#include "deblog/grid.hpp"
#include "deblog/model.hpp"
#include "deblog/profile.hpp"

#include <Eigen/Dense>

#include <vector>

namespace deblog {

/// Throws InputError unless the profile parity matches m and 0 < eps < 1/2.
void require_compatible(const LaurentModel& model, const Profile& profile, double eps);

/// omega_eps = f_eps'(x) dx ^ (sum_i x^i alpha_i) + beta at p.
FormValue desingularize(const LaurentModel& model, const Profile& profile, double eps, const ChartPoint& p);

/// omega_eps as a form field; the f_eps' factor is opaque.
FormField desingularized_field(const LaurentModel& model, const Profile& profile, double eps);

/// With A = sum_i x^i alpha_i and beta = dx ^ gamma + beta_L,
///   top(omega_eps^n) = n (f_eps'(x) leaf + gamma_part),
/// leaf = Z-top(A ^ beta_L^{n-1}), gamma_part = Z-top(gamma ^ beta_L^{n-1}).
struct TopDensity {
  int n = 1;
  ScalarField leaf;
  ScalarField gamma_part;

  double top(double fprime, const ChartPoint& p) const {
    return n * (fprime * leaf.evaluate(p) + gamma_part.evaluate(p));
  }
  /// d/dx of top given f_eps' and f_eps''.
  double top_dx(double fprime, double fsecond, const ChartPoint& p) const {
    return n * (fsecond * leaf.evaluate(p) + fprime * leaf.evaluate(p, 1) + gamma_part.evaluate(p, 1));
  }
};

TopDensity top_density(const LaurentModel& model);

struct SymplecticCheckOptions {
  GridSpec grid;
  double x_max = 0.9;
  int closedness_samples = 24;
  double closedness_tol = 1e-6;  // relative to eps^{-m}
  double fd_step = 1e-4;
};

/// Even case: min |top(omega_eps^n)| over the grid, sign constancy, the
/// band minimum over |x| <= eps, and closedness of omega_eps at sample points.
CheckReport check_symplectic(const LaurentModel& model, const Profile& profile, double eps,
                             const SymplecticCheckOptions& opts = {});

/// Max coefficientwise |omega_eps - omega| over outer_x x theta-grid.
/// Throws InputError if a grid point lies within eps * core_half_width().
CheckReport check_coincidence(const LaurentModel& model, const Profile& profile, double eps,
                              const std::vector<double>& outer_x, int theta_points = 8, double tol = 1e-11);

/// Pi = -W^{-1}, so that W * Pi = -I. Throws DegeneracyError if W is singular.
Eigen::MatrixXd invert_to_bivector(const FormValue& two_form);

struct ConvergenceRow {
  double eps;
  int j;
  double sup_norm;       // over [-eps, eps]
  double outside_max;    // over eps < |x| <= x_max, relative to max(1, |x^{2k-j} term|)
};

struct ConvergenceTable {
  int k = 1;
  std::vector<ConvergenceRow> rows;
  std::vector<double> slopes;  // per j, least-squares slope of log sup vs log eps

  CheckReport report(double slope_factor = 0.9, double outside_tol = 1e-12) const;
};

/// sup |d^j/dx^j (eps^{2k} g(x/eps) - x^{2k})| for j = 0..j_max, g = 1/f'.
ConvergenceTable convergence_report(const Profile& profile, const std::vector<double>& eps_ladder, int j_max,
                                    int points = 401, double x_max = 0.9);

struct FoldCheckOptions {
  int theta_points = 16;
  double zero_tol = 1e-10;
  double transversal_factor = 1e-6;  // threshold relative to eps^{-(2k+2)}
  double leaf_tol = 1e-9;
};

/// Odd case: (a) top(omega_eps^n) = 0 on Z, (b) |d/dx top| on Z bounded away
/// from zero, (c) min over Z of |(i* omega_eps)^{n-1}| (largest coefficient).
CheckReport check_folded(const LaurentModel& model, const Profile& profile, double eps,
                         const FoldCheckOptions& opts = {});

struct FoldRoot {
  double x;
  bool transversal;
  double top_dx;
};

/// Zeros of top(omega_eps^n) along x at the angles of `at`, from sign
/// changes on x_scan refined by bisection to 1e-12. Neighbouring scan points
/// more than 4 median spacings apart bound a gap and are not searched.
std::vector<FoldRoot> fold_locus(const LaurentModel& model, const Profile& profile, double eps,
                                 const std::vector<double>& x_scan, const ChartPoint& at,
                                 double transversal_factor = 1e-6);

}  // namespace deblog
