#include "deblog/desing.hpp"

#include "deblog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace deblog {

namespace {

constexpr BasisMask kDx = 1;

BasisMask z_top_mask(int dim) { return ((BasisMask{1} << dim) - 1) & ~kDx; }

/// Fields of the model reused across a sweep.
struct ModelFields {
  FormField dx_alpha;  // dx ^ A
  FormField beta;

  explicit ModelFields(const LaurentModel& model)
      : dx_alpha(wedge(FormField::basis(model.dimension(), {0}), model.alpha_sum())), beta(model.beta()) {}

  FormValue at(double fprime, const ChartPoint& p) const { return fprime * evaluate(dx_alpha, p) + evaluate(beta, p); }
};

double max_abs_coefficient(const FormValue& v) {
  double out = 0.0;
  for (const auto& [mask, c] : v.terms()) out = std::max(out, std::abs(c));
  return out;
}

double fold_scale(const Profile& profile, double eps) { return std::pow(eps, -(2 * profile.k + 2)); }

void require_parity(const Profile& profile, Parity parity, const char* what) {
  if (profile.parity != parity)
    throw InputError(std::string(what) + " needs an " + to_string(parity) + "-case profile, got " +
                     to_string(profile.parity));
}

}  // namespace

void require_compatible(const LaurentModel& model, const Profile& profile, double eps) {
  const Parity expected = model.is_even() ? Parity::Even : Parity::Odd;
  if (profile.parity != expected || profile.singularity_order() != model.m())
    throw InputError("profile (" + to_string(profile.parity) + ", k=" + std::to_string(profile.k) +
                     ") does not match singularity order m=" + std::to_string(model.m()));
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2), got " + std::to_string(eps));
}

FormValue desingularize(const LaurentModel& model, const Profile& profile, double eps, const ChartPoint& p) {
  require_compatible(model, profile, eps);
  return ModelFields(model).at(eval_scaled(profile, eps, p.x(), 1), p);
}

FormField desingularized_field(const LaurentModel& model, const Profile& profile, double eps) {
  require_compatible(model, profile, eps);
  const ScalarField fprime = ScalarField::opaque(
      [profile, eps](const ChartPoint& p, int r) { return eval_scaled(profile, eps, p.x(), 1 + r); },
      profile.max_derivative_order - 1);
  const ModelFields fields(model);
  return fprime * fields.dx_alpha + fields.beta;
}

TopDensity top_density(const LaurentModel& model) {
  const int dim = model.dimension();
  const FormField leaf_power = wedge_power(model.beta_leafwise(), model.n() - 1);
  TopDensity d;
  d.n = model.n();
  d.leaf = wedge(model.alpha_sum(), leaf_power).coefficient(z_top_mask(dim));
  d.gamma_part = wedge(model.gamma(), leaf_power).coefficient(z_top_mask(dim));
  return d;
}

CheckReport check_symplectic(const LaurentModel& model, const Profile& profile, double eps,
                             const SymplecticCheckOptions& opts) {
  require_compatible(model, profile, eps);
  require_parity(profile, Parity::Even, "check_symplectic");
  CheckReport report("check_symplectic " + model.label() + " eps=" + std::to_string(eps));

  const TopDensity density = top_density(model);
  const auto xs = clustered_x_grid(eps, opts.grid.x_points, opts.x_max);
  const auto thetas = theta_grid(model.num_angles(), opts.grid.theta_points);

  double min_abs = std::numeric_limits<double>::infinity();
  double band_min = std::numeric_limits<double>::infinity();
  long positive = 0;
  long negative = 0;
  for (double x : xs) {
    const double fp = eval_scaled(profile, eps, x, 1);
    for (const auto& th : thetas) {
      const double t = density.top(fp, ChartPoint(x, th));
      min_abs = std::min(min_abs, std::abs(t));
      if (std::abs(x) <= eps) band_min = std::min(band_min, std::abs(t));
      if (t > 0) ++positive;
      if (t < 0) ++negative;
    }
  }
  report.greater_than("min_abs_top", min_abs, 0.0);
  report.at_most("sign_minority_count", static_cast<double>(std::min(positive, negative)), 0.0);
  report.info("band_min_abs_top", band_min);
  report.info("top_sign", positive >= negative ? 1.0 : -1.0);

  const FormField field = desingularized_field(model, profile, eps);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> x_dist(-2.0 * eps, 2.0 * eps);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double residual = 0.0;
  for (int s = 0; s < opts.closedness_samples; ++s) {
    Eigen::VectorXd th(model.num_angles());
    for (auto& a : th) a = angle(rng);
    residual = std::max(residual, exterior_derivative_residual(field, ChartPoint(x_dist(rng), th), opts.fd_step));
  }
  const double scale = std::max(1.0, std::pow(eps, -model.m()));
  report.at_most("closedness_residual_relative", residual / scale, opts.closedness_tol);
  return report;
}

CheckReport check_coincidence(const LaurentModel& model, const Profile& profile, double eps,
                              const std::vector<double>& outer_x, int theta_points, double tol) {
  require_compatible(model, profile, eps);
  const double band = eps * profile.core_half_width();
  for (double x : outer_x)
    if (std::abs(x) <= band)
      throw InputError("coincidence grid point x=" + std::to_string(x) + " lies inside the band |x| <= " +
                       std::to_string(band));
  CheckReport report("check_coincidence " + model.label() + " eps=" + std::to_string(eps));
  const ModelFields fields(model);
  const auto thetas = theta_grid(model.num_angles(), theta_points);
  double deviation = 0.0;
  double worst_x = 0.0;
  for (double x : outer_x) {
    const double fp = eval_scaled(profile, eps, x, 1);
    const double pole = std::pow(x, -model.m());
    for (const auto& th : thetas) {
      const ChartPoint p(x, th);
      const double d = max_abs_difference(fields.at(fp, p), fields.at(pole, p));
      if (d > deviation) {
        deviation = d;
        worst_x = x;
      }
    }
  }
  report.at_most("max_deviation", deviation, tol);
  report.info("worst_x", worst_x);
  return report;
}

Eigen::MatrixXd invert_to_bivector(const FormValue& two_form) {
  if (two_form.degree() != 2) throw InputError("invert_to_bivector needs a 2-form");
  const Eigen::MatrixXd w = to_matrix(two_form);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(w);
  if (!lu.isInvertible()) throw DegeneracyError("2-form is degenerate here: no dual bivector");
  return -lu.inverse();
}

CheckReport ConvergenceTable::report(double slope_factor, double outside_tol) const {
  CheckReport out("convergence k=" + std::to_string(k));
  for (std::size_t j = 0; j < slopes.size(); ++j) {
    const int order = static_cast<int>(j);
    out.greater_than("slope_j" + std::to_string(j), slopes[j], slope_factor * (2 * k - order));
    double outside = 0.0;
    for (const auto& r : rows)
      if (r.j == order) outside = std::max(outside, r.outside_max);
    out.at_most("outside_max_j" + std::to_string(j), outside, outside_tol);
  }
  return out;
}

ConvergenceTable convergence_report(const Profile& profile, const std::vector<double>& eps_ladder, int j_max,
                                    int points, double x_max) {
  require_parity(profile, Parity::Even, "convergence_report");
  const int k = profile.k;
  if (j_max < 0 || j_max > 2 * k - 1)
    throw InputError("j_max must lie in 0..2k-1 = " + std::to_string(2 * k - 1));
  if (j_max + 1 > profile.max_derivative_order)
    throw InputError("derivative order " + std::to_string(j_max + 1) + " unavailable");
  if (eps_ladder.size() < 2) throw InputError("convergence needs at least two eps values");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0 && eps_ladder[i] < x_max)) throw InputError("eps outside (0, x_max)");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) throw InputError("eps ladder must be strictly decreasing");
  }
  if (points < 3) throw InputError("convergence needs at least 3 points");

  ConvergenceTable table;
  table.k = k;
  // (2k)! / (2k - j)! x^{2k-j}
  auto power_derivative = [k](int j, double x) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c *= 2 * k - i;
    return c * std::pow(x, 2 * k - j);
  };
  auto difference = [&](double eps, double x, int j, const std::vector<double>& g) {
    return std::pow(eps, 2 * k - j) * g[j] - power_derivative(j, x);
  };

  for (double eps : eps_ladder) {
    std::vector<double> sup(j_max + 1, 0.0);
    std::vector<double> outside(j_max + 1, 0.0);
    for (double x : linspace(-eps, eps, points)) {
      const auto g = reciprocal_derivatives(profile, x / eps, j_max);
      for (int j = 0; j <= j_max; ++j) sup[j] = std::max(sup[j], std::abs(difference(eps, x, j, g)));
    }
    for (int i = 1; i <= points; ++i) {
      const double a = eps + (x_max - eps) * i / points;
      for (double x : {a, -a}) {
        const auto g = reciprocal_derivatives(profile, x / eps, j_max);
        for (int j = 0; j <= j_max; ++j) {
          const double rel = std::abs(difference(eps, x, j, g)) / std::max(1.0, std::abs(power_derivative(j, x)));
          outside[j] = std::max(outside[j], rel);
        }
      }
    }
    for (int j = 0; j <= j_max; ++j) table.rows.push_back({eps, j, sup[j], outside[j]});
  }

  for (int j = 0; j <= j_max; ++j) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(eps_ladder.size()), 2);
    Eigen::VectorXd b(a.rows());
    Eigen::Index row = 0;
    for (const auto& r : table.rows) {
      if (r.j != j) continue;
      a(row, 0) = std::log(r.eps);
      a(row, 1) = 1.0;
      b(row) = std::log(r.sup_norm);
      ++row;
    }
    const Eigen::VectorXd fit = a.colPivHouseholderQr().solve(b);
    table.slopes.push_back(fit(0));
  }
  return table;
}

CheckReport check_folded(const LaurentModel& model, const Profile& profile, double eps, const FoldCheckOptions& opts) {
  require_parity(profile, Parity::Odd, "check_folded");
  require_compatible(model, profile, eps);
  CheckReport report("check_folded " + model.label() + " eps=" + std::to_string(eps));

  const TopDensity density = top_density(model);
  const double fp = eval_scaled(profile, eps, 0.0, 1);
  const double fs = eval_scaled(profile, eps, 0.0, 2);
  const FormField leaf_power = wedge_power(model.beta_leafwise(), model.n() - 1);

  double max_top = 0.0;
  double min_dx = std::numeric_limits<double>::infinity();
  double max_dx = 0.0;
  double min_leaf = std::numeric_limits<double>::infinity();
  for (const auto& th : theta_grid(model.num_angles(), opts.theta_points)) {
    const ChartPoint z(0.0, th);
    max_top = std::max(max_top, std::abs(density.top(fp, z)));
    const double d = std::abs(density.top_dx(fp, fs, z));
    min_dx = std::min(min_dx, d);
    max_dx = std::max(max_dx, d);
    min_leaf = std::min(min_leaf, max_abs_coefficient(evaluate(leaf_power, z)));
  }
  const double scale = fold_scale(profile, eps);
  report.at_most("max_abs_top_on_Z", max_top, opts.zero_tol);
  report.greater_than("min_abs_top_dx_on_Z", min_dx, opts.transversal_factor * scale);
  report.info("max_abs_top_dx_on_Z", max_dx);
  report.info("top_dx_scale", scale);
  report.greater_than("min_leaf_power_norm", min_leaf, opts.leaf_tol);
  return report;
}

std::vector<FoldRoot> fold_locus(const LaurentModel& model, const Profile& profile, double eps,
                                 const std::vector<double>& x_scan, const ChartPoint& at, double transversal_factor) {
  require_parity(profile, Parity::Odd, "fold_locus");
  require_compatible(model, profile, eps);
  const TopDensity density = top_density(model);
  auto top = [&](double x) { return density.top(eval_scaled(profile, eps, x, 1), at.with_x(x)); };
  const double threshold = transversal_factor * fold_scale(profile, eps);

  std::vector<double> xs(x_scan);
  std::sort(xs.begin(), xs.end());
  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = top(xs[i]);

  // Spacings far above the typical one are gaps in the scan, not intervals.
  std::vector<double> spacing;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) spacing.push_back(xs[i + 1] - xs[i]);
  double max_step = std::numeric_limits<double>::infinity();
  if (!spacing.empty()) {
    std::nth_element(spacing.begin(), spacing.begin() + spacing.size() / 2, spacing.end());
    max_step = 4.0 * spacing[spacing.size() / 2];
  }

  std::vector<FoldRoot> roots;
  auto record = [&](double x) {
    const double d = density.top_dx(eval_scaled(profile, eps, x, 1), eval_scaled(profile, eps, x, 2), at.with_x(x));
    roots.push_back({x, std::abs(d) > threshold, d});
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (values[i] == 0.0) {
      record(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && xs[i + 1] - xs[i] <= max_step && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0)) {
      double lo = xs[i];
      double hi = xs[i + 1];
      const bool lo_negative = values[i] < 0.0;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double v = top(mid);
        if (v == 0.0) {
          lo = hi = mid;
          break;
        }
        ((v < 0.0) == lo_negative ? lo : hi) = mid;
      }
      record(0.5 * (lo + hi));
    }
  }
  return roots;
}

}  // namespace deblog
