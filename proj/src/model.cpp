#include "deblog/model.hpp"

#include "deblog/grid.hpp"

#include <algorithm>
#include <cmath>

namespace deblog {

namespace {

constexpr BasisMask kDx = 1;

void require_leafwise(const FormField& f, int dim, int degree, const std::string& what) {
  if (f.dimension() != dim || f.degree() != degree)
    throw InputError(what + ": expected a " + std::to_string(degree) + "-form in dimension " +
                     std::to_string(dim));
  for (const auto& [mask, c] : f.terms()) {
    if (mask & kDx) throw InputError(what + ": forms on Z cannot have a dx component");
    if (c.is_polynomial() && !c.is_x_independent())
      throw InputError(what + ": forms on Z must not depend on x");
  }
}

FormField dx_field(int dim) { return FormField::basis(dim, {0}); }

}  // namespace

LaurentModel::LaurentModel(int m, int n, std::vector<FormField> alphas, std::vector<FormField> betas,
                           FormField gamma, std::string label)
    : m_(m), n_(n), alphas_(std::move(alphas)), betas_(std::move(betas)), gamma_(std::move(gamma)),
      remainder_(2 * std::max(n, 1), 2), label_(std::move(label)) {
  if (m < 1) throw InputError("singularity order m must be >= 1");
  if (n < 1) throw InputError("half-dimension n must be >= 1");
  const int dim = 2 * n;
  if (static_cast<int>(alphas_.size()) != m)
    throw InputError("expected m=" + std::to_string(m) + " Laurent coefficients, got " +
                     std::to_string(alphas_.size()));
  if (static_cast<int>(betas_.size()) > m)
    throw InputError("expected at most m=" + std::to_string(m) + " beta_j terms");
  for (std::size_t i = 0; i < alphas_.size(); ++i)
    require_leafwise(alphas_[i], dim, 1, "alpha_" + std::to_string(i));
  while (static_cast<int>(betas_.size()) < m) betas_.emplace_back(dim, 2);
  for (std::size_t j = 0; j < betas_.size(); ++j)
    require_leafwise(betas_[j], dim, 2, "beta_" + std::to_string(j));
  if (gamma_.dimension() != dim || gamma_.degree() != 1)
    throw InputError("gamma: expected a 1-form in dimension " + std::to_string(dim));
  for (const auto& [mask, c] : gamma_.terms())
    if (mask & kDx) throw InputError("gamma: dx component is redundant in dx ^ gamma");
}

LaurentModel LaurentModel::with_remainder(FormField remainder) const {
  if (remainder.dimension() != dimension() || remainder.degree() != 2)
    throw InputError("remainder must be a 2-form on the chart");
  LaurentModel out = *this;
  out.remainder_ = std::move(remainder);
  return out;
}

FormField LaurentModel::alpha_sum() const {
  FormField out(dimension(), 1);
  for (int i = 0; i < m_; ++i) out += ScalarField::x_power(1.0, i) * alphas_[i];
  return out;
}

FormField LaurentModel::beta_leafwise() const {
  FormField out = remainder_;
  for (int j = 0; j < m_; ++j) out += ScalarField::x_power(1.0, j) * betas_[j];
  return out;
}

FormField LaurentModel::beta() const { return wedge(dx_field(dimension()), gamma_) + beta_leafwise(); }

LaurentModel darboux_model(int m, int n) {
  if (m < 1 || n < 1) throw InputError("darboux_model needs m >= 1 and n >= 1");
  const int dim = 2 * n;
  std::vector<FormField> alphas(m, FormField(dim, 1));
  alphas[0] = FormField::basis(dim, {1});
  FormField beta0(dim, 2);
  for (int pair = 1; pair < n; ++pair) beta0 += FormField::basis(dim, {2 * pair, 2 * pair + 1});
  return LaurentModel(m, n, std::move(alphas), {beta0}, FormField(dim, 1),
                      "darboux(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")");
}

double z_top_coefficient(const FormValue& v) {
  if (v.degree() != v.dimension() - 1)
    throw InputError("z_top_coefficient needs a form of degree " + std::to_string(v.dimension() - 1));
  return v.coefficient(((BasisMask{1} << v.dimension()) - 1) & ~kDx);
}

FormValue leaf_volume_form(const LaurentModel& model, const ChartPoint& z) {
  const auto pair = cosymplectic_pair(model);
  const FormValue a = evaluate(pair.alpha, z);
  const FormValue b = evaluate(pair.beta, z);
  return wedge(a, wedge_power(b, model.n() - 1));
}

CheckReport validate_model(const LaurentModel& model, const ModelValidationOptions& opts) {
  CheckReport report("validate_model " + model.label());
  const auto grid = theta_grid(model.num_angles(), opts.theta_points);

  double alpha_residual = 0.0;
  double beta_j_residual = 0.0;
  double beta_residual = 0.0;
  double min_alpha0 = std::numeric_limits<double>::infinity();
  double min_leaf_volume = std::numeric_limits<double>::infinity();
  const FormField beta_total = model.beta();

  for (const auto& thetas : grid) {
    const ChartPoint z(0.0, thetas);
    for (const auto& a : model.alphas())
      alpha_residual = std::max(alpha_residual, exterior_derivative_residual(a, z, opts.fd_step));
    for (const auto& b : model.betas())
      beta_j_residual = std::max(beta_j_residual, exterior_derivative_residual(b, z, opts.fd_step));
    for (double x : {-0.5, 0.0, 0.5})
      beta_residual = std::max(beta_residual, exterior_derivative_residual(beta_total, z.with_x(x), opts.fd_step));

    const FormValue a0 = evaluate(model.alphas()[0], z);
    double a0_norm = 0.0;
    for (const auto& [mask, c] : a0.terms()) a0_norm = std::max(a0_norm, std::abs(c));
    min_alpha0 = std::min(min_alpha0, a0_norm);
    min_leaf_volume = std::min(min_leaf_volume, std::abs(z_top_coefficient(leaf_volume_form(model, z))));
  }

  report.at_most("alpha_closedness_residual", alpha_residual, opts.closedness_tol);
  report.at_most("beta_j_closedness_residual", beta_j_residual, opts.closedness_tol);
  report.at_most("beta_closedness_residual", beta_residual, opts.closedness_tol);
  report.greater_than("min_abs_alpha0", min_alpha0, opts.nonvanishing_tol);
  report.greater_than("min_abs_alpha0_beta0_top", min_leaf_volume, opts.nonvanishing_tol);
  return report;
}

FormValue raw_bm_form(const LaurentModel& model, const ChartPoint& p) {
  if (p.x() == 0.0) throw DegeneracyError("the b^m form is singular on Z (x = 0)");
  const int dim = model.dimension();
  const double scale = std::pow(p.x(), -model.m());
  const FormValue dx = FormValue::basis(dim, {0});
  return scale * wedge(dx, evaluate(model.alpha_sum(), p)) + evaluate(model.beta(), p);
}

FormField raw_bm_form_field(const LaurentModel& model) {
  const int m = model.m();
  const ScalarField pole = ScalarField::opaque(
      [m](const ChartPoint& p, int r) {
        if (p.x() == 0.0) throw DegeneracyError("the b^m form is singular on Z (x = 0)");
        double c = 1.0;
        for (int i = 0; i < r; ++i) c *= static_cast<double>(-m - i);
        return c * std::pow(p.x(), -m - r);
      },
      64);
  return pole * wedge(dx_field(model.dimension()), model.alpha_sum()) + model.beta();
}

CosymplecticPair cosymplectic_pair(const LaurentModel& model) {
  // The remainder is O(x^m) and does not reach Z.
  return {model.alphas()[0], model.betas()[0]};
}

VectorValue modular_vector_field(const LaurentModel& model, const ChartPoint& z) {
  const int angles = model.num_angles();
  const auto pair = cosymplectic_pair(model);
  const FormValue a = evaluate(pair.alpha, z);
  const Eigen::MatrixXd w = to_matrix(evaluate(pair.beta, z));

  Eigen::MatrixXd system(angles + 1, angles);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(angles + 1);
  for (int i = 0; i < angles; ++i) system(0, i) = a.coefficient(BasisMask{1} << (i + 1));
  rhs(0) = 1.0;
  // (i_v beta)_j = sum_i v_i W(i, j) = -(W v)_j.
  system.bottomRows(angles) = w.bottomRightCorner(angles, angles);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0)))
    throw DegeneracyError("alpha_0 ^ beta_0^{n-1} vanishes here: the modular system is singular");
  const Eigen::VectorXd v = svd.solve(rhs);
  const double residual = (system * v - rhs).lpNorm<Eigen::Infinity>();
  if (residual > 1e-10)
    throw DegeneracyError("modular system is inconsistent (residual " + std::to_string(residual) + ")");

  VectorValue out = VectorValue::Zero(model.dimension());
  out.tail(angles) = v;
  return out;
}

}  // namespace deblog
