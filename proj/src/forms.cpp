#include "deblog/forms.hpp"

#include <algorithm>
#include <cmath>

namespace deblog {

std::string basis_name(BasisMask m) {
  if (m == 0) return "1";
  std::string out;
  for (BasisMask rest = m; rest; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    if (!out.empty()) out += "^";
    out += i == 0 ? "dx" : "dtheta" + std::to_string(i);
  }
  return out;
}

FormValue evaluate(const FormField& form, const ChartPoint& p) {
  if (p.dimension() != form.dimension()) throw InputError("chart point dimension mismatch");
  return form.map([&p](const ScalarField& f) { return f.evaluate(p); });
}

double top_coefficient(const FormValue& v) {
  if (v.degree() != v.dimension())
    throw InputError("top_coefficient needs a form of degree " + std::to_string(v.dimension()));
  return v.coefficient((BasisMask{1} << v.dimension()) - 1);
}

FormValue contract(const VectorValue& v, const FormValue& a) {
  if (a.degree() < 1) throw InputError("cannot contract a 0-form");
  if (v.size() != a.dimension()) throw InputError("vector dimension mismatch in contraction");
  FormValue out(a.dimension(), a.degree() - 1);
  for (const auto& [mask, c] : a.terms()) {
    for (BasisMask rest = mask; rest; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      const BasisMask bit = BasisMask{1} << i;
      const int position = std::popcount(mask & (bit - 1));
      const double sign = (position & 1) ? -1.0 : 1.0;
      out.add(mask & ~bit, sign * v(i) * c);
    }
  }
  return out;
}

double exterior_derivative_residual(const FormField& form, const ChartPoint& p, double h) {
  if (h <= 0) throw InputError("finite-difference step must be positive");
  if (p.x() - h <= -1.0 || p.x() + h >= 1.0)
    throw InputError("finite-difference stencil leaves the chart (-1, 1)");
  const int dim = form.dimension();
  if (form.degree() == dim) return 0.0;
  FormValue d(dim, form.degree() + 1);
  for (const auto& [mask, f] : form.terms()) {
    for (int j = 0; j < dim; ++j) {
      const BasisMask bit = BasisMask{1} << j;
      if (mask & bit) continue;
      ChartPoint plus = j == 0 ? p.with_x(p.x() + h) : p.with_theta(j, p.theta(j) + h);
      ChartPoint minus = j == 0 ? p.with_x(p.x() - h) : p.with_theta(j, p.theta(j) - h);
      const double partial = (f.evaluate(plus) - f.evaluate(minus)) / (2.0 * h);
      d.add(mask | bit, wedge_sign(bit, mask) * partial);
    }
  }
  double worst = 0.0;
  for (const auto& [m, c] : d.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

Eigen::MatrixXd to_matrix(const FormValue& two_form) {
  if (two_form.degree() != 2) throw InputError("to_matrix expects a 2-form");
  const int dim = two_form.dimension();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [mask, c] : two_form.terms()) {
    const int i = std::countr_zero(mask);
    const int j = std::countr_zero(mask & (mask - 1));
    w(i, j) = c;
    w(j, i) = -c;
  }
  return w;
}

FormValue from_matrix(const Eigen::MatrixXd& w) {
  const int dim = static_cast<int>(w.rows());
  FormValue out(dim, 2);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (w(i, j) != 0.0) out.add((BasisMask{1} << i) | (BasisMask{1} << j), w(i, j));
  return out;
}

double max_abs_difference(const FormValue& a, const FormValue& b) {
  double worst = 0.0;
  const FormValue d = a - b;
  for (const auto& [m, c] : d.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace deblog
