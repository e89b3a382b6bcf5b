#include "deblog/volume.hpp"

#include "deblog/desing.hpp"
#include "deblog/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace deblog {

namespace {

constexpr BasisMask kDx = 1;

double factorial(int n) { return std::tgamma(n + 1.0); }

/// int over [-1, -eps] U [eps, 1] of x^e.
double symmetric_power_integral(int e, double eps) {
  if (e % 2 != 0) return 0.0;
  return 2.0 * (1.0 - std::pow(eps, e + 1)) / (e + 1);
}

double integrate_polynomial(const Polynomial<double>& p, double lo, double hi) { return p.integrate(lo, hi); }

void nondecreasing_tuples(int length, int max_value, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == length) {
    out.push_back(current);
    return;
  }
  const int start = current.empty() ? 0 : current.back();
  for (int v = start; v < max_value; ++v) {
    current.push_back(v);
    nondecreasing_tuples(length, max_value, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<double> moment_integrals(const Profile& profile, int i_max) {
  if (i_max < 0) throw InputError("i_max must be >= 0");
  const Polynomial<long double> fprime = profile.interior.derivative();
  std::vector<double> out;
  for (int i = 0; i <= i_max; ++i) {
    const auto integrand = fprime * Polynomial<long double>::monomial(1.0L, i);
    out.push_back(static_cast<double>(integrand.integrate(-1.0L, 1.0L)));
  }
  return out;
}

ZDensity z_density(const LaurentModel& model) {
  const TopDensity d = top_density(model);
  const double norm = 1.0 / factorial(model.n() - 1);
  ZDensity out;
  out.leaf = norm * d.leaf.integrate_over_torus(model.num_angles());
  out.gamma = norm * d.gamma_part.integrate_over_torus(model.num_angles());
  return out;
}

std::vector<ZIntegral> z_integral_table(const LaurentModel& model) {
  const BasisMask top = ((BasisMask{1} << model.dimension()) - 1) & ~kDx;
  std::vector<std::vector<int>> tuples;
  std::vector<int> current;
  nondecreasing_tuples(model.n() - 1, model.m(), current, tuples);
  std::vector<ZIntegral> out;
  for (int i = 0; i < model.m(); ++i) {
    for (const auto& js : tuples) {
      FormField f = model.alphas()[i];
      for (int j : js) f = wedge(f, model.betas()[j]);
      const double value = f.coefficient(top).integrate_over_torus(model.num_angles()).coefficient(0);
      out.push_back({i, js, value});
    }
  }
  return out;
}

double volume_complement(const LaurentModel& model, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
  const ZDensity z = z_density(model);
  double total = 0.0;
  for (int p = 0; p <= z.leaf.degree(); ++p)
    total += z.leaf.coefficient(p) * symmetric_power_integral(p - model.m(), eps);
  total += integrate_polynomial(z.gamma, -1.0, -eps) + integrate_polynomial(z.gamma, eps, 1.0);
  return total;
}

double volume_inside(const LaurentModel& model, const Profile& profile, double eps) {
  require_compatible(model, profile, eps);
  const ZDensity z = z_density(model);
  const double w = profile.core_half_width();
  const double scale = std::pow(eps, -profile.scaling_exponent());
  auto integrand = [&](double y) { return eval_profile(profile, y, 1) * z.leaf(eps * y); };

  std::vector<double> breaks = {-w, -1.0, 0.0, 1.0, w};
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double core = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double error = 0.0;
    core += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, breaks[i], breaks[i + 1], 15,
                                                                          1e-14, &error);
  }
  return scale * core + integrate_polynomial(z.gamma, -eps * w, eps * w);
}

VolumeSample volume_sample(const LaurentModel& model, const Profile& profile, double eps, double cap_offset) {
  require_compatible(model, profile, eps);
  VolumeSample s;
  s.eps = eps;
  s.complement = volume_complement(model, eps * profile.core_half_width());
  s.inside = volume_inside(model, profile, eps);
  s.total = s.complement + s.inside + cap_offset;
  return s;
}

double volume_desingularized(const LaurentModel& model, const Profile& profile, double eps, double cap_offset) {
  return volume_sample(model, profile, eps, cap_offset).total;
}

double VolumeExpansion::operator()(double eps) const {
  double v = d.empty() ? 0.0 : d[0];
  for (std::size_t i = 1; i < d.size(); ++i) v += d[i] * std::pow(eps, -(2.0 * i - 1.0));
  for (std::size_t i = 0; i < even.size(); ++i) v += even[i] * std::pow(eps, -2.0 * (i + 1.0));
  return v;
}

PredictedExpansion predicted_expansion(const LaurentModel& model, const Profile& profile) {
  if (!model.is_even() || profile.parity != Parity::Even)
    throw UnsupportedError("volume predictions cover the even case only");
  require_compatible(model, profile, 0.25);
  const int k = model.k();
  const ZDensity z = z_density(model);
  const auto moments = moment_integrals(profile, std::max<int>(static_cast<int>(z.leaf.degree()), 0));

  PredictedExpansion out;
  out.inside.assign(k + 1, 0.0);
  out.complement.assign(k + 1, 0.0);
  double constant = 0.0;
  for (int p = 0; p <= z.leaf.degree(); ++p) {
    const double q = z.leaf.coefficient(p);
    if (q == 0.0 || p % 2 != 0) continue;
    if (p < 2 * k) {
      const int i = k - p / 2;
      out.complement[i] += 2.0 * q / (2 * i - 1);
      constant -= 2.0 * q / (2 * i - 1);
      out.inside[i] += q * moments[p];
    } else {
      constant += 2.0 * q / (p - 2 * k + 1);
    }
  }
  for (int p = 0; p <= z.gamma.degree(); ++p)
    if (p % 2 == 0) constant += 2.0 * z.gamma.coefficient(p) / (p + 1);

  VolumeExpansion& e = out.expansion;
  e.k = k;
  e.provenance = VolumeExpansion::Provenance::Predicted;
  e.d.assign(k + 1, 0.0);
  e.d[0] = constant;
  for (int i = 1; i <= k; ++i) e.d[i] = out.inside[i] + out.complement[i];

  out.z0 = z.leaf.coefficient(0);
  out.stated_leading = 2.0 * (2.0 + 1.0 / (2 * k - 1)) * out.z0;
  out.oracle_leading = 4.0 * out.z0;
  out.z_integrals = z_integral_table(model);
  return out;
}

VolumeExpansion fit_expansion(const std::vector<std::pair<double, double>>& samples, int k, bool augmented,
                              double max_condition) {
  if (k < 1) throw InputError("fit_expansion needs k >= 1");
  const int columns = (augmented ? 2 * k : k) + 1;
  std::set<double> distinct;
  for (const auto& [eps, v] : samples) {
    if (!(eps > 0.0)) throw InputError("fit_expansion: eps must be positive");
    if (v == 0.0 || !std::isfinite(v)) throw InputError("fit_expansion: volumes must be finite and nonzero");
    distinct.insert(eps);
  }
  if (static_cast<int>(distinct.size()) < columns + 1)
    throw InputError("fit_expansion needs at least " + std::to_string(columns + 1) + " distinct eps samples, got " +
                     std::to_string(distinct.size()));

  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(rows, columns);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto [eps, v] = samples[r];
    const double w = 1.0 / std::abs(v);
    int c = 0;
    for (int i = 1; i <= k; ++i) a(r, c++) = w * std::pow(eps, -(2.0 * i - 1.0));
    a(r, c++) = w;
    if (augmented)
      for (int i = 1; i <= k; ++i) a(r, c++) = w * std::pow(eps, -2.0 * i);
    b(r) = w * v;
  }
  const Eigen::VectorXd col_norm = a.colwise().norm().transpose();
  const Eigen::MatrixXd scaled = a * col_norm.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double condition = s(0) / s(s.size() - 1);
  if (!(condition <= max_condition))
    throw InputError("fit_expansion: basis is ill-conditioned over this eps range (condition " +
                     std::to_string(condition) + ")");
  const Eigen::VectorXd x = col_norm.cwiseInverse().asDiagonal() * svd.solve(b);

  VolumeExpansion e;
  e.k = k;
  e.provenance = VolumeExpansion::Provenance::Fitted;
  e.d.assign(k + 1, 0.0);
  for (int i = 1; i <= k; ++i) e.d[i] = x(i - 1);
  e.d[0] = x(k);
  if (augmented)
    for (int i = 1; i <= k; ++i) e.even.push_back(x(k + i));
  for (const auto& [eps, v] : samples) e.residual = std::max(e.residual, std::abs(e(eps) - v) / std::abs(v));
  return e;
}

}  // namespace deblog
