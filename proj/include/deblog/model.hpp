#pragma once

#include "deblog/check_report.hpp"
#include "deblog/forms.hpp"

#include <string>
#include <vector>

namespace deblog {

/// b^m-symplectic structure on the tube Z x (-1, 1), Z = T^{2n-1}, in
/// Laurent form
///
///   omega = dx / x^m ^ (sum_{i<m} x^i alpha_i) + beta,
///   beta  = dx ^ gamma + sum_{j<m} x^j beta_j + remainder,
///
/// with alpha_i, beta_j forms on Z (no dx component, x-independent) pulled
/// back to the tube. gamma may depend on x; the remainder carries the
/// O(x^m) part of beta and defaults to zero.
class LaurentModel {
 public:
  LaurentModel(int m, int n, std::vector<FormField> alphas, std::vector<FormField> betas,
               FormField gamma, std::string label = {});

  int m() const { return m_; }
  int n() const { return n_; }
  int dimension() const { return 2 * n_; }
  int num_angles() const { return 2 * n_ - 1; }
  /// m = 2k (even) or m = 2k + 1 (odd).
  int k() const { return m_ / 2; }
  bool is_even() const { return m_ % 2 == 0; }

  const std::vector<FormField>& alphas() const { return alphas_; }
  const std::vector<FormField>& betas() const { return betas_; }
  const FormField& gamma() const { return gamma_; }
  const FormField& remainder() const { return remainder_; }
  const std::string& label() const { return label_; }

  LaurentModel with_remainder(FormField remainder) const;

  /// sum_i x^i alpha_i.
  FormField alpha_sum() const;
  /// sum_j x^j beta_j + remainder: the part of beta without dx.
  FormField beta_leafwise() const;
  /// dx ^ gamma + beta_leafwise().
  FormField beta() const;

 private:
  int m_;
  int n_;
  std::vector<FormField> alphas_;
  std::vector<FormField> betas_;
  FormField gamma_;
  FormField remainder_;
  std::string label_;
};

/// omega = dx/x^m ^ dtheta_1 + dtheta_2 ^ dtheta_3 + ... (n - 1 pairs).
LaurentModel darboux_model(int m, int n);

struct ModelValidationOptions {
  int theta_points = 32;
  double closedness_tol = 1e-6;
  double nonvanishing_tol = 1e-9;
  double fd_step = 1e-4;
};

CheckReport validate_model(const LaurentModel& model, const ModelValidationOptions& opts = {});

/// Value of the singular form at p (p.x != 0).
FormValue raw_bm_form(const LaurentModel& model, const ChartPoint& p);
/// The singular form as a field; its dx-coefficients are opaque in x^{-m}.
FormField raw_bm_form_field(const LaurentModel& model);

struct CosymplecticPair {
  FormField alpha;  // alpha_0 on Z
  FormField beta;   // beta_0 on Z
};

CosymplecticPair cosymplectic_pair(const LaurentModel& model);

/// The vector field v on Z with i_v alpha_0 = 1 and i_v beta_0 = 0.
/// Throws DegeneracyError when the system is rank deficient at z.
VectorValue modular_vector_field(const LaurentModel& model, const ChartPoint& z);

/// Coefficient of dtheta_1 ^ ... ^ dtheta_{2n-1} of a (2n-1)-form value.
double z_top_coefficient(const FormValue& v);

/// alpha_0 ^ beta_0^{n-1} at a point of Z.
FormValue leaf_volume_form(const LaurentModel& model, const ChartPoint& z);

}  // namespace deblog
