#pragma once

#include "deblog/errors.hpp"
#include "deblog/scalar_field.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace deblog {

/// Set of basis covectors {dx, dtheta_1, ..., dtheta_{2n-1}} as a bitmask:
/// bit 0 is dx, bit i is dtheta_i. Increasing bit order is the canonical
/// ordering of an index tuple, so antisymmetry is structural.
using BasisMask = std::uint32_t;

inline constexpr int kMaxDimension = 16;

inline int mask_degree(BasisMask m) { return std::popcount(m); }

/// Sign of e_a ^ e_b relative to e_{a|b}; zero when the sets overlap.
inline int wedge_sign(BasisMask a, BasisMask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (BasisMask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

std::string basis_name(BasisMask m);

/// Differential form on the chart with coefficients of type Scalar.
///
/// Form<ScalarField> is a field of forms; Form<double> is its value at a
/// point (FormValue). Only nonzero coefficients are stored.
template <typename Scalar>
class Form {
 public:
  Form(int dimension, int degree) : dim_(dimension), degree_(degree) {
    if (dimension < 1 || dimension > kMaxDimension)
      throw InputError("form dimension out of range: " + std::to_string(dimension));
    if (degree < 0 || degree > dimension)
      throw InputError("form degree " + std::to_string(degree) + " outside 0.." + std::to_string(dimension));
  }

  /// coef * e_{i_1} ^ ... ^ e_{i_p}; indices may come in any order.
  static Form basis(int dimension, std::initializer_list<int> indices, Scalar coef = Scalar(1)) {
    return basis(dimension, std::vector<int>(indices), std::move(coef));
  }

  static Form basis(int dimension, const std::vector<int>& indices, Scalar coef = Scalar(1)) {
    Form f(dimension, static_cast<int>(indices.size()));
    BasisMask mask = 0;
    int sign = 1;
    for (int i : indices) {
      if (i < 0 || i >= dimension) throw InputError("basis index out of range");
      const BasisMask bit = BasisMask{1} << i;
      const int s = wedge_sign(mask, bit);
      if (s == 0) return f;
      sign *= s;
      mask |= bit;
    }
    f.add(mask, sign > 0 ? coef : -coef);
    return f;
  }

  static Form one(int dimension) { return basis(dimension, std::vector<int>{}); }

  int dimension() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<BasisMask, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Scalar coefficient(BasisMask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add(BasisMask m, const Scalar& c) {
    if (mask_degree(m) != degree_) throw InputError("coefficient degree does not match form degree");
    if (m >> dim_) throw InputError("basis element outside the chart dimension");
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) it->second = it->second + c;
    if (deblog::is_zero(it->second)) terms_.erase(it);
  }

  template <typename Fn>
  auto map(Fn&& fn) const {
    using Out = std::decay_t<decltype(fn(std::declval<const Scalar&>()))>;
    Form<Out> out(dim_, degree_);
    for (const auto& [m, c] : terms_) out.add(m, fn(c));
    return out;
  }

  Form operator-() const {
    return map([](const Scalar& c) { return Scalar(-c); });
  }

  friend Form operator+(const Form& a, const Form& b) {
    a.require_same_shape(b);
    Form out = a;
    for (const auto& [m, c] : b.terms_) out.add(m, c);
    return out;
  }
  friend Form operator-(const Form& a, const Form& b) { return a + (-b); }
  friend Form operator*(const Scalar& s, const Form& f) {
    return f.map([&s](const Scalar& c) { return Scalar(s * c); });
  }
  Form& operator+=(const Form& o) { return *this = *this + o; }

 private:
  void require_same_shape(const Form& o) const {
    if (dim_ != o.dim_ || degree_ != o.degree_) throw InputError("adding forms of different shape");
  }

  int dim_;
  int degree_;
  std::map<BasisMask, Scalar> terms_;
};

using FormValue = Form<double>;
using FormField = Form<ScalarField>;
/// Tangent vector at a point: coefficients over {d/dx, d/dtheta_1, ...}.
using VectorValue = Eigen::VectorXd;

template <typename Scalar>
Form<Scalar> wedge(const Form<Scalar>& a, const Form<Scalar>& b) {
  if (a.dimension() != b.dimension()) throw InputError("wedge of forms on different charts");
  if (a.degree() + b.degree() > a.dimension())
    throw InputError("wedge degree overflow: " + std::to_string(a.degree()) + " + " +
                     std::to_string(b.degree()) + " > " + std::to_string(a.dimension()));
  Form<Scalar> out(a.dimension(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      Scalar prod = ca * cb;
      out.add(ma | mb, s > 0 ? prod : Scalar(-prod));
    }
  }
  return out;
}

/// a^p, with a^0 the constant-one 0-form.
template <typename Scalar>
Form<Scalar> wedge_power(const Form<Scalar>& a, int p) {
  if (p < 0) throw InputError("negative wedge power");
  if (p * a.degree() > a.dimension()) throw InputError("wedge power degree overflow");
  Form<Scalar> out = Form<Scalar>::one(a.dimension());
  for (int i = 0; i < p; ++i) out = wedge(out, a);
  return out;
}

FormValue evaluate(const FormField& form, const ChartPoint& p);

/// Coefficient of dx ^ dtheta_1 ^ ... ^ dtheta_{2n-1}.
double top_coefficient(const FormValue& v);

/// Interior product, contracting into the first slot: i_{d/dx}(dx ^ dtheta_1) = dtheta_1.
FormValue contract(const VectorValue& v, const FormValue& a);

/// Max-norm of a second-order central-difference approximation of d(form) at p.
double exterior_derivative_residual(const FormField& form, const ChartPoint& p, double h = 1e-4);

/// Antisymmetric coefficient matrix W with W(i,j) = coefficient of e_i ^ e_j (i < j).
Eigen::MatrixXd to_matrix(const FormValue& two_form);
FormValue from_matrix(const Eigen::MatrixXd& w);

/// Largest absolute coefficient of a - b.
double max_abs_difference(const FormValue& a, const FormValue& b);

}  // namespace deblog
