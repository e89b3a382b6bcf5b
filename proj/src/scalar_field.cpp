#include "deblog/scalar_field.hpp"

#include "deblog/errors.hpp"

#include <algorithm>
#include <cmath>

namespace deblog {

namespace {

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

double falling(int n, int r) {
  double v = 1.0;
  for (int i = 0; i < r; ++i) v *= static_cast<double>(n - i);
  return v;
}

double int_pow(double x, int p) {
  double v = 1.0;
  for (int i = 0; i < p; ++i) v *= x;
  return v;
}

double binomial(int n, int r) {
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

std::vector<int> combine(const std::vector<int>& a, const std::vector<int>& b, int sign) {
  std::vector<int> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
  return out;
}

}  // namespace

ChartPoint::ChartPoint(double x, Eigen::VectorXd thetas) : x_(x), thetas_(std::move(thetas)) {
  for (Eigen::Index i = 0; i < thetas_.size(); ++i) thetas_(i) = reduce_angle(thetas_(i));
}

ChartPoint ChartPoint::with_theta(int i, double value) const {
  Eigen::VectorXd t = thetas_;
  t(i - 1) = value;
  return {x_, t};
}

ScalarField::ScalarField(double c) {
  if (c != 0.0) add_term(Key{0, Mode::Cos, {}}, c);
}

ScalarField ScalarField::x_power(double c, int power) {
  ScalarField f;
  f.add_term(Key{power, Mode::Cos, {}}, c);
  return f;
}

ScalarField ScalarField::cos_mode(double c, std::vector<int> wave, int power) {
  ScalarField f;
  f.add_term(Key{power, Mode::Cos, std::move(wave)}, c);
  return f;
}

ScalarField ScalarField::sin_mode(double c, std::vector<int> wave, int power) {
  ScalarField f;
  f.add_term(Key{power, Mode::Sin, std::move(wave)}, c);
  return f;
}

ScalarField ScalarField::opaque(Evaluator eval, int max_order) {
  return make_opaque(std::move(eval), max_order);
}

ScalarField ScalarField::make_opaque(Evaluator eval, int max_order) {
  ScalarField f;
  f.opaque_ = std::make_shared<const Evaluator>(std::move(eval));
  f.opaque_order_ = max_order;
  return f;
}

void ScalarField::add_term(Key key, double c) {
  if (c == 0.0) return;
  while (!key.wave.empty() && key.wave.back() == 0) key.wave.pop_back();
  if (key.wave.empty() && key.mode == Mode::Sin) return;
  auto first = std::find_if(key.wave.begin(), key.wave.end(), [](int v) { return v != 0; });
  if (first != key.wave.end() && *first < 0) {
    for (int& v : key.wave) v = -v;
    if (key.mode == Mode::Sin) c = -c;
  }
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

bool ScalarField::is_constant() const {
  if (!is_polynomial()) return false;
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.power == 0 &&
                            terms_.begin()->first.wave.empty());
}

bool ScalarField::is_zero() const { return is_polynomial() && terms_.empty(); }

int ScalarField::x_degree() const {
  if (!is_polynomial()) throw UnsupportedError("x_degree of an opaque field");
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.power);
  return d;
}

bool ScalarField::is_x_independent() const {
  if (!is_polynomial()) return false;
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.power == 0; });
}

int ScalarField::max_derivative_order() const {
  return is_polynomial() ? std::numeric_limits<int>::max() : opaque_order_;
}

double ScalarField::evaluate(const ChartPoint& p, int x_order) const {
  if (opaque_) {
    if (x_order > opaque_order_)
      throw InputError("derivative order " + std::to_string(x_order) + " exceeds declared order " +
                       std::to_string(opaque_order_));
    return (*opaque_)(p, x_order);
  }
  double acc = 0.0;
  for (const auto& [key, c] : terms_) {
    if (key.power < x_order) continue;
    double phase = 0.0;
    for (std::size_t i = 0; i < key.wave.size(); ++i) {
      if (key.wave[i] == 0) continue;
      if (static_cast<Eigen::Index>(i) >= p.thetas().size())
        throw InputError("field depends on theta_" + std::to_string(i + 1) +
                         " beyond the chart dimension");
      phase += key.wave[i] * p.thetas()(static_cast<Eigen::Index>(i));
    }
    const double trig = key.mode == Mode::Cos ? std::cos(phase) : std::sin(phase);
    acc += c * falling(key.power, x_order) * int_pow(p.x(), key.power - x_order) * trig;
  }
  return acc;
}

Polynomial<double> ScalarField::integrate_over_torus(int num_angles) const {
  if (!is_polynomial()) throw UnsupportedError("exact torus integral of an opaque field");
  Polynomial<double>::Coefficients c = Polynomial<double>::Coefficients::Zero(x_degree() + 1);
  const double volume = std::pow(kTwoPi, num_angles);
  for (const auto& [key, coef] : terms_)
    if (key.mode == Mode::Cos && key.wave.empty()) c(key.power) += coef * volume;
  return Polynomial<double>(c);
}

ScalarField::Evaluator ScalarField::as_evaluator() const {
  if (opaque_) return *opaque_;
  ScalarField copy = *this;
  return [copy](const ChartPoint& p, int order) { return copy.evaluate(p, order); };
}

ScalarField ScalarField::operator-() const {
  if (opaque_) {
    auto inner = opaque_;
    return make_opaque([inner](const ChartPoint& p, int r) { return -(*inner)(p, r); }, opaque_order_);
  }
  ScalarField out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.is_polynomial() && b.is_polynomial()) {
    ScalarField out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(k, c);
    return out;
  }
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto ea = a.as_evaluator();
  auto eb = b.as_evaluator();
  return ScalarField::make_opaque(
      [ea, eb](const ChartPoint& p, int r) { return ea(p, r) + eb(p, r); },
      std::min(a.max_derivative_order(), b.max_derivative_order()));
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  using Key = ScalarField::Key;
  using Mode = ScalarField::Mode;
  if (a.is_polynomial() && b.is_polynomial()) {
    ScalarField out;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        const int power = ka.power + kb.power;
        const double h = 0.5 * ca * cb;
        auto diff = combine(ka.wave, kb.wave, -1);
        auto sum = combine(ka.wave, kb.wave, +1);
        if (ka.mode == Mode::Cos && kb.mode == Mode::Cos) {
          out.add_term(Key{power, Mode::Cos, diff}, h);
          out.add_term(Key{power, Mode::Cos, sum}, h);
        } else if (ka.mode == Mode::Sin && kb.mode == Mode::Sin) {
          out.add_term(Key{power, Mode::Cos, diff}, h);
          out.add_term(Key{power, Mode::Cos, sum}, -h);
        } else if (ka.mode == Mode::Sin) {
          out.add_term(Key{power, Mode::Sin, sum}, h);
          out.add_term(Key{power, Mode::Sin, diff}, h);
        } else {
          out.add_term(Key{power, Mode::Sin, sum}, h);
          out.add_term(Key{power, Mode::Sin, diff}, -h);
        }
      }
    }
    return out;
  }
  if (a.is_zero() || b.is_zero()) return ScalarField();
  auto ea = a.as_evaluator();
  auto eb = b.as_evaluator();
  // Leibniz rule in x.
  return ScalarField::make_opaque(
      [ea, eb](const ChartPoint& p, int r) {
        double acc = 0.0;
        for (int i = 0; i <= r; ++i) acc += binomial(r, i) * ea(p, i) * eb(p, r - i);
        return acc;
      },
      std::min(a.max_derivative_order(), b.max_derivative_order()));
}

}  // namespace deblog
