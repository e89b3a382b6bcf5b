#include "deblog/profile.hpp"

#include "deblog/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace deblog {

namespace {

using LPoly = Polynomial<long double>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

constexpr int kMaxCorrectionDegree = 10;
constexpr int kPositivitySamples = 4096;

long double falling(long double a, int r) {
  long double v = 1.0L;
  for (int i = 0; i < r; ++i) v *= a - i;
  return v;
}

long double binomial(int n, int r) {
  long double v = 1.0L;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

/// d^r/dt^r of c * t^a for t > 0.
long double power_term(long double c, int a, long double t, int r) {
  return c * falling(a, r) * std::pow(t, static_cast<long double>(a - r));
}

/// int_0^1 (1 - t^2)^a dt.
long double wallis(int a) {
  long double v = 1.0L;
  for (int i = 1; i <= a; ++i) v *= (2.0L * i) / (2.0L * i + 1.0L);
  return v;
}

/// (1 - t^2)^a as a polynomial in t.
LPoly one_minus_t2_power(int a) {
  LVector c(3);
  c << 1.0L, 0.0L, -1.0L;
  const LPoly base(c);
  LPoly out = LPoly::constant(1.0L);
  for (int i = 0; i < a; ++i) out = out * base;
  return out;
}

long double integrate01(const LPoly& p) { return p.integrate(0.0L, 1.0L); }

/// Tail value for u > core, ignoring the even-case offset.
long double tail_without_offset(const Profile& p, long double u, int order) {
  if (p.parity == Parity::Even) return power_term(-1.0L / (2 * p.k - 1), -(2 * p.k - 1), u, order);
  if (p.k == 0) {
    if (order == 0) return std::log(u);
    const long double sign = (order % 2 == 1) ? 1.0L : -1.0L;
    return sign * std::tgamma(static_cast<long double>(order)) * std::pow(u, static_cast<long double>(-order));
  }
  if (p.tail_mode == TailMode::Corrected) return power_term(-1.0L / (2 * p.k), -2 * p.k, u, order);
  return power_term(-1.0L / (2 * p.k + 2), -(2 * p.k + 2), u, order);
}

enum class Piece { Interior, Bridge, Tail };

Piece piece_for(const Profile& p, long double u, int side) {
  // side < 0 selects the piece just below u, side > 0 the piece just above;
  // side == 0 uses the closed-interval convention of eval_profile.
  auto below = [&](long double b) { return side > 0 ? u < b : u <= b; };
  if (below(1.0L)) return Piece::Interior;
  if (p.parity == Parity::Even) return Piece::Tail;
  if (below(2.0L)) return Piece::Bridge;
  return Piece::Tail;
}

long double eval_piece(const Profile& p, Piece piece, long double u, int order) {
  switch (piece) {
    case Piece::Interior: return p.interior.derivative(u, order);
    case Piece::Bridge: {
      const long double s = u - 1.0L;
      const int power = p.junction_order + 1;
      long double v = p.bridge.derivative(s, order);
      for (int i = 0; i <= std::min(order, power); ++i)
        v += binomial(order, i) * power_term(1.0L, power, s, i) * p.bridge_factor.derivative(s - 1.0L, order - i);
      return v;
    }
    case Piece::Tail: {
      long double v = tail_without_offset(p, u, order);
      if (p.parity == Parity::Even && order == 0) v += p.tail_constant;
      return v;
    }
  }
  return 0.0L;
}

/// Sign relating f^{(r)}(-u) to f^{(r)}(u).
long double mirror_sign(const Profile& p, int order) {
  const bool odd_function = p.parity == Parity::Even;
  const int flips = odd_function ? order + 1 : order;
  return (flips % 2 == 0) ? 1.0L : -1.0L;
}

void require_order(const Profile& p, int order) {
  if (order < 0) throw InputError("negative derivative order");
  if (order > p.max_derivative_order)
    throw InputError("derivative order " + std::to_string(order) + " exceeds the profile's maximum " +
                     std::to_string(p.max_derivative_order));
}

/// Even-case f' on [0, 1] in s = 1 - t^2 coordinates: the exact jet of
/// (1 - s)^{-k} through order J - 1 plus s^J q(s), with q of the given
/// degree minimizing int_0^1 (f'')^2 dt under the area normalization.
/// Returns f' as a polynomial in t.
LPoly even_derivative_candidate(int k, int J, int degree) {
  const long double area = 2.0L - 1.0L / (2 * k - 1);
  LPoly jet = LPoly::constant(0.0L);
  long double jet_area = 0.0L;
  for (int i = 0; i < J; ++i) {
    const long double h = binomial(k + i - 1, i);
    jet = jet + h * one_minus_t2_power(i);
    jet_area += h * wallis(i);
  }
  const int unknowns = degree + 1;
  std::vector<LPoly> basis;
  for (int j = 0; j < unknowns; ++j) basis.push_back(one_minus_t2_power(J + j));

  LMatrix kkt = LMatrix::Zero(unknowns + 1, unknowns + 1);
  LVector rhs = LVector::Zero(unknowns + 1);
  const LPoly jet_slope = jet.derivative();
  for (int a = 0; a < unknowns; ++a) {
    const LPoly slope_a = basis[a].derivative();
    for (int b = 0; b < unknowns; ++b) kkt(a, b) = integrate01(slope_a * basis[b].derivative());
    rhs(a) = -integrate01(jet_slope * slope_a);
    kkt(a, unknowns) = kkt(unknowns, a) = wallis(J + a);
  }
  rhs(unknowns) = area - jet_area;
  const LVector sol = kkt.fullPivLu().solve(rhs);

  LPoly out = jet;
  for (int j = 0; j < unknowns; ++j) out = out + sol(j) * basis[j];
  return out;
}

long double min_on_unit_interval(const LPoly& p) {
  long double lo = std::numeric_limits<long double>::infinity();
  for (int i = 0; i <= kPositivitySamples; ++i)
    lo = std::min(lo, p(static_cast<long double>(i) / kPositivitySamples));
  return lo;
}

}  // namespace

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

std::string to_string(TailMode m) { return m == TailMode::Corrected ? "corrected" : "paper-literal"; }

TailMode parse_tail_mode(const std::string& text) {
  if (text == "corrected") return TailMode::Corrected;
  if (text == "paper-literal" || text == "paper_literal" || text == "literal") return TailMode::PaperLiteral;
  throw InputError("unknown tail mode '" + text + "' (expected corrected | paper-literal)");
}

Profile build_even_profile(int k, int junction_order) {
  if (k < 1) throw InputError("even-case profiles need k >= 1");
  if (junction_order < 1) throw InputError("junction order J must be >= 1");
  Profile p;
  p.parity = Parity::Even;
  p.k = k;
  p.tail_constant = 2.0L;

  for (int J = junction_order; J >= 1; --J) {
    for (int degree = 0; degree <= kMaxCorrectionDegree; ++degree) {
      LPoly slope = even_derivative_candidate(k, J, degree);
      if (min_on_unit_interval(slope) <= 0.0L) continue;
      p.junction_order = J;
      p.correction_degree = degree;
      p.interior = slope.antiderivative();
      p.max_derivative_order = J + 2 * k + 1;
      if (J != junction_order)
        p.warnings.push_back("junction order reduced from " + std::to_string(junction_order) + " to " +
                             std::to_string(J) + " to keep f' > 0");
      return p;
    }
  }
  throw InputError("no positive even profile found for k=" + std::to_string(k) +
                   " (positivity constraint failed at every junction order)");
}

Profile build_odd_profile(int k, int junction_order, TailMode tail_mode) {
  if (k < 0) throw InputError("odd-case profiles need k >= 0");
  if (junction_order < 1) throw InputError("junction order J must be >= 1");
  Profile p;
  p.parity = Parity::Odd;
  p.k = k;
  p.junction_order = junction_order;
  p.tail_mode = k == 0 ? TailMode::Corrected : tail_mode;
  p.max_derivative_order = junction_order + 2 * k + 2;

  LVector interior(3);
  interior << 2.0L, 0.0L, -1.0L;
  p.interior = LPoly(interior);

  // Bridge in s = t - 1: Taylor part of the interior at s = 0 plus
  // s^{J+1} C(s), with C fixed by the tail jet at s = 1.
  const int J = junction_order;
  LVector taylor = LVector::Zero(std::min(J, 2) + 1);
  const long double interior_jet[3] = {1.0L, -2.0L, -1.0L};  // (2 - (1+s)^2) coefficients
  for (int i = 0; i < taylor.size(); ++i) taylor(i) = interior_jet[i];
  const LPoly taylor_part(taylor);

  // With u = s - 1, s^{J+1} C(s) must reproduce the jet E(u) of
  // (tail - Taylor part) through u^J, so C = E (1 + u)^{-(J+1)} mod u^{J+1}.
  LVector jet(J + 1);
  long double factorial = 1.0L;
  for (int r = 0; r <= J; ++r) {
    if (r > 0) factorial *= r;
    jet(r) = (tail_without_offset(p, 2.0L, r) - taylor_part.derivative(1.0L, r)) / factorial;
  }
  LVector c_in_u = LVector::Zero(J + 1);
  for (int i = 0; i <= J; ++i) {
    const long double inverse_power = falling(-(J + 1), i) / std::tgamma(static_cast<long double>(i + 1));
    for (int r = 0; i + r <= J; ++r) c_in_u(i + r) += inverse_power * jet(r);
  }
  p.bridge = taylor_part;
  p.bridge_factor = LPoly(c_in_u);
  if (tail_mode == TailMode::PaperLiteral && k == 0)
    p.warnings.push_back("k = 0 uses the log tail; tail mode ignored");
  return p;
}

Profile build_profile_for_order(int m, int junction_order, TailMode tail_mode) {
  if (m < 1) throw InputError("singularity order m must be >= 1");
  const int k = m / 2;
  const int J = junction_order > 0 ? junction_order : 2 * k + 2;
  return m % 2 == 0 ? build_even_profile(k, J) : build_odd_profile(k, J, tail_mode);
}

long double eval_profile_piece(const Profile& p, long double t, int order, int side) {
  const long double u = std::abs(t);
  const int mirrored_side = t < 0 ? -side : side;
  const long double v = eval_piece(p, piece_for(p, u, mirrored_side), u, order);
  return t < 0 ? mirror_sign(p, order) * v : v;
}

double eval_profile(const Profile& p, double t, int order) {
  require_order(p, order);
  return static_cast<double>(eval_profile_piece(p, t, order, 0));
}

double eval_scaled(const Profile& p, double eps, double x, int order) {
  if (!(eps > 0)) throw InputError("eps must be positive");
  require_order(p, order);
  const long double e = eps;
  const long double scale = std::pow(e, -static_cast<long double>(p.scaling_exponent() + order));
  return static_cast<double>(scale * eval_profile_piece(p, static_cast<long double>(x) / e, order, 0));
}

double reciprocal_derivative(const Profile& p, double t) {
  if (p.parity != Parity::Even) throw InputError("g = 1/f' is defined for even-case profiles");
  const double slope = eval_profile(p, t, 1);
  if (!(slope > 0)) throw DegeneracyError("profile invalid: f'(" + std::to_string(t) + ") <= 0");
  return 1.0 / slope;
}

std::vector<double> reciprocal_derivatives(const Profile& p, double t, int max_order) {
  if (p.parity != Parity::Even) throw InputError("g = 1/f' is defined for even-case profiles");
  require_order(p, max_order + 1);
  std::vector<long double> slope(max_order + 1);
  for (int i = 0; i <= max_order; ++i) slope[i] = eval_profile_piece(p, t, i + 1, 0);
  if (!(slope[0] > 0)) throw DegeneracyError("profile invalid: f'(" + std::to_string(t) + ") <= 0");
  // sum_{i=0}^{j} C(j, i) f'^{(i)} g^{(j-i)} = 0 for j >= 1.
  std::vector<long double> g(max_order + 1);
  g[0] = 1.0L / slope[0];
  for (int j = 1; j <= max_order; ++j) {
    long double acc = 0.0L;
    for (int i = 1; i <= j; ++i) acc += binomial(j, i) * slope[i] * g[j - i];
    g[j] = -acc / slope[0];
  }
  return {g.begin(), g.end()};
}

long double reference_tail(const Profile& p, long double t, int order) {
  const long double u = std::abs(t);
  long double v = tail_without_offset(p, u, order);
  if (p.parity == Parity::Even && order == 0) v += 2.0L;
  return t < 0 ? mirror_sign(p, order) * v : v;
}

CheckReport validate_profile(const Profile& p, const ProfileValidationOptions& opts) {
  CheckReport report("validate_profile " + to_string(p.parity) + " k=" + std::to_string(p.k) +
                     " J=" + std::to_string(p.junction_order) +
                     (p.parity == Parity::Odd ? " tail=" + to_string(p.tail_mode) : std::string{}));
  auto relative = [](long double a, long double b) {
    return static_cast<double>(std::abs(a - b) / std::max(1.0L, std::abs(b)));
  };

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> wide(-6.0, 6.0);
  double symmetry = 0.0;
  for (int i = 0; i < opts.symmetry_samples; ++i) {
    const double t = wide(rng);
    const double sign = p.parity == Parity::Even ? -1.0 : 1.0;
    symmetry = std::max(symmetry, std::abs(eval_profile(p, -t, 0) - sign * eval_profile(p, t, 0)));
  }
  report.at_most("symmetry_max_deviation", symmetry, 1e-14);

  if (p.parity == Parity::Even) {
    report.at_most("abs_f_at_0", std::abs(eval_profile(p, 0.0, 0)), opts.tol);
    report.at_most("f_at_1_deviation", relative(eval_profile_piece(p, 1.0L, 0, -1), 2.0L - 1.0L / (2 * p.k - 1)),
                   opts.tol);
  } else {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = -1.0 + i / 100.0;
      worst = std::max(worst, std::abs(eval_profile(p, t, 0) - (2.0 - t * t)));
    }
    report.at_most("interior_max_deviation", worst, opts.tol);
    report.at_most("abs_fprime_at_0", std::abs(eval_profile(p, 0.0, 1)), opts.tol);
    report.at_most("fsecond_at_0_deviation", std::abs(eval_profile(p, 0.0, 2) + 2.0), opts.tol);
  }

  const double core = p.core_half_width();
  double tail = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const long double t = core + i * (6.0L - core) / 200;
    for (int r = 0; r <= std::min(p.junction_order, p.max_derivative_order); ++r) {
      tail = std::max(tail, relative(eval_profile_piece(p, t, r, 0), reference_tail(p, t, r)));
      tail = std::max(tail, relative(eval_profile_piece(p, -t, r, 0), reference_tail(p, -t, r)));
    }
  }
  report.at_most("tail_max_deviation", tail, opts.tol);

  double junction = 0.0;
  std::vector<long double> boundaries = {1.0L, -1.0L};
  if (p.parity == Parity::Odd) boundaries.insert(boundaries.end(), {2.0L, -2.0L});
  for (long double b : boundaries)
    for (int r = 0; r <= p.junction_order; ++r)
      junction = std::max(junction, relative(eval_profile_piece(p, b, r, -1), eval_profile_piece(p, b, r, +1)));
  report.at_most("junction_max_mismatch", junction, opts.tol);

  if (p.parity == Parity::Even) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= opts.sign_samples; ++i)
      lo = std::min(lo, eval_profile(p, -1.0 + 2.0 * i / opts.sign_samples, 1));
    report.greater_than("min_fprime_on_core", lo, 0.0);
  } else {
    int changes = 0;
    double prev = eval_profile(p, 1.0, 1);
    for (int i = 1; i <= opts.sign_samples; ++i) {
      const double cur = eval_profile(p, 1.0 + static_cast<double>(i) / opts.sign_samples, 1);
      if ((prev < 0) != (cur < 0)) ++changes;
      prev = cur;
    }
    report.info("bridge_fprime_sign_changes", changes);
    if (changes > 0) report.note("f' changes sign inside (1, 2): the bridge carries extra fold points");
  }
  for (const auto& w : p.warnings) report.note(w);
  return report;
}

}  // namespace deblog
