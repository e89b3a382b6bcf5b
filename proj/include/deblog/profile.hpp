#pragma once

#include "deblog/check_report.hpp"
#include "deblog/polynomial.hpp"

#include <string>
#include <vector>

namespace deblog {

/// Even-case profiles desingularize m = 2k, odd-case profiles m = 2k + 1.
enum class Parity { Even, Odd };

/// Odd-case tail for k > 0: Corrected uses -1/(2k t^{2k}) (derivative
/// t^{-(2k+1)}); PaperLiteral uses -1/((2k+2) t^{2k+2}).
enum class TailMode { Corrected, PaperLiteral };

std::string to_string(Parity p);
std::string to_string(TailMode m);
TailMode parse_tail_mode(const std::string& text);

/// The desingularizing function f, piecewise:
///
/// Even case (odd function, k >= 1):
///   |t| <= 1 : polynomial with f' > 0, f(0) = 0, f(1) = 2 - 1/(2k-1)
///   |t| >  1 : -1/((2k-1) t^{2k-1}) +- tail_constant
/// Odd case (even function, k >= 0):
///   |t| <= 1     : 2 - t^2
///   1 < |t| <= 2 : Hermite bridge
///   |t| >  2     : log|t| (k = 0) or the TailMode tail
///
/// Neighbouring pieces agree in derivatives 0..junction_order at each
/// boundary. Pieces are stored in long double; evaluation returns double.
struct Profile {
  Parity parity = Parity::Even;
  int k = 1;
  int junction_order = 4;
  TailMode tail_mode = TailMode::Corrected;
  /// Even case: f on [-1, 1]. Odd case: 2 - t^2.
  Polynomial<long double> interior;
  /// Odd case only: f(1 + s) = bridge(s) + s^{J+1} bridge_factor(s - 1)
  /// for s in [0, 1].
  Polynomial<long double> bridge;
  Polynomial<long double> bridge_factor;
  /// Even-case tail offset (2 for a valid profile).
  long double tail_constant = 2.0L;
  /// Even case: degree of the positivity correction added to the Hermite jet.
  int correction_degree = 0;
  int max_derivative_order = 0;
  std::vector<std::string> warnings;

  /// f_eps differs from the tail only for |x| < eps * core_half_width().
  double core_half_width() const { return parity == Parity::Even ? 1.0 : 2.0; }
  /// Exponent e with f_eps(x) = eps^{-e} f(x / eps).
  int scaling_exponent() const { return parity == Parity::Even ? 2 * k - 1 : 2 * k; }
  /// Singularity order m this profile desingularizes.
  int singularity_order() const { return parity == Parity::Even ? 2 * k : 2 * k + 1; }
};

Profile build_even_profile(int k, int junction_order);
Profile build_odd_profile(int k, int junction_order, TailMode tail_mode = TailMode::Corrected);
/// Default junction order 2k + 2.
Profile build_profile_for_order(int m, int junction_order = -1, TailMode tail_mode = TailMode::Corrected);

/// d^order f / dt^order at t, exact per piece.
double eval_profile(const Profile& p, double t, int order);

/// One-sided derivative at a piece boundary: side < 0 uses the piece to the
/// left of t, side > 0 the piece to the right.
long double eval_profile_piece(const Profile& p, long double t, int order, int side);

/// d^order f_eps / dx^order at x, f_eps(x) = eps^{-e} f(x / eps).
double eval_scaled(const Profile& p, double eps, double x, int order);

/// g(t) = 1 / f'(t) for even-case profiles.
double reciprocal_derivative(const Profile& p, double t);

/// g, g', ..., g^{(max_order)} at t by the Leibniz recurrence on f' g = 1,
/// using exact derivatives of the pieces.
std::vector<double> reciprocal_derivatives(const Profile& p, double t, int max_order);

/// The closed-form tail of a valid profile at t (|t| beyond the core),
/// independent of the stored pieces; used as the validation oracle.
long double reference_tail(const Profile& p, long double t, int order);

struct ProfileValidationOptions {
  double tol = 1e-9;         // junction and tail mismatch, relative to max(1, |value|)
  int sign_samples = 4096;   // dense sampling for sign conditions
  int symmetry_samples = 1000;
};

CheckReport validate_profile(const Profile& p, const ProfileValidationOptions& opts = {});

}  // namespace deblog
