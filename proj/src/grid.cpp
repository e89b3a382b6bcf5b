#include "deblog/grid.hpp"

#include "deblog/errors.hpp"
#include "deblog/scalar_field.hpp"

#include <algorithm>

namespace deblog {

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw InputError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
  out.back() = hi;
  return out;
}

std::vector<Eigen::VectorXd> theta_grid(int num_angles, int points_per_angle) {
  if (points_per_angle < 1) throw InputError("theta grid needs at least one point per angle");
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXi index = Eigen::VectorXi::Zero(num_angles);
  while (true) {
    out.push_back(index.cast<double>() * (kTwoPi / points_per_angle));
    int d = 0;
    while (d < num_angles && ++index(d) == points_per_angle) index(d++) = 0;
    if (d == num_angles) break;
  }
  return out;
}

std::vector<double> clustered_x_grid(double band, int points, double x_max) {
  if (band <= 0 || band >= x_max) throw InputError("band must lie inside (0, x_max)");
  if (points < 5) throw InputError("clustered grid needs at least 5 points");
  int inner = points / 2;
  if (inner % 2 == 0) ++inner;
  const int outer_each = (points - inner) / 2;
  std::vector<double> out = linspace(-band, band, inner);
  if (outer_each > 0) {
    // Outer points exclude the shared endpoint at |x| = band.
    auto right = linspace(band, x_max, outer_each + 1);
    for (int i = 1; i <= outer_each; ++i) {
      out.push_back(right[i]);
      out.push_back(-right[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> symmetric_outer_grid(double lo, double hi, int points) {
  if (!(0 < lo && lo < hi)) throw InputError("outer grid needs 0 < lo < hi");
  auto side = linspace(lo, hi, std::max(1, points / 2));
  std::vector<double> out;
  for (double v : side) {
    out.push_back(v);
    out.push_back(-v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace deblog
