#pragma once

#include <Eigen/Dense>

#include <vector>

namespace deblog {

/// Sampling resolution for sweeps over Z x (-1, 1).
struct GridSpec {
  int x_points = 401;
  int theta_points = 16;  // per angle
};

/// Tensor grid on T^{num_angles}, angles j * 2pi / points_per_angle.
std::vector<Eigen::VectorXd> theta_grid(int num_angles, int points_per_angle);

/// x-grid on [-x_max, x_max] with half of the points uniform in x / band
/// inside [-band, band] (always including 0 for odd counts) and the rest
/// uniform on the two outer intervals.
std::vector<double> clustered_x_grid(double band, int points, double x_max = 0.9);

/// Symmetric grid on [-hi, -lo] U [lo, hi], points / 2 per side.
std::vector<double> symmetric_outer_grid(double lo, double hi, int points);

std::vector<double> linspace(double lo, double hi, int points);

}  // namespace deblog
