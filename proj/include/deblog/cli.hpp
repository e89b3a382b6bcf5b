#pragma once

#include "deblog/errors.hpp"
#include "deblog/grid.hpp"
#include "deblog/model.hpp"
#include "deblog/profile.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace deblog {

/// Spec problems, with line (syntax) or field (content) context in what().
class SpecError : public InputError {
 public:
  using InputError::InputError;
};

struct RunConfig {
  GridSpec grid;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  double lambda = 0.5;
  double cap_offset = 0.0;
  std::optional<ScalarField> leaf_moment;
};

struct ParsedSpec {
  LaurentModel model;
  Profile profile;
  RunConfig config;
};

/// Parses a JSON model spec:
///
///   {
///     "label": "darboux-k1",
///     "m": 2, "n": 1,
///     "alphas": [{"dtheta1": 1}, {}],
///     "beta": [{"j": 0, "form": {"dtheta2^dtheta3": 1}}],
///     "gamma": {"dtheta3": [{"c": 0.5, "sin": [0, 1]}]},
///     "profile": {"J": 4, "tail_mode": "corrected"},
///     "grids": {"x_points": 401, "theta_points": 16},
///     "eps_ladder": [0.2, 0.1, 0.05, 0.025],
///     "lambda": 0.5,
///     "leaf_moment": [{"c": 1, "sin": [0, 1]}]
///   }
///
/// A coefficient is a number or a list of terms {"c", "cos" | "sin", "xpow"};
/// "cos"/"sin" give the wave vector over theta_1, theta_2, ....
/// Basis names are "dx" and "dthetaN" (or "dθN") joined by '^'. Fewer than m
/// alphas are padded with zero forms.
/// gamma, beta, profile, grids, eps_ladder, lambda and leaf_moment are optional.
ParsedSpec parse_model_spec(const std::string& text);
ParsedSpec load_model_spec(const std::string& path);

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 check failure, 2 input error
  std::vector<std::string> files;
};

/// argv[0] is the program name, argv[1] the subcommand.
RunResult run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace deblog
