// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "deblog/cli.hpp"
#include "deblog/csv.hpp"
#include "deblog/desing.hpp"
#include "deblog/errors.hpp"
#include "deblog/moment.hpp"
#include "deblog/volume.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace deblog;

namespace {

const std::string kSpecs = std::string(DEBLOG_SOURCE_DIR) + "/specs/";
constexpr double kPi = std::numbers::pi;

/// Collects the sub-checks of one criterion.
struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

ChartPoint origin(int angles) { return ChartPoint(0.0, Eigen::VectorXd::Zero(angles)); }

LaurentModel wavy_model() { return load_model_spec(kSpecs + "wavy-k1.spec").model; }

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  return std::log(ys.back() / ys.front()) / std::log(xs.back() / xs.front());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void coincidence(Verdict& v) {
  const std::vector<LaurentModel> models{darboux_model(2, 1), wavy_model()};
  const Profile p = build_even_profile(1, 4);
  double worst = 0.0;
  for (const auto& model : models) {
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto r = check_coincidence(model, p, eps, symmetric_outer_grid(1.2 * eps, 0.9, 400), 8, 1e-11);
      worst = std::max(worst, r.value("max_deviation"));
      v.require(r.pass(), model.label() + " eps=" + format_real(eps));
    }
  }
  v.detail << "max |omega_eps - omega| = " << worst;
}

void symplecticity(Verdict& v) {
  const std::vector<LaurentModel> models{darboux_model(2, 1), wavy_model()};
  const Profile p = build_even_profile(1, 4);
  const std::vector<double> ladder{0.2, 0.1, 0.05};
  for (const auto& model : models) {
    SymplecticCheckOptions opts;
    opts.grid = {401, model.n() == 1 ? 64 : 8};
    std::vector<double> band;
    double least = std::numeric_limits<double>::infinity();
    for (double eps : ladder) {
      const auto r = check_symplectic(model, p, eps, opts);
      v.require(r.pass(), model.label() + " eps=" + format_real(eps));
      band.push_back(r.value("band_min_abs_top"));
      least = std::min(least, r.value("min_abs_top"));
    }
    const double slope = log_slope(ladder, band);
    v.require(std::abs(slope + 2.0) <= 0.2, model.label() + " slope");
    v.detail << model.label() << ": min|top| " << least << ", slope " << slope << "; ";
  }
}

void convergence(Verdict& v) {
  const std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};
  for (int k = 1; k <= 2; ++k) {
    const auto t = convergence_report(build_even_profile(k, 2 * k + 2), ladder, 2 * k - 1);
    const auto r = t.report();
    v.require(r.pass(), "k=" + std::to_string(k));
    v.detail << "k=" << k << " slopes";
    for (double s : t.slopes) v.detail << " " << s;
    v.detail << "; ";
  }
}

void moment_parity(Verdict& v) {
  for (int k = 1; k <= 2; ++k) {
    const auto I = moment_integrals(build_even_profile(k, 2 * k + 2), 5);
    double odd = 0.0;
    for (int i = 1; i <= 5; i += 2) odd = std::max(odd, std::abs(I[i]));
    const double i0_err = std::abs(I[0] - (4.0 - 2.0 / (2 * k - 1)));
    v.require(odd < 1e-12, "odd moments k=" + std::to_string(k));
    v.require(i0_err < 1e-12, "I_0 k=" + std::to_string(k));
    v.detail << "k=" << k << ": max|I_odd| " << odd << ", |I_0 - (4 - 2/(2k-1))| " << i0_err << "; ";
  }
}

void volume_expansion(Verdict& v) {
  const auto model = darboux_model(2, 1);
  const Profile p = build_even_profile(1, 4);
  std::vector<std::pair<double, double>> samples;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) samples.emplace_back(eps, volume_desingularized(model, p, eps));
  const auto fit = fit_expansion(samples, 1);
  const auto aug = fit_expansion(samples, 1, true);
  const double e1 = std::abs(fit.d[1] - 8 * kPi) / (8 * kPi);
  const double e0 = std::abs(fit.d[0] + 4 * kPi) / (4 * kPi);
  const double even = std::abs(aug.even[0]) / std::abs(aug.d[1]);
  v.require(e1 < 1e-3, "d_1");
  v.require(e0 < 1e-2, "d_0");
  v.require(even < 1e-3, "even powers");
  v.detail << "d_1 " << fit.d[1] << " (rel " << e1 << "), d_0 " << fit.d[0] << " (rel " << e0
           << "), even/d_1 " << even;
}

void leading_constant(Verdict& v) {
  struct Case {
    std::string name;
    LaurentModel model;
    std::vector<double> ladder;
  };
  const std::vector<double> fine{0.1, 0.05, 0.025, 0.0125, 0.00625};
  const std::vector<Case> cases{
      {"darboux(2,1)", darboux_model(2, 1), {0.2, 0.1, 0.05, 0.025}},
      {"darboux(2,2)", darboux_model(2, 2), {0.2, 0.1, 0.05, 0.025}},
      {"wavy", wavy_model(), {0.2, 0.1, 0.05, 0.025}},
      {"darboux(4,1)", darboux_model(4, 1), fine},
      {"poly-k2", load_model_spec(kSpecs + "poly-k2.spec").model, fine},
  };
  for (const auto& c : cases) {
    const Profile p = build_profile_for_order(c.model.m());
    const auto pred = predicted_expansion(c.model, p);
    std::vector<std::pair<double, double>> samples;
    for (double eps : c.ladder) samples.emplace_back(eps, volume_desingularized(c.model, p, eps));
    const int k = c.model.k();
    const double fitted = fit_expansion(samples, k).d[k];
    const double to_oracle = std::abs(fitted / pred.oracle_leading - 1.0);
    const double to_stated = std::abs(fitted / pred.stated_leading - 1.0);
    v.require(to_oracle <= 0.01, c.name + " oracle");
    v.detail << c.name << ": oracle " << (to_oracle <= 0.01 ? "matches" : "differs") << ", stated "
             << (to_stated <= 0.01 ? "matches" : "differs") << " (" << to_stated << "); ";
  }
  const auto out = (std::filesystem::temp_directory_path() / "deblog_acceptance_volume").string();
  std::ostringstream sink, err;
  const auto run = run_command({"deblog", "volume", "--spec", kSpecs + "darboux-k1.spec", "--out", out}, sink, err);
  v.require(run.exit_code == 0, "volume command");
  v.require(sink.str().find("matches the endpoint oracle 4*Z0") != std::string::npos, "report states oracle match");
  v.require(sink.str().find("DISCREPANCY") != std::string::npos, "report flags discrepancy");
}

void folded(Verdict& v) {
  const auto model = darboux_model(3, 2);
  const double eps = 0.1;
  const auto r = check_folded(model, build_odd_profile(1, 4), eps);
  const double z_factor = model.n() * z_top_coefficient(leaf_volume_form(model, origin(model.num_angles())));
  const double expected = 2.0 * std::pow(eps, -4) * z_factor;
  const double dx_rel = std::abs(r.value("min_abs_top_dx_on_Z") / expected - 1.0);
  v.require(r.value("max_abs_top_on_Z") <= 1e-10, "top on Z");
  v.require(dx_rel <= 0.05, "transversal derivative");
  v.require(r.value("min_leaf_power_norm") == 1.0, "leaf power");
  v.require(r.pass(), "check_folded");
  v.detail << "max|top| on Z " << r.value("max_abs_top_on_Z") << ", |d_x top| rel dev " << dx_rel
           << ", min|(i*w)^(n-1)| " << r.value("min_leaf_power_norm");
}

void tail_discrepancy(Verdict& v) {
  const auto model = darboux_model(3, 1);
  const double eps = 0.1;
  const auto literal = check_coincidence(model, build_odd_profile(1, 4, TailMode::PaperLiteral), eps, {0.5}, 8, 1e-11);
  const auto corrected = check_coincidence(model, build_odd_profile(1, 4, TailMode::Corrected), eps,
                                           symmetric_outer_grid(1.2 * 2 * eps, 0.9, 400), 8, 1e-11);
  v.require(literal.value("max_deviation") > 1e-3, "paper-literal deviates");
  v.require(corrected.pass(), "corrected coincides");
  v.detail << "paper-literal deviation at x=0.5: " << literal.value("max_deviation")
           << ", corrected max deviation: " << corrected.value("max_deviation");
}

void fold_locus_report(Verdict& v) {
  const Profile p = build_profile_for_order(1);
  const double eps = 0.1;
  const auto roots = fold_locus(darboux_model(1, 1), p, eps, linspace(-0.9, 0.9, 901), origin(1));
  // Oracle: sign change of the profile derivative on (1, 2), bisected directly.
  double lo = 1.0, hi = 2.0;
  const double s_lo = eval_profile(p, lo + 1e-9, 1);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eval_profile(p, mid, 1) * s_lo > 0 ? lo : hi) = mid;
  }
  const double t0 = 0.5 * (lo + hi);
  std::vector<FoldRoot> inside;
  for (const auto& r : roots)
    if (std::abs(r.x) < 2 * eps) inside.push_back(r);
  v.require(inside.size() == 3, "three roots in (-2eps, 2eps)");
  if (inside.size() == 3) {
    v.require(std::abs(inside[1].x) <= 1e-12, "root at 0");
    v.require(std::abs(inside[0].x + eps * t0) <= 1e-9 && std::abs(inside[2].x - eps * t0) <= 1e-9, "roots at +-eps t0");
    for (const auto& r : inside) v.require(r.transversal, "transversal");
  }
  v.require(t0 > 1.0 && t0 < 2.0, "t0 in (1, 2)");
  v.detail << inside.size() << " roots:";
  for (const auto& r : inside) v.detail << " " << r.x << (r.transversal ? "(T)" : "(N)");
  v.detail << ", oracle eps*t0 = " << eps * t0;
}

void profile_validation(Verdict& v) {
  double worst = 0.0;
  for (int k = 0; k <= 3; ++k) {
    std::vector<Profile> ps{build_odd_profile(k, 2 * k + 2, TailMode::Corrected)};
    if (k >= 1) ps.push_back(build_even_profile(k, 2 * k + 2));
    for (const auto& p : ps) {
      const auto r = validate_profile(p);
      const double j = r.value("junction_max_mismatch");
      worst = std::max(worst, j);
      const std::string name = (p.parity == Parity::Even ? "even k=" : "odd k=") + std::to_string(k);
      v.require(r.pass(), name);
      v.require(j < 1e-9, name + " junction");
    }
  }
  v.detail << "max junction mismatch " << worst;
}

void moment_images(Verdict& v) {
  const auto c2 = moment_image_case2(build_even_profile(1, 4), 0.1, 0.5);
  v.require(std::abs(c2.upper - 18.0) <= 1e-12, "case 2 endpoint");
  double ratio = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const auto r = moment_scaling_report(build_even_profile(k, 2 * k + 2), {0.04, 0.02, 0.01, 0.005}, 0.5, 0.05);
    v.require(r.pass(), "ratio test k=" + std::to_string(k));
    ratio = std::max(ratio, r.value("max_ratio_deviation"));
  }
  // Case 1 through the CLI: every eps row must carry the same bytes.
  const auto out = (std::filesystem::temp_directory_path() / "deblog_acceptance_moment").string();
  std::ostringstream sink, err;
  const auto run = run_command({"deblog", "moment-image", "--spec", kSpecs + "wavy-k1.spec", "--out", out}, sink, err);
  v.require(run.exit_code == 0, "moment-image command");
  std::istringstream csv(slurp(out + "/moment.csv"));
  std::string line, first;
  int rows = 0;
  bool same = true;
  while (std::getline(csv, line)) {
    if (line.size() < 6 || line.substr(line.size() - 6) != ",case1") continue;
    const std::string bounds = line.substr(line.find(',') + 1);
    if (rows++ == 0) first = bounds;
    same = same && bounds == first;
  }
  v.require(rows >= 2 && same, "case 1 bitwise eps-independent");
  const auto model = wavy_model();
  const auto a = moment_image_case1(model, ScalarField::sin_mode(1.0, {0, 1, 0}));
  const auto b = moment_image_case1(model, ScalarField::sin_mode(1.0, {0, 1, 0}));
  v.require(std::memcmp(&a.lower, &b.lower, sizeof(double)) == 0 && std::memcmp(&a.upper, &b.upper, sizeof(double)) == 0,
            "case 1 repeatable");
  v.detail << "case 2 upper " << c2.upper << ", ratio deviation " << ratio << ", case 1 rows " << rows << " ["
           << first << "]";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"coincidence", coincidence},
      {"symplecticity", symplecticity},
      {"C^{2k-1} convergence", convergence},
      {"moment integral parity", moment_parity},
      {"volume expansion", volume_expansion},
      {"leading constant", leading_constant},
      {"folded checks", folded},
      {"tail discrepancy", tail_discrepancy},
      {"fold locus", fold_locus_report},
      {"profile validation", profile_validation},
      {"moment images", moment_images},
  };
  std::cout.precision(6);
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    v.detail.precision(6);
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 30.0) {
      v.ok = false;
      v.detail << " [over 30 s]";
    }
    failed += v.ok ? 0 : 1;
    std::cout << (v.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " (" << secs << " s): "
              << v.detail.str() << "\n";
  }
  return failed == 0 ? 0 : 1;
}
