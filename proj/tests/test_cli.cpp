#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deblog/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace deblog;
namespace fs = std::filesystem;

namespace {

const std::string kSpecs = std::string(DEBLOG_SOURCE_DIR) + "/specs/";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_model_spec(text);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

struct Run {
  int code;
  std::string out;
  std::string err;
  std::vector<std::string> files;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "deblog");
  std::ostringstream out, err;
  const auto r = run_command(args, out, err);
  return {r.exit_code, out.str(), err.str(), r.files};
}

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("deblog_test_cli_" + name);
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("shipped specs parse") {
  for (const auto& entry : fs::directory_iterator(kSpecs)) {
    INFO(entry.path().string());
    const ParsedSpec spec = load_model_spec(entry.path().string());
    CHECK(spec.model.m() >= 1);
    CHECK(spec.profile.singularity_order() == spec.model.m());
    CHECK(!spec.config.eps_ladder.empty());
  }
  const auto wavy = load_model_spec(kSpecs + "wavy-k1.spec");
  CHECK(wavy.model.n() == 2);
  CHECK(wavy.config.leaf_moment.has_value());
  CHECK(wavy.config.grid.theta_points == 8);
}

TEST_CASE("spec errors name the line or the field") {
  const std::string syntax = "{\n  \"m\": 2,\n  \"n\": 1,\n  \"alphas\": [ {\"dtheta1\": 1}, ]\n}";
  CHECK(error_of(syntax).find("line 4") != std::string::npos);

  const std::string many = R"({"m": 2, "n": 1, "alphas": [{"dtheta1": 1}, {}, {}]})";
  CHECK(error_of(many).find("expected m=2 Laurent coefficients") != std::string::npos);

  const std::string basis = R"({"m": 2, "n": 1, "alphas": [{"dtheta2": 1}, {}]})";
  CHECK(error_of(basis).find("alphas[0].dtheta2") != std::string::npos);

  const std::string degree = R"({"m": 2, "n": 2, "alphas": [{"dtheta1^dtheta2": 1}, {}]})";
  CHECK(error_of(degree).find("1-form") != std::string::npos);

  const std::string ladder = R"({"m": 2, "n": 1, "alphas": [{"dtheta1": 1}, {}], "eps_ladder": [0.1, 0.2]})";
  CHECK(error_of(ladder).find("strictly decreasing") != std::string::npos);

  const std::string big = R"({"m": 2, "n": 1, "alphas": [{"dtheta1": 1}, {}], "eps_ladder": [0.6]})";
  CHECK(error_of(big).find("(0, 1/2)") != std::string::npos);

  const std::string typo = R"({"m": 2, "n": 1, "alphas": [{"dtheta1": 1}, {}], "lamda": 0.5})";
  CHECK(error_of(typo).find("lamda") != std::string::npos);

  const std::string term = R"({"m": 2, "n": 1, "alphas": [{"dtheta1": [{"c": 1, "cos": [1], "sin": [1]}]}, {}]})";
  CHECK(error_of(term).find("alphas[0].dtheta1[0]") != std::string::npos);

  CHECK_THROWS_AS(load_model_spec(kSpecs + "missing.spec"), InputError);
}

TEST_CASE("short alpha lists and omitted gamma default to zero") {
  const auto spec = parse_model_spec(R"({"m": 2, "n": 1, "alphas": [{"d\u03b81": 1}]})");
  const auto ref = darboux_model(2, 1);
  REQUIRE(spec.model.alphas().size() == 2);
  Eigen::VectorXd th(1);
  th << 0.4;
  for (double x : {-0.5, 0.0, 0.3}) {
    const ChartPoint z(x, th);
    for (int i = 0; i < 2; ++i)
      CHECK(max_abs_difference(evaluate(spec.model.alphas()[i], z), evaluate(ref.alphas()[i], z)) == 0.0);
    CHECK(evaluate(spec.model.gamma(), z).is_zero());
  }
}

TEST_CASE("coefficients and forms round-trip") {
  const std::string text = R"({
    "m": 2, "n": 2,
    "alphas": [{"dtheta1": 1}, {"dtheta2": [{"c": 0.25}]}],
    "beta": [{"j": 0, "form": {"dtheta3^dtheta2": 2}}],
    "gamma": {"dtheta3": [{"c": 0.5, "sin": [0, 1, 0], "xpow": 1}]}
  })";
  const auto spec = parse_model_spec(text);
  Eigen::VectorXd th(3);
  th << 0.1, 0.7, 0.3;
  const ChartPoint z(0.4, th);
  const FormValue b0 = evaluate(spec.model.betas()[0], z);
  CHECK(b0.coefficient(BasisMask{0b1100}) == doctest::Approx(-2.0));
  const FormValue g = evaluate(spec.model.gamma(), z);
  CHECK(g.coefficient(BasisMask{0b1000}) == doctest::Approx(0.5 * std::sin(0.7) * 0.4));
  CHECK(spec.profile.junction_order == 4);
  CHECK(spec.profile.tail_mode == TailMode::Corrected);
}

TEST_CASE("exit codes") {
  const std::string out = scratch("codes");
  CHECK(run({"validate", "--spec", kSpecs + "darboux-k1.spec", "--out", out}).code == 0);
  CHECK(run({"validate", "--spec", kSpecs + "missing.spec", "--out", out}).code == 2);
  CHECK(run({"validate", "--out", out}).code == 2);
  CHECK(run({"frobnicate", "--spec", kSpecs + "darboux-k1.spec"}).code == 2);
  CHECK(run({}).code == 2);

  const auto odd = run({"check-symplectic", "--spec", kSpecs + "darboux-k1-odd.spec", "--out", out});
  CHECK(odd.code == 2);
  CHECK(odd.err.find("even") != std::string::npos);
  CHECK(run({"check-folded", "--spec", kSpecs + "darboux-k1.spec", "--out", out}).code == 2);
  CHECK(run({"fit", "--spec", kSpecs + "darboux-k1.spec", "--eps", "0.1,0.2", "--out", out}).code == 2);
  CHECK(run({"fit", "--spec", kSpecs + "darboux-k1.spec", "--grid", "2,4", "--out", out}).code == 2);

  // A tolerance no computation can meet turns a passing check into a failure.
  const auto strict = run({"converge", "--spec", kSpecs + "darboux-k1.spec", "--tol", "1e-300", "--out", out});
  CHECK(strict.code == 1);
  CHECK(strict.out.find("RESULT FAIL") != std::string::npos);
  CHECK(run({"converge", "--spec", kSpecs + "darboux-k1.spec", "--out", out}).code == 0);
}

TEST_CASE("commands write their tables") {
  const std::string out = scratch("tables");
  const auto v = run({"volume", "--spec", kSpecs + "darboux-k1.spec", "--out", out});
  REQUIRE(v.code == 0);
  const std::string csv = slurp(out + "/volume.csv");
  CHECK(csv.rfind("eps,volume_complement,volume_inside,volume_total,predicted_total\n", 0) == 0);
  CHECK(slurp(out + "/volume_comparison.csv").find("oracle") != std::string::npos);
  CHECK(v.out.find("DISCREPANCY") != std::string::npos);

  const auto m = run({"moment-image", "--spec", kSpecs + "wavy-k1.spec", "--out", out});
  REQUIRE(m.code == 0);
  const std::string moment = slurp(out + "/moment.csv");
  CHECK(moment.rfind("eps,lower,upper,case_tag\n", 0) == 0);
  CHECK(moment.find("case1") != std::string::npos);
  CHECK(moment.find("case2") != std::string::npos);

  const auto f = run({"fold-locus", "--spec", kSpecs + "darboux-k0-odd.spec", "--out", out});
  REQUIRE(f.code == 0);
  CHECK(slurp(out + "/fold_locus.csv").find("eps,theta_index,x,transversal,top_dx\n") == 0);
}

TEST_CASE("runs are byte-identical") {
  const std::string a = scratch("det_a");
  const std::string b = scratch("det_b");
  for (const std::string cmd : {"volume", "check-symplectic", "converge"}) {
    const auto ra = run({cmd, "--spec", kSpecs + "wavy-k1.spec", "--out", a});
    const auto rb = run({cmd, "--spec", kSpecs + "wavy-k1.spec", "--out", b});
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
      INFO(ra.files[i]);
      CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
    }
  }
}
