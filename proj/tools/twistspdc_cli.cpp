// twistspdc: entanglement of SPDC photon pairs pumped by twisted Gaussian
// Schell-model beams.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
// 3 decomposition infeasible, 4 config parse error.

#include "twistspdc/decompose.hpp"
#include "twistspdc/errors.hpp"
#include "twistspdc/sweep.hpp"
#include "twistspdc/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kInvalidParams = 2,
  kInfeasible = 3,
  kConfigError = 4,
};

struct SetupFlags {
  std::optional<double> sigma_m;
  std::optional<double> wavelength_m;
  std::optional<double> length_m;
  std::optional<double> inv_curvature_m;

  void add_to(CLI::App* app) {
    app->add_option("--sigma-m", sigma_m, "Pump beam waist sigma (m) [5e-5]");
    app->add_option("--wavelength-m", wavelength_m, "Pump wavelength (m) [4e-7]");
    app->add_option("--length-m", length_m, "Crystal length L (m) [1e-2]");
    app->add_option("--inv-curvature-m", inv_curvature_m, "Reciprocal radius of curvature 1/R (1/m) [0]");
  }

  void apply(twistspdc::Setup& s) const {
    if (sigma_m) s.sigma_m = *sigma_m;
    if (wavelength_m) s.wavelength_m = *wavelength_m;
    if (length_m) s.crystal_length_m = *length_m;
    if (inv_curvature_m) s.curvature_inv_m = *inv_curvature_m;
  }
};

struct PointFlags {
  double beta = 1.0;
  double twist = 0.0;
  int twist_sign = 1;

  void add_to(CLI::App* app) {
    app->add_option("--beta", beta, "Normalized pump coherence beta in (0, 1]")->required();
    app->add_option("--twist", twist, "Normalized twist |u| k delta^2 in [0, 1]")->capture_default_str();
    app->add_option("--twist-sign", twist_sign, "Sign of the twist phase (+1 or -1)")->capture_default_str();
  }

  twistspdc::NormalizedPoint point() const { return {beta, twist, twist_sign}; }
};

int cmd_report(const PointFlags& pf, const SetupFlags& sf) {
  twistspdc::Setup setup;
  sf.apply(setup);
  const auto report = twistspdc::evaluate_point(setup, pf.point());
  std::cout << twistspdc::report_json(report).dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& out, const SetupFlags& sf, unsigned threads) {
  twistspdc::SweepSpec spec = config.empty() ? twistspdc::SweepSpec{} : twistspdc::load_sweep_spec(config);
  sf.apply(spec.setup);
  if (!out.empty()) spec.output_path = out;
  const auto rows = twistspdc::run_sweep(spec, threads);
  twistspdc::write_csv_file(spec.output_path, rows);
  std::cout << "wrote " << rows.size() << " rows to " << spec.output_path << '\n';
  return kOk;
}

int cmd_verify(int trials, std::uint64_t seed, std::optional<double> tolerance) {
  twistspdc::VerifyOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  opts.tolerance_override = tolerance;
  const auto result = twistspdc::run_verify(opts);
  twistspdc::print_verify_table(std::cout, result);
  return result.passed() ? kOk : kVerifyFailed;
}

int cmd_decompose(const PointFlags& pf, const SetupFlags& sf, std::size_t samples, std::uint64_t seed,
                  const std::string& mode, double waist) {
  if (samples < 100) throw twistspdc::InvalidParams("--samples must be >= 100");
  twistspdc::DecomposeOptions opts;
  sf.apply(opts.setup);
  opts.point = pf.point();
  opts.samples = samples;
  opts.seed = seed;
  opts.mode = twistspdc::parse_mode(mode);
  opts.waist_m = waist;
  const auto result = twistspdc::run_decompose(opts);
  std::cout << twistspdc::decompose_json(result).dump(2) << '\n';
  if (!result.feasible) {
    std::cerr << "twistspdc: decomposition infeasible: " << result.message << '\n';
    return kInfeasible;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial entanglement of SPDC photon pairs pumped by twisted Gaussian Schell-model beams"};
  app.require_subcommand(1);

  PointFlags report_point;
  SetupFlags report_setup;
  auto* report = app.add_subcommand("report", "Entanglement report for one (beta, twist) point as JSON");
  report_point.add_to(report);
  report_setup.add_to(report);

  std::string config;
  std::string out;
  unsigned threads = 0;
  SetupFlags sweep_setup;
  auto* sweep = app.add_subcommand("sweep", "Sweep the (beta, twist) grid and write CSV");
  sweep->add_option("--config", config, "JSON sweep configuration");
  sweep->add_option("--out", out, "Output CSV path (overrides output_path)");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  sweep_setup.add_to(sweep);

  int trials = 1000;
  std::uint64_t verify_seed = 20201;
  std::optional<double> tolerance;
  auto* verify = app.add_subcommand("verify", "Run the randomized invariant suite");
  verify->add_option("--trials", trials, "Random parameter points")->capture_default_str();
  verify->add_option("--seed", verify_seed, "Generator seed")->capture_default_str();
  verify->add_option("--tolerance", tolerance, "Override every check tolerance");

  PointFlags decompose_point;
  SetupFlags decompose_setup;
  std::size_t samples = 100000;
  std::uint64_t decompose_seed = 0;
  std::string mode = "williamson";
  double waist = 0.0;
  auto* decompose = app.add_subcommand("decompose", "Incoherent-mixture decomposition of the pump with Monte Carlo check");
  decompose_point.add_to(decompose);
  decompose_setup.add_to(decompose);
  decompose->add_option("--samples", samples, "Monte Carlo samples (>= 100)")->capture_default_str();
  decompose->add_option("--seed", decompose_seed, "Generator seed")->capture_default_str();
  decompose->add_option("--mode", mode, "williamson | symmetric-waist")->capture_default_str();
  decompose->add_option("--waist-m", waist, "Component waist for symmetric-waist mode (m) [sigma]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidParams;
  }

  try {
    if (*report) return cmd_report(report_point, report_setup);
    if (*sweep) return cmd_sweep(config, out, sweep_setup, threads);
    if (*verify) return cmd_verify(trials, verify_seed, tolerance);
    if (*decompose) return cmd_decompose(decompose_point, decompose_setup, samples, decompose_seed, mode, waist);
  } catch (const twistspdc::ConfigError& e) {
    std::cerr << "twistspdc: " << e.what() << '\n';
    return kConfigError;
  } catch (const twistspdc::InvalidParams& e) {
    std::cerr << "twistspdc: " << e.what() << '\n';
    return kInvalidParams;
  } catch (const std::exception& e) {
    std::cerr << "twistspdc: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kInvalidParams;
}
