#include "twistspdc/verify.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

namespace twistspdc {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
  return std::exp(dist(rng));
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Check {
 public:
  Check(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double error, const VerifyPoint& p) {
    ++result_.evaluated;
    result_.worst = std::max(result_.worst, error);
    if (!(error <= result_.tolerance)) fail(p, fmt::format("error {:.3e}", error));
  }

  void require(bool ok, const VerifyPoint& p, const std::string& what) {
    ++result_.evaluated;
    if (!ok) fail(p, what);
  }

  CheckResult take() { return std::move(result_); }

 private:
  void fail(const VerifyPoint& p, const std::string& what) {
    if (result_.failures++ == 0) result_.first_failure = fmt::format("{} at {}", what, describe(p));
  }

  CheckResult result_;
};

}  // namespace

std::string describe(const VerifyPoint& p) {
  return fmt::format("(sigma_m={:.6e}, beta={:.9f}, t={:.9f}, sign={:+d}, length_m={:.6e}, inv_curvature_m={:.6e})",
                     p.setup.sigma_m, p.point.beta, p.point.t, p.point.twist_sign, p.setup.crystal_length_m,
                     p.setup.curvature_inv_m);
}

std::vector<VerifyPoint> verify_points(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<VerifyPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(trials, 0)));
  for (int i = 0; i < trials; ++i) {
    VerifyPoint p;
    p.setup.sigma_m = log_uniform(rng, 10e-6, 1e-3);
    p.point.beta = std::min(1.0, log_uniform(rng, 0.01, 1.0));
    p.point.t = unit(rng);
    p.point.twist_sign = unit(rng) < 0.5 ? -1 : 1;
    p.setup.crystal_length_m = log_uniform(rng, 1e-3, 3e-2);
    p.setup.curvature_inv_m = 1e-2 * unit(rng) / p.setup.sigma_m;
    out.push_back(p);
  }
  return out;
}

bool VerifyResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

VerifyResult run_verify(const VerifyOptions& options) {
  if (options.trials < 1) throw InvalidParams(fmt::format("trials must be >= 1, got {}", options.trials));
  const auto start = std::chrono::steady_clock::now();
  auto tol = [&](double nominal) { return options.tolerance_override.value_or(nominal); };

  Check closed_vs_oracle("closed form vs PT-spectrum oracle (rel)", tol(1e-6));
  Check degeneracy("PT spectrum two-fold degeneracy (rel)", tol(1e-9));
  Check pump_purity("purity(pump) = beta^2 (rel)", tol(1e-9));
  Check photon_purity("purity(photon) = beta^2 * 5/27 (rel)", tol(1e-9));
  Check oam("photon OAM = pump OAM / 2", tol(1e-9));
  Check scaling("local-scaling invariance of PT spectrum (rel)", tol(1e-9));
  Check boundary("twist bound: nu_min(pump) = 1/2 (abs)", tol(1e-9));
  Check physical("twist bound: physical inside, unphysical beyond", tol(1e-9));
  Check hierarchy("Mancini violation => NPT", 0.0);

  constexpr double kInsideBound = 1.0 - 1e-9;
  constexpr double kBeyondBound = 1.0 + 1e-6;

  for (const VerifyPoint& p : verify_points(options.trials, options.seed)) {
    const TgsmParams pump = p.setup.pump(p.point);
    const PhaseMatching pm = p.setup.phase_matching();
    const TwoPhotonState state = two_photon_state(pump, pm);
    const ClosedFormEigs eigs = closed_form_eigs(pump, pm);
    const CovMatrix pt = partial_transpose(state.photon_cm);
    const SymplecticSpectrum spec = symplectic_spectrum(pt);
    const auto& v = spec.values;

    closed_vs_oracle.record(std::max(rel_diff(v[0], eigs.lambda_minus), rel_diff(v[2], eigs.lambda_plus)), p);
    degeneracy.record(std::max(rel_diff(v[1], v[0]), rel_diff(v[3], v[2])), p);

    pump_purity.record(rel_diff(purity(pump_cm(pump)), pump.beta_sq()), p);
    photon_purity.record(rel_diff(purity(state.photon_cm), pump.beta_sq() * 5.0 / 27.0), p);

    const double half = pump_oam(pump) / 2.0;
    oam.record(std::abs(photon_moments(state).photon_oam - half) / std::max(std::abs(half), 1.0), p);

    const SymplecticSpectrum scaled = symplectic_spectrum(local_scale(pt));
    double scale_err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) scale_err = std::max(scale_err, rel_diff(scaled.values[i], v[i]));
    scaling.record(scale_err, p);

    // Pump states on and around the twist bound for this point's beam.
    TgsmParams edge = pump;
    edge.u = p.point.twist_sign * pump.twist_bound();
    boundary.record(std::abs(symplectic_spectrum(pump_cm(edge)).values.front() - 0.5), p);

    TgsmParams inside = edge;
    inside.u *= kInsideBound;
    physical.require(is_physical(CovMatrix(tgsm_matrix(inside)), tol(kPhysicalityTol)), p,
                     "state inside the twist bound reported unphysical");
    // Beyond the bound nu_min drops by about 1e-6 * a / (2a + 1), a = sigma^2/delta^2.
    // Only points where that drop clears the tolerance tenfold are decisive.
    const double a = pump.sigma * pump.sigma * pump.inv_delta_sq;
    if ((kBeyondBound - 1.0) * a / (2.0 * a + 1.0) > 10.0 * kPhysicalityTol) {
      TgsmParams beyond = edge;
      beyond.u *= kBeyondBound;
      physical.require(!is_physical(CovMatrix(tgsm_matrix(beyond)), tol(kPhysicalityTol)), p,
                       "state beyond the twist bound reported physical");
    }

    const ManciniProducts mancini = mancini_products(state);
    hierarchy.require(!mancini.violated() || eigs.lambda_minus < 0.5 - kNptTol, p,
                      fmt::format("Mancini product {:.6e} < 1/2 but lambda_- = {:.6e}", mancini.min(),
                                  eigs.lambda_minus));
  }

  VerifyResult result;
  for (Check* c : {&closed_vs_oracle, &degeneracy, &pump_purity, &photon_purity, &oam, &scaling, &boundary,
                   &physical, &hierarchy}) {
    result.checks.push_back(c->take());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void print_verify_table(std::ostream& out, const VerifyResult& result) {
  out << fmt::format("{:<6} {:<50} {:>10} {:>10} {:>9} {:>8}\n", "status", "check", "worst", "tolerance", "points",
                     "failed");
  for (const CheckResult& c : result.checks) {
    out << fmt::format("{:<6} {:<50} {:>10.3e} {:>10.3e} {:>9} {:>8}\n", c.passed() ? "PASS" : "FAIL", c.name,
                       c.worst, c.tolerance, c.evaluated, c.failures);
    if (!c.passed() && !c.first_failure.empty()) out << "       first failure: " << c.first_failure << '\n';
  }
  out << fmt::format("{} in {:.3f} s\n", result.passed() ? "ALL PASS" : "FAILED", result.seconds);
}

}  // namespace twistspdc
