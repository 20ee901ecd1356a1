#include "twistspdc/tgsm.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace twistspdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Eigenvalues of a PSD remainder are accepted down to this value after
// unit-diagonal normalization against the pump matrix.
constexpr double kPsdTol = 1e-12;

// Symplectic eigenvalues this close to 1/2 are treated as exactly pure.
constexpr double kPureTol = 1e-12;

Eigen::Matrix4d symmetrized(const Eigen::Matrix4d& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

double wavenumber_from_wavelength(double wavelength_m) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw InvalidParams(fmt::format("wavelength must be positive, got {}", wavelength_m));
  }
  return 2.0 * std::numbers::pi / wavelength_m;
}

TgsmParams TgsmParams::from_delta(double sigma, double delta, double inv_R, double u, double k) {
  if (!(delta > 0.0)) throw InvalidParams(fmt::format("coherence length must be positive, got {}", delta));
  TgsmParams p;
  p.sigma = sigma;
  p.inv_delta_sq = std::isinf(delta) ? 0.0 : 1.0 / (delta * delta);
  p.inv_R = inv_R;
  p.u = u;
  p.k = k;
  return p;
}

double TgsmParams::delta() const { return inv_delta_sq == 0.0 ? kInf : 1.0 / std::sqrt(inv_delta_sq); }

double TgsmParams::tau_sq() const {
  const double s2 = sigma * sigma;
  return inv_delta_sq + 1.0 / (4.0 * s2) + k * k * (s2 * inv_R * inv_R + u * u * s2);
}

double TgsmParams::beta_sq() const { return 1.0 / (1.0 + 4.0 * sigma * sigma * inv_delta_sq); }

double TgsmParams::twist_bound() const { return inv_delta_sq / k; }

void TgsmParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParams(fmt::format("sigma must be positive, got {}", sigma));
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidParams(fmt::format("k must be positive, got {}", k));
  if (!(inv_delta_sq >= 0.0) || !std::isfinite(inv_delta_sq)) {
    throw InvalidParams(fmt::format("1/delta^2 must be finite and non-negative, got {}", inv_delta_sq));
  }
  if (!std::isfinite(inv_R)) throw InvalidParams("1/R must be finite");
  if (!std::isfinite(u)) throw InvalidParams("twist phase must be finite");
  if (std::abs(u) > twist_bound() * (1.0 + kTwistBoundSlack)) {
    throw TwistBoundViolation(
        fmt::format("|u| = {:.9e} exceeds the twist bound 1/(k delta^2) = {:.9e}", std::abs(u), twist_bound()));
  }
}

void NormalizedPoint::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw OutOfRange(fmt::format("beta must lie in (0, 1], got {}", beta));
  if (!(t >= 0.0 && t <= 1.0)) throw OutOfRange(fmt::format("normalized twist must lie in [0, 1], got {}", t));
  if (twist_sign != 1 && twist_sign != -1) throw OutOfRange("twist sign must be +1 or -1");
}

Matrix tgsm_matrix(const TgsmParams& p) {
  const double s2 = p.sigma * p.sigma;
  const double tau2 = p.tau_sq();
  const double curv = -p.k * s2 * p.inv_R;
  const double twist = p.k * p.u * s2;
  Matrix t(4, 4);
  // clang-format off
  t << s2,     curv,   0.0,    twist,
       curv,   tau2,   -twist, 0.0,
       0.0,    -twist, s2,     curv,
       twist,  0.0,    curv,   tau2;
  // clang-format on
  return t;
}

CovMatrix pump_cm(const TgsmParams& p) {
  p.validate();
  return CovMatrix(tgsm_matrix(p));
}

double beta_squared(double sigma, double delta) {
  if (std::isinf(delta)) return 1.0;
  return 1.0 / (1.0 + 4.0 * sigma * sigma / (delta * delta));
}

double delta_from_beta(double beta, double sigma) {
  if (!(beta > 0.0 && beta <= 1.0)) throw OutOfRange(fmt::format("beta must lie in (0, 1], got {}", beta));
  if (!(sigma > 0.0)) throw OutOfRange(fmt::format("sigma must be positive, got {}", sigma));
  if (beta == 1.0) return kInf;
  return std::sqrt(4.0 * sigma * sigma * beta * beta / (1.0 - beta * beta));
}

double max_twist(double k, double delta) {
  if (std::isinf(delta)) return 0.0;
  return 1.0 / (k * delta * delta);
}

TgsmParams params_from_normalized(const NormalizedPoint& pt, double sigma, double k, double inv_R) {
  pt.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw OutOfRange(fmt::format("sigma must be positive, got {}", sigma));
  if (!(k > 0.0) || !std::isfinite(k)) throw OutOfRange(fmt::format("k must be positive, got {}", k));
  TgsmParams p;
  p.sigma = sigma;
  p.k = k;
  p.inv_R = inv_R;
  // 1/delta^2 = (1/beta^2 - 1) / (4 sigma^2), which is exactly 0 at beta = 1.
  p.inv_delta_sq = (1.0 / (pt.beta * pt.beta) - 1.0) / (4.0 * sigma * sigma);
  p.u = pt.twist_sign * pt.t * p.twist_bound();
  return p;
}

NormalizedPoint normalized_from_params(const TgsmParams& p) {
  NormalizedPoint pt;
  pt.beta = std::sqrt(p.beta_sq());
  const double bound = p.twist_bound();
  pt.t = bound > 0.0 ? std::abs(p.u) / bound : 0.0;
  pt.twist_sign = p.u < 0.0 ? -1 : 1;
  return pt;
}

double pump_oam(const TgsmParams& p) {
  const CovMatrix v = pump_cm(p);
  return v(0, 3) - v(2, 1);
}

MixtureModel mixture_model(const TgsmParams& p, MixtureMode mode, double waist) {
  const CovMatrix target = pump_cm(p);
  const Eigen::Matrix4d t = target.matrix();

  if (mode == MixtureMode::SymmetricWaist) {
    const double s0 = waist > 0.0 ? waist : p.sigma;
    const double x = s0 * s0;
    const double q = 1.0 / (4.0 * x);
    const Eigen::Matrix4d component = Eigen::Vector4d(x, q, x, q).asDiagonal();
    const Eigen::Matrix4d remainder = t - component;
    const double min_eig = min_scaled_eigenvalue(remainder, balancing_scales(target), t);
    if (min_eig < -kPsdTol) {
      throw InfeasibleWaist(
          fmt::format("symmetric waist {:.6e} m leaves a non-PSD remainder (min scaled eigenvalue {:.3e})", s0,
                      min_eig),
          min_eig);
    }
    return MixtureModel{CovMatrix(component), remainder};
  }

  const WilliamsonFactors w = williamson(target);
  Eigen::Vector4d excess;
  for (int j = 0; j < 2; ++j) {
    double e = w.diag[j] - 0.5;
    if (e < kPureTol) e = 0.0;
    excess(2 * j) = excess(2 * j + 1) = e;
  }
  const Eigen::Matrix4d s = w.symplectic;
  const Eigen::Matrix4d component = symmetrized(0.5 * s * s.transpose());
  const Eigen::Matrix4d ensemble = symmetrized(s * excess.asDiagonal() * s.transpose());
  return MixtureModel{CovMatrix(component), ensemble};
}

std::vector<double> feasible_waists(const TgsmParams& p, int points) {
  std::vector<double> out;
  const int n = std::max(points, 2);
  for (int i = 0; i < n; ++i) {
    const double s0 = p.sigma * std::pow(10.0, -3.0 + 3.0 * i / (n - 1));
    try {
      mixture_model(p, MixtureMode::SymmetricWaist, s0);
      out.push_back(s0);
    } catch (const InfeasibleWaist&) {
    }
  }
  return out;
}

ComponentSampler::ComponentSampler(const MixtureModel& model, std::uint64_t seed) : engine_(seed) {
  // Factor in correlation form so the eigensolve does not see the SI spread.
  const Eigen::Matrix4d& e = model.ensemble_cov;
  Eigen::Vector4d scale;
  for (int i = 0; i < 4; ++i) scale(i) = e(i, i) > 0.0 ? std::sqrt(e(i, i)) : 0.0;
  Eigen::Vector4d inv = scale.unaryExpr([](double v) { return v > 0.0 ? 1.0 / v : 0.0; });
  const Eigen::Matrix4d corr = inv.asDiagonal() * e * inv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(corr);
  const Eigen::Vector4d root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = scale.asDiagonal() * solver.eigenvectors() * root.asDiagonal();
}

Eigen::Vector4d ComponentSampler::next() {
  Eigen::Vector4d z;
  for (int i = 0; i < 4; ++i) z(i) = normal_(engine_);
  return factor_ * z;
}

std::vector<Eigen::Vector4d> sample_component_means(const MixtureModel& model, std::size_t count,
                                                    std::uint64_t seed) {
  ComponentSampler sampler(model, seed);
  std::vector<Eigen::Vector4d> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace twistspdc
