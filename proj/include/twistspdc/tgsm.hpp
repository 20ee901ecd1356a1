#pragma once

// Twisted Gaussian Schell-model (TGSM) pump beams.
//
// Infinite coherence length and infinite radius of curvature are carried as
// zero reciprocals (inv_delta_sq = 0, inv_R = 0) so no formula ever touches
// an infinity.

#include "twistspdc/gaussian.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace twistspdc {

/// Relative slack allowed on the twist bound |u| <= 1/(k delta^2).
inline constexpr double kTwistBoundSlack = 1e-12;

double wavenumber_from_wavelength(double wavelength_m);

struct TgsmParams {
  double sigma = 0.0;         // beam waist, m
  double inv_delta_sq = 0.0;  // 1/delta^2, m^-2 (0: fully coherent)
  double inv_R = 0.0;         // 1/R, m^-1 (0: flat wavefront)
  double u = 0.0;             // twist phase, m^-1, signed
  double k = 0.0;             // pump wavenumber, m^-1

  /// Builds params from a coherence length (may be +infinity).
  static TgsmParams from_delta(double sigma, double delta, double inv_R, double u, double k);

  /// delta in m, +infinity when inv_delta_sq == 0.
  double delta() const;
  /// 1/delta^2 + 1/(4 sigma^2) + k^2 (sigma^2/R^2 + u^2 sigma^2).
  double tau_sq() const;
  double beta_sq() const;
  /// 1/(k delta^2).
  double twist_bound() const;

  /// Throws InvalidParams or TwistBoundViolation.
  void validate() const;
};

/// Normalized coherence beta in (0, 1], normalized twist t = |u| k delta^2 in [0, 1].
struct NormalizedPoint {
  double beta = 1.0;
  double t = 0.0;
  int twist_sign = 1;

  /// Throws OutOfRange.
  void validate() const;
};

/// Second-moment level incoherent decomposition: a pure Gaussian component
/// whose mean (x0, q_x0, y0, q_y0) is Gaussian-distributed with ensemble_cov.
struct MixtureModel {
  CovMatrix component_cm;
  Eigen::Matrix4d ensemble_cov;
};

enum class MixtureMode { SymmetricWaist, Williamson };

/// Raw evaluation of the TGSM covariance matrix without the twist-bound
/// check. Only for probing states on either side of the bound.
Matrix tgsm_matrix(const TgsmParams& p);

/// Validated TGSM covariance matrix in (x, q_x, y, q_y) order.
CovMatrix pump_cm(const TgsmParams& p);

/// (1 + 4 sigma^2 / delta^2)^-1; delta may be +infinity.
double beta_squared(double sigma, double delta);

/// Inverse of beta_squared; +infinity for beta == 1. Throws OutOfRange.
double delta_from_beta(double beta, double sigma);

/// 1/(k delta^2); 0 for delta = +infinity.
double max_twist(double k, double delta);

/// Throws OutOfRange for an invalid point or non-positive sigma/k.
TgsmParams params_from_normalized(const NormalizedPoint& pt, double sigma, double k, double inv_R);

/// Inverse of params_from_normalized for the (beta, t) coordinates.
NormalizedPoint normalized_from_params(const TgsmParams& p);

/// <L_z> in units of hbar: cov(x, q_y) - cov(y, q_x) of the pump matrix.
double pump_oam(const TgsmParams& p);

/// Decomposes the pump matrix into a pure component plus ensemble covariance.
/// SymmetricWaist uses a round coherent beam of waist `waist` (defaults to
/// sigma when <= 0) and throws InfeasibleWaist if the remainder is not PSD.
MixtureModel mixture_model(const TgsmParams& p, MixtureMode mode, double waist = 0.0);

/// Waists sigma0 on a log grid over [1e-3 sigma, sigma] for which the
/// symmetric-waist decomposition is feasible.
std::vector<double> feasible_waists(const TgsmParams& p, int points = 200);

/// Seeded zero-mean Gaussian sampler of component means. Owns its generator;
/// one instance per task.
class ComponentSampler {
 public:
  ComponentSampler(const MixtureModel& model, std::uint64_t seed);
  Eigen::Vector4d next();

 private:
  Eigen::Matrix4d factor_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

std::vector<Eigen::Vector4d> sample_component_means(const MixtureModel& model, std::size_t count,
                                                    std::uint64_t seed);

}  // namespace twistspdc
