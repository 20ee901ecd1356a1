#pragma once

// Monte Carlo realization of the incoherent-mixture representation of a pump.

#include "twistspdc/sweep.hpp"
#include "twistspdc/tgsm.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twistspdc {

struct DecomposeOptions {
  Setup setup;
  NormalizedPoint point;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  MixtureMode mode = MixtureMode::Williamson;
  double waist_m = 0.0;  // symmetric-waist component waist; <= 0 selects sigma
};

struct DecomposeResult {
  MixtureMode mode = MixtureMode::Williamson;
  double waist_m = 0.0;
  bool feasible = false;
  std::string message;
  std::optional<MixtureModel> model;
  Eigen::Matrix4d target = Eigen::Matrix4d::Zero();     // pump covariance
  Eigen::Matrix4d empirical = Eigen::Matrix4d::Zero();  // sample covariance of component means
  Eigen::Matrix4d z_scores = Eigen::Matrix4d::Zero();
  double max_abs_z = 0.0;
  double reconstruction_residual = 0.0;  // max |delta_ij| / sqrt(V_ii V_jj)
  double component_purity = 0.0;
  std::vector<double> feasible_waists;  // symmetric-waist mode only
};

/// Never throws for an infeasible symmetric waist; reports feasible = false.
/// Throws InvalidParams/OutOfRange for a bad point or setup.
DecomposeResult run_decompose(const DecomposeOptions& options);

/// Zero-mean sample covariance (1/N sum x x^T).
Eigen::Matrix4d sample_covariance(const std::vector<Eigen::Vector4d>& samples);

/// (S_ij - E_ij) / sqrt((E_ii E_jj + E_ij^2) / N); entries with zero standard
/// error score 0 when they match exactly and +inf otherwise.
Eigen::Matrix4d covariance_z_scores(const Eigen::Matrix4d& empirical, const Eigen::Matrix4d& expected,
                                    std::size_t samples);

std::string mode_name(MixtureMode mode);
/// Accepts "williamson" and "symmetric-waist"; throws InvalidParams otherwise.
MixtureMode parse_mode(const std::string& name);

nlohmann::ordered_json decompose_json(const DecomposeResult& result);

}  // namespace twistspdc
