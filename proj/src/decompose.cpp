#include "twistspdc/decompose.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace twistspdc {

Eigen::Matrix4d sample_covariance(const std::vector<Eigen::Vector4d>& samples) {
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (const auto& s : samples) acc.noalias() += s * s.transpose();
  return samples.empty() ? acc : Eigen::Matrix4d(acc / static_cast<double>(samples.size()));
}

Eigen::Matrix4d covariance_z_scores(const Eigen::Matrix4d& empirical, const Eigen::Matrix4d& expected,
                                    std::size_t samples) {
  Eigen::Matrix4d z;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // Variance of x_i x_j for a zero-mean Gaussian is E_ii E_jj + E_ij^2.
      const double var = (expected(i, i) * expected(j, j) + expected(i, j) * expected(i, j)) / samples;
      const double diff = empirical(i, j) - expected(i, j);
      if (var > 0.0) {
        z(i, j) = diff / std::sqrt(var);
      } else {
        z(i, j) = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      }
    }
  }
  return z;
}

std::string mode_name(MixtureMode mode) {
  return mode == MixtureMode::Williamson ? "williamson" : "symmetric-waist";
}

MixtureMode parse_mode(const std::string& name) {
  if (name == "williamson") return MixtureMode::Williamson;
  if (name == "symmetric-waist") return MixtureMode::SymmetricWaist;
  throw InvalidParams(fmt::format("unknown decomposition mode '{}' (expected williamson or symmetric-waist)", name));
}

DecomposeResult run_decompose(const DecomposeOptions& o) {
  o.setup.validate();
  if (o.samples < 1) throw InvalidParams("samples must be >= 1");
  const TgsmParams pump = o.setup.pump(o.point);
  const CovMatrix target = pump_cm(pump);

  DecomposeResult r;
  r.mode = o.mode;
  r.target = target.matrix();
  if (o.mode == MixtureMode::SymmetricWaist) {
    r.waist_m = o.waist_m > 0.0 ? o.waist_m : pump.sigma;
    r.feasible_waists = feasible_waists(pump);
  }

  try {
    r.model = mixture_model(pump, o.mode, r.waist_m);
  } catch (const InfeasibleWaist& e) {
    r.feasible = false;
    r.message = e.what();
    return r;
  }
  r.feasible = true;

  const MixtureModel& m = *r.model;
  const Eigen::Matrix4d delta = m.component_cm.matrix() + m.ensemble_cov - r.target;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      r.reconstruction_residual =
          std::max(r.reconstruction_residual, std::abs(delta(i, j)) / std::sqrt(r.target(i, i) * r.target(j, j)));
    }
  }
  r.component_purity = purity(m.component_cm);

  // Single Monte Carlo stream: seed + 0.
  const auto samples = sample_component_means(m, o.samples, o.seed);
  r.empirical = sample_covariance(samples);
  r.z_scores = covariance_z_scores(r.empirical, m.ensemble_cov, o.samples);
  r.max_abs_z = r.z_scores.cwiseAbs().maxCoeff();
  return r;
}

namespace {

nlohmann::ordered_json matrix_json(const Eigen::Matrix4d& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < 4; ++j) {
      if (std::isfinite(m(i, j))) {
        row.push_back(m(i, j));
      } else {
        row.push_back(nullptr);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::ordered_json decompose_json(const DecomposeResult& r) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(r.mode);
  j["feasible"] = r.feasible;
  if (r.mode == MixtureMode::SymmetricWaist) {
    j["waist_m"] = r.waist_m;
    j["feasible_waist_count"] = r.feasible_waists.size();
    if (!r.feasible_waists.empty()) {
      j["feasible_waist_min_m"] = r.feasible_waists.front();
      j["feasible_waist_max_m"] = r.feasible_waists.back();
    }
  }
  j["target_cm"] = matrix_json(r.target);
  if (!r.feasible) {
    j["message"] = r.message;
    return j;
  }
  j["reconstruction_residual"] = r.reconstruction_residual;
  j["component_purity"] = r.component_purity;
  j["component_cm"] = matrix_json(r.model->component_cm.matrix());
  j["ensemble_cov"] = matrix_json(r.model->ensemble_cov);
  j["empirical_cov"] = matrix_json(r.empirical);
  j["z_scores"] = matrix_json(r.z_scores);
  j["max_abs_z"] = std::isfinite(r.max_abs_z) ? nlohmann::ordered_json(r.max_abs_z) : nlohmann::ordered_json(nullptr);
  j["z_within_5"] = r.max_abs_z <= 5.0;
  return j;
}

}  // namespace twistspdc
