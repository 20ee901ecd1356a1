#include "twistspdc/sweep.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace twistspdc {

double Setup::k() const { return wavenumber_from_wavelength(wavelength_m); }

PhaseMatching Setup::phase_matching() const { return PhaseMatching{crystal_length_m, k()}; }

TgsmParams Setup::pump(const NormalizedPoint& pt) const {
  return params_from_normalized(pt, sigma_m, k(), curvature_inv_m);
}

void Setup::validate() const {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw InvalidParams(fmt::format("wavelength must be positive, got {}", wavelength_m));
  }
  if (!(sigma_m > 0.0) || !std::isfinite(sigma_m)) {
    throw InvalidParams(fmt::format("sigma must be positive, got {}", sigma_m));
  }
  if (!(crystal_length_m > 0.0) || !std::isfinite(crystal_length_m)) {
    throw InvalidParams(fmt::format("crystal length must be positive, got {}", crystal_length_m));
  }
  if (!std::isfinite(curvature_inv_m)) throw InvalidParams("inverse curvature must be finite");
}

std::vector<double> GridAxis::points() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    // Pin the last point to max exactly.
    out.push_back(i == count - 1 ? max : min + (max - min) * i / (count - 1));
  }
  return out;
}

void SweepSpec::validate() const {
  setup.validate();
  auto check_axis = [](const GridAxis& a, const char* name) {
    if (a.count < 1) throw InvalidParams(fmt::format("{}: count must be >= 1, got {}", name, a.count));
    if (!(a.min <= a.max)) throw InvalidParams(fmt::format("{}: min must not exceed max", name));
  };
  check_axis(beta_grid, "beta_grid");
  check_axis(twist_grid, "twist_grid");
  if (!(beta_grid.min > 0.0 && beta_grid.max <= 1.0)) {
    throw InvalidParams(fmt::format("beta_grid must lie in (0, 1], got [{}, {}]", beta_grid.min, beta_grid.max));
  }
  if (!(twist_grid.min >= 0.0 && twist_grid.max <= 1.0)) {
    throw InvalidParams(fmt::format("twist_grid must lie in [0, 1], got [{}, {}]", twist_grid.min, twist_grid.max));
  }
}

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("config field '{}': {}", key, e.what()));
  }
}

GridAxis axis_from_json(const nlohmann::json& j, const char* name, GridAxis axis) {
  if (!j.is_object()) throw ConfigError(fmt::format("config field '{}' must be an object", name));
  for (const auto& [key, _] : j.items()) {
    if (key != "min" && key != "max" && key != "count") {
      throw ConfigError(fmt::format("config field '{}' has unknown key '{}'", name, key));
    }
  }
  if (j.contains("min")) axis.min = get_field<double>(j, "min");
  if (j.contains("max")) axis.max = get_field<double>(j, "max");
  if (j.contains("count")) axis.count = get_field<int>(j, "count");
  return axis;
}

}  // namespace

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  static const std::set<std::string> known = {"wavelength_m", "sigma_m",    "crystal_length_m", "curvature_inv_m",
                                              "beta_grid",    "twist_grid", "output_path",      "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(fmt::format("unknown config field '{}'", key));
  }
  SweepSpec spec;
  if (j.contains("wavelength_m")) spec.setup.wavelength_m = get_field<double>(j, "wavelength_m");
  if (j.contains("sigma_m")) spec.setup.sigma_m = get_field<double>(j, "sigma_m");
  if (j.contains("crystal_length_m")) spec.setup.crystal_length_m = get_field<double>(j, "crystal_length_m");
  if (j.contains("curvature_inv_m")) spec.setup.curvature_inv_m = get_field<double>(j, "curvature_inv_m");
  if (j.contains("beta_grid")) spec.beta_grid = axis_from_json(j.at("beta_grid"), "beta_grid", spec.beta_grid);
  if (j.contains("twist_grid")) spec.twist_grid = axis_from_json(j.at("twist_grid"), "twist_grid", spec.twist_grid);
  if (j.contains("output_path")) spec.output_path = get_field<std::string>(j, "output_path");
  if (j.contains("seed")) spec.seed = get_field<std::uint64_t>(j, "seed");
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config file '{}': {}", path, e.what()));
  }
  return sweep_spec_from_json(j);
}

EntanglementReport evaluate_point(const Setup& setup, const NormalizedPoint& pt) {
  setup.validate();
  EntanglementReport r = entanglement_report(setup.pump(pt), setup.phase_matching());
  // Report the requested grid coordinates rather than values recomputed from params.
  r.point = pt;
  return r;
}

SweepRow make_row(const EntanglementReport& r) {
  SweepRow row;
  row.beta = r.point.beta;
  row.t_norm = r.point.t;
  row.u_inv_m = r.pump.u;
  row.delta_m = r.pump.delta();
  row.tau2_inv_m2 = r.tau_sq;
  row.lambda_minus = r.lambda_minus;
  row.lambda_plus = r.lambda_plus;
  row.log_negativity = r.log_negativity;
  row.mancini_min = r.mancini.min();
  row.purity = r.purity_two_photon;
  row.npt_entangled = r.npt_entangled;
  row.mancini_violated = r.mancini_violated;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::vector<double> betas = spec.beta_grid.points();
  const std::vector<double> twists = spec.twist_grid.points();
  const std::size_t total = betas.size() * twists.size();
  std::vector<SweepRow> rows(total);

  std::vector<std::exception_ptr> failures;
  std::mutex failures_mutex;
  auto work = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        const NormalizedPoint pt{betas[i / twists.size()], twists[i % twists.size()], 1};
        rows[i] = make_row(evaluate_point(spec.setup, pt));
      }
    } catch (...) {
      std::lock_guard lock(failures_mutex);
      failures.push_back(std::current_exception());
    }
  };

  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(total / 64, 1)));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + n - 1) / n;
    for (unsigned t = 0; t < n; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  if (!failures.empty()) std::rethrow_exception(failures.front());
  return rows;
}

std::string format_number(double value) { return fmt::format("{:.8e}", value); }

std::string csv_header() {
  return "beta,t_norm,u_inv_m,delta_m,tau2_inv_m2,lambda_minus,lambda_plus,log_negativity,mancini_min,purity,"
         "npt_entangled,mancini_violated";
}

std::string format_csv_row(const SweepRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", format_number(r.beta), format_number(r.t_norm),
                     format_number(r.u_inv_m), format_number(r.delta_m), format_number(r.tau2_inv_m2),
                     format_number(r.lambda_minus), format_number(r.lambda_plus), format_number(r.log_negativity),
                     format_number(r.mancini_min), format_number(r.purity), r.npt_entangled ? 1 : 0,
                     r.mancini_violated ? 1 : 0);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << csv_header() << '\n';
  for (const SweepRow& r : rows) out << format_csv_row(r) << '\n';
}

void write_csv_file(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path));
  write_csv(out, rows);
  if (!out) throw Error(fmt::format("failed writing '{}'", path));
}

namespace {

nlohmann::ordered_json rounded(double value) {
  if (!std::isfinite(value)) return nullptr;
  return std::stod(format_number(value));
}

}  // namespace

nlohmann::ordered_json report_json(const EntanglementReport& r) {
  const SweepRow row = make_row(r);
  nlohmann::ordered_json j;
  j["beta"] = rounded(row.beta);
  j["t_norm"] = rounded(row.t_norm);
  j["u_inv_m"] = rounded(row.u_inv_m);
  j["delta_m"] = rounded(row.delta_m);
  j["tau2_inv_m2"] = rounded(row.tau2_inv_m2);
  j["lambda_minus"] = rounded(row.lambda_minus);
  j["lambda_plus"] = rounded(row.lambda_plus);
  j["log_negativity"] = rounded(row.log_negativity);
  j["mancini_min"] = rounded(row.mancini_min);
  j["purity"] = rounded(row.purity);
  j["npt_entangled"] = row.npt_entangled;
  j["mancini_violated"] = row.mancini_violated;
  j["pump_oam"] = rounded(r.pump_oam);
  j["photon_oam"] = rounded(r.photon.photon_oam);
  j["a_plus"] = rounded(r.a_plus);
  j["a_minus"] = rounded(r.a_minus);
  return j;
}

}  // namespace twistspdc
