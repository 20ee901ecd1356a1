#pragma once

// Parameter sweeps over (beta, normalized twist) and their serialized forms.

#include "twistspdc/spdc.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twistspdc {

/// Physical SPDC setup. Defaults: lambda_p = 400 nm, sigma_p = 50 um, L = 1 cm, R = infinity.
struct Setup {
  double wavelength_m = 400e-9;
  double sigma_m = 50e-6;
  double crystal_length_m = 0.01;
  double curvature_inv_m = 0.0;

  double k() const;
  PhaseMatching phase_matching() const;
  TgsmParams pump(const NormalizedPoint& pt) const;
  void validate() const;
};

/// Evenly spaced axis; count == 1 yields {min}.
struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int count = 1;

  std::vector<double> points() const;
};

struct SweepSpec {
  Setup setup;
  GridAxis beta_grid{0.005, 1.0, 200};
  GridAxis twist_grid{0.0, 1.0, 200};
  std::string output_path = "sweep.csv";
  std::uint64_t seed = 0;

  /// Throws InvalidParams.
  void validate() const;
};

/// Missing keys keep their defaults. Throws ConfigError on wrong types or unknown keys.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
/// Throws ConfigError when the file is unreadable or not valid JSON.
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRow {
  double beta = 0.0;
  double t_norm = 0.0;
  double u_inv_m = 0.0;
  double delta_m = 0.0;  // +infinity for a coherent pump
  double tau2_inv_m2 = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double log_negativity = 0.0;
  double mancini_min = 0.0;
  double purity = 0.0;
  bool npt_entangled = false;
  bool mancini_violated = false;
};

EntanglementReport evaluate_point(const Setup& setup, const NormalizedPoint& pt);
SweepRow make_row(const EntanglementReport& report);

/// Rows in beta-outer, t-inner order. `threads == 0` picks the hardware count;
/// output does not depend on it.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

std::string csv_header();
std::string format_csv_row(const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Throws Error if the file cannot be written.
void write_csv_file(const std::string& path, const std::vector<SweepRow>& rows);

/// Number formatting shared by CSV and JSON: 9 significant digits, scientific.
std::string format_number(double value);

/// Flat JSON object: the sweep-row fields in order, then pump_oam, photon_oam,
/// a_plus, a_minus. Numbers are rounded to the CSV precision; an infinite
/// delta_m is written as null.
nlohmann::ordered_json report_json(const EntanglementReport& report);

}  // namespace twistspdc
