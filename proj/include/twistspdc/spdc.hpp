#pragma once

// Two-photon Gaussian description of degenerate SPDC (k1 = k2 = k/2) pumped
// by a TGSM beam, with a double-Gaussian phase-matching surrogate.
//
// Global coordinates: r+- = (r1 +- r2)/2, q+- = q1 +- q2. The two-photon
// matrix is block-diagonal there: pump matrix for (x+, q+x, y+, q+y) and the
// phase-matching matrix for (x-, q-x, y-, q-y).

#include "twistspdc/gaussian.hpp"
#include "twistspdc/tgsm.hpp"

namespace twistspdc {

/// Threshold slack on lambda_- for declaring a negative partial transpose.
inline constexpr double kNptTol = 1e-9;

struct PhaseMatching {
  double length = 0.0;  // crystal length L, m
  double k = 0.0;       // pump wavenumber, m^-1

  /// sigma_-^2 = 9 L / (10 k), m^2
  double sigma_minus_sq() const { return 9.0 * length / (10.0 * k); }
  /// Delta_-^2 = 3 k / (2 L), m^-2
  double delta_minus_sq() const { return 3.0 * k / (2.0 * length); }

  void validate() const;
};

CovMatrix phase_matching_cm(const PhaseMatching& pm);

/// Constant 8x8 map from global to per-photon coordinates (symplectic).
Matrix coordinate_transform();

struct TwoPhotonState {
  CovMatrix global_cm;  // blockdiag(V+, V-), global ordering
  CovMatrix photon_cm;  // R G R^T, photon 1 then photon 2
  TgsmParams pump;
  PhaseMatching pm;
};

TwoPhotonState two_photon_state(const TgsmParams& pump, const PhaseMatching& pm);

struct ClosedFormEigs {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double a_plus = 0.0;   // tau^2 sigma_-^2 + Delta_-^2 sigma^2
  double a_minus = 0.0;  // tau^2 sigma_-^2 - Delta_-^2 sigma^2
};

/// Doubly degenerate symplectic eigenvalues of the partially transposed
/// two-photon matrix, in closed form. lambda_- uses the cancellation-free
/// form 2 Delta_-^2 sigma_-^2 sigma^2 (1/delta^2 + 1/(4 sigma^2)) / (a+ + sqrt(disc)).
ClosedFormEigs closed_form_eigs(const TgsmParams& pump, const PhaseMatching& pm);

/// Near-field/far-field standard-deviation products of the global coordinates.
struct ManciniProducts {
  double plus_minus = 0.0;    // Delta x+ * Delta q-x
  double minus_plus = 0.0;    // Delta x- * Delta q+x
  double y_plus_minus = 0.0;  // Delta y+ * Delta q-y
  double y_minus_plus = 0.0;  // Delta y- * Delta q+y

  double min() const;
  bool violated() const { return min() < 0.5; }
};

ManciniProducts mancini_products(const TwoPhotonState& state);

/// beta^2 * purity(V-); matches purity(photon_cm).
double two_photon_purity(const TgsmParams& pump, const PhaseMatching& pm);

/// Numerical symplectic spectrum of the partially transposed photon matrix.
SymplecticSpectrum pt_spectrum_oracle(const TwoPhotonState& state, Party party = Party::Second);

/// Per-photon and cross-photon twist moments read from photon_cm.
struct PhotonMoments {
  double photon_oam = 0.0;        // cov(x1, q1y) - cov(y1, q1x)
  double cross_twist_sum = 0.0;   // cov(x1, q2y) + cov(x2, q1y)
  double cross_twist_diff = 0.0;  // cov(x1, q2y) - cov(x2, q1y)
};

PhotonMoments photon_moments(const TwoPhotonState& state);

struct EntanglementReport {
  NormalizedPoint point;
  TgsmParams pump;
  double tau_sq = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  bool npt_entangled = false;
  double log_negativity = 0.0;
  ManciniProducts mancini;
  bool mancini_violated = false;
  double purity_two_photon = 0.0;
  double pump_oam = 0.0;
  PhotonMoments photon;
  double a_plus = 0.0;
  double a_minus = 0.0;
};

EntanglementReport entanglement_report(const TgsmParams& pump, const PhaseMatching& pm);

}  // namespace twistspdc
