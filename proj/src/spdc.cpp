#include "twistspdc/spdc.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace twistspdc {

void PhaseMatching::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidParams(fmt::format("crystal length must be positive, got {}", length));
  }
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidParams(fmt::format("k must be positive, got {}", k));
}

CovMatrix phase_matching_cm(const PhaseMatching& pm) {
  pm.validate();
  const double s = pm.sigma_minus_sq();
  const double d = pm.delta_minus_sq();
  return CovMatrix(Vector((Vector(4) << s, d, s, d).finished()).asDiagonal());
}

Matrix coordinate_transform() {
  // x1 = x+ + x-, q1 = (q+ + q-)/2, x2 = x+ - x-, q2 = (q+ - q-)/2, per axis.
  Matrix r = Matrix::Zero(8, 8);
  for (int c = 0; c < 4; ++c) {
    const double f = c % 2 == 0 ? 1.0 : 0.5;
    r(c, c) = f;
    r(c, 4 + c) = f;
    r(4 + c, c) = f;
    r(4 + c, 4 + c) = -f;
  }
  return r;
}

TwoPhotonState two_photon_state(const TgsmParams& pump, const PhaseMatching& pm) {
  const CovMatrix plus = pump_cm(pump);
  const CovMatrix minus = phase_matching_cm(pm);
  Matrix g = Matrix::Zero(8, 8);
  g.topLeftCorner(4, 4) = plus.matrix();
  g.bottomRightCorner(4, 4) = minus.matrix();
  const Matrix r = coordinate_transform();
  Matrix v = r * g * r.transpose();
  v = 0.5 * (v + v.transpose()).eval();
  return TwoPhotonState{CovMatrix(std::move(g)), CovMatrix(std::move(v)), pump, pm};
}

ClosedFormEigs closed_form_eigs(const TgsmParams& pump, const PhaseMatching& pm) {
  pump.validate();
  pm.validate();
  const double s2 = pump.sigma * pump.sigma;
  const double tau2 = pump.tau_sq();
  const double sm2 = pm.sigma_minus_sq();
  const double dm2 = pm.delta_minus_sq();
  const double k = pump.k;

  ClosedFormEigs out;
  out.a_plus = tau2 * sm2 + dm2 * s2;
  out.a_minus = tau2 * sm2 - dm2 * s2;
  const double coupling = pump.u * pump.u + pump.inv_R * pump.inv_R;
  const double disc = 4.0 * k * k * dm2 * sm2 * s2 * s2 * coupling + out.a_minus * out.a_minus;
  const double root = std::sqrt(disc);
  out.lambda_plus = std::sqrt((out.a_plus + root) / 2.0);
  // a+^2 - disc = 4 sm2 dm2 s2 (tau^2 - k^2 s2 (u^2 + 1/R^2)) = 4 sm2 dm2 s2 (1/delta^2 + 1/(4 s2))
  const double coherent_part = pump.inv_delta_sq + 1.0 / (4.0 * s2);
  out.lambda_minus = std::sqrt(2.0 * dm2 * sm2 * s2 * coherent_part / (out.a_plus + root));
  return out;
}

double ManciniProducts::min() const {
  return std::min({plus_minus, minus_plus, y_plus_minus, y_minus_plus});
}

ManciniProducts mancini_products(const TwoPhotonState& state) {
  const CovMatrix& g = state.global_cm;
  // Global ordering: 0 x+, 1 q+x, 2 y+, 3 q+y, 4 x-, 5 q-x, 6 y-, 7 q-y.
  ManciniProducts out;
  out.plus_minus = std::sqrt(g(0, 0)) * std::sqrt(g(5, 5));
  out.minus_plus = std::sqrt(g(4, 4)) * std::sqrt(g(1, 1));
  out.y_plus_minus = std::sqrt(g(2, 2)) * std::sqrt(g(7, 7));
  out.y_minus_plus = std::sqrt(g(6, 6)) * std::sqrt(g(3, 3));
  return out;
}

double two_photon_purity(const TgsmParams& pump, const PhaseMatching& pm) {
  pump.validate();
  return pump.beta_sq() * purity(phase_matching_cm(pm));
}

SymplecticSpectrum pt_spectrum_oracle(const TwoPhotonState& state, Party party) {
  return symplectic_spectrum(partial_transpose(state.photon_cm, party));
}

PhotonMoments photon_moments(const TwoPhotonState& state) {
  const CovMatrix& v = state.photon_cm;
  // Photon ordering: 0 x1, 1 q1x, 2 y1, 3 q1y, 4 x2, 5 q2x, 6 y2, 7 q2y.
  PhotonMoments out;
  out.photon_oam = v(0, 3) - v(2, 1);
  out.cross_twist_sum = v(0, 7) + v(4, 3);
  out.cross_twist_diff = v(0, 7) - v(4, 3);
  return out;
}

EntanglementReport entanglement_report(const TgsmParams& pump, const PhaseMatching& pm) {
  const TwoPhotonState state = two_photon_state(pump, pm);
  const ClosedFormEigs eigs = closed_form_eigs(pump, pm);

  EntanglementReport r;
  r.point = normalized_from_params(pump);
  r.pump = pump;
  r.tau_sq = pump.tau_sq();
  r.lambda_minus = eigs.lambda_minus;
  r.lambda_plus = eigs.lambda_plus;
  r.a_plus = eigs.a_plus;
  r.a_minus = eigs.a_minus;
  r.npt_entangled = eigs.lambda_minus < 0.5 - kNptTol;
  r.log_negativity = log_negativity_of(pt_spectrum_oracle(state));
  r.mancini = mancini_products(state);
  r.mancini_violated = r.mancini.violated();
  r.purity_two_photon = two_photon_purity(pump, pm);
  r.pump_oam = pump_oam(pump);
  r.photon = photon_moments(state);
  return r;
}

}  // namespace twistspdc
