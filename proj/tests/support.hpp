#pragma once

// Test-only helpers: random generators, independent oracles, frozen values.

#include "twistspdc/gaussian.hpp"
#include "twistspdc/spdc.hpp"
#include "twistspdc/sweep.hpp"
#include "twistspdc/tgsm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace testsupport {

using twistspdc::Matrix;

// Fixed setup: lambda = 400 nm, sigma = 50 um, L = 1 cm, R = infinity.
inline constexpr double kWavelength = 400e-9;
inline constexpr double kSigma = 50e-6;
inline constexpr double kLength = 0.01;
inline double k_pump() { return 2.0 * std::numbers::pi / kWavelength; }

inline twistspdc::PhaseMatching default_pm() { return {kLength, k_pump()}; }
inline twistspdc::TgsmParams default_pump(double beta, double t, int sign = 1) {
  return twistspdc::params_from_normalized({beta, t, sign}, kSigma, k_pump(), 0.0);
}

// Frozen values from an independent numpy evaluation (explicit R G R^T,
// eigvals of Omega V^PT in float64 after balancing) cross-checked against
// the closed form with the cancellation-free lambda_- branch.
inline constexpr double kCoherentLambdaMinus = 0.23936536824085958;
inline constexpr double kCoherentLambdaPlus = 2.427032390694624;
inline constexpr double kCoherentLogNeg = 1.4732339528214344;
inline constexpr double kLambdaMinusT1Beta0p1 = 0.4715416232262062;
inline constexpr double kLambdaPlusT1Beta0p1 = 12.320174366715925;
inline constexpr double kLambdaMinusT1Beta0p05 = 0.2417920759329702;
inline constexpr double kLambdaMinusT1Beta0p02 = 0.09703929387566954;
inline constexpr double kLambdaMinusT1Beta0p01 = 0.04853569449690923;
inline constexpr double kLogNegT1Beta0p01 = 4.664617204286389;
inline constexpr double kLambdaMinusT1Beta0p3 = 0.707536104038801;
inline constexpr double kManciniMinusPlusT1Beta0p1 = 12.087951096163406;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Two-mode invariants: nu_pm^2 = (D +- sqrt(D^2 - 4 det V)) / 2, D = det A + det B + 2 det C.
inline std::vector<double> two_mode_spectrum(const Matrix& v) {
  const double da = v.block(0, 0, 2, 2).determinant();
  const double db = v.block(2, 2, 2, 2).determinant();
  const double dc = v.block(0, 2, 2, 2).determinant();
  const double d = da + db + 2.0 * dc;
  const double det = v.determinant();
  const double root = std::sqrt(std::max(0.0, d * d - 4.0 * det));
  return {std::sqrt((d - root) / 2.0), std::sqrt((d + root) / 2.0)};
}

// Independent route: positive eigenvalues of the Hermitian i V^{1/2} Omega V^{1/2},
// in double, after a per-mode symplectic balancing.
inline std::vector<double> hermitian_spectrum(const Matrix& v) {
  const int n = static_cast<int>(v.rows() / 2);
  Eigen::VectorXd d(2 * n);
  for (int j = 0; j < n; ++j) {
    const double s = std::sqrt(std::sqrt(v(2 * j + 1, 2 * j + 1) / v(2 * j, 2 * j)));
    d(2 * j) = s;
    d(2 * j + 1) = 1.0 / s;
  }
  const Matrix b = d.asDiagonal() * v * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  const Matrix root = es.operatorSqrt();
  const Matrix m = root * twistspdc::symplectic_form(n) * root;
  const Eigen::MatrixXcd h = std::complex<double>(0, 1) * m.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = n; i < 2 * n; ++i) out.push_back(hs.eigenvalues()(i));
  std::sort(out.begin(), out.end());
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

 private:
  std::mt19937_64 engine_;
};

// Product of random local squeezers/rotations and two-mode beam splitters.
inline Matrix random_symplectic(int n, Rng& rng) {
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  for (int step = 0; step < 4 * n; ++step) {
    Matrix g = Matrix::Identity(2 * n, 2 * n);
    const int a = rng.index(n);
    switch (rng.index(3)) {
      case 0: {
        const double r = rng.uniform(-1.0, 1.0);
        g(2 * a, 2 * a) = std::exp(r);
        g(2 * a + 1, 2 * a + 1) = std::exp(-r);
        break;
      }
      case 1: {
        const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
        g(2 * a, 2 * a) = std::cos(th);
        g(2 * a, 2 * a + 1) = std::sin(th);
        g(2 * a + 1, 2 * a) = -std::sin(th);
        g(2 * a + 1, 2 * a + 1) = std::cos(th);
        break;
      }
      default: {
        if (n < 2) break;
        int b = rng.index(n - 1);
        if (b >= a) ++b;
        const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (int c = 0; c < 2; ++c) {
          g(2 * a + c, 2 * a + c) = std::cos(th);
          g(2 * a + c, 2 * b + c) = std::sin(th);
          g(2 * b + c, 2 * a + c) = -std::sin(th);
          g(2 * b + c, 2 * b + c) = std::cos(th);
        }
      }
    }
    s = g * s;
  }
  return s;
}

// S diag(nu) S^T with the given symplectic eigenvalues.
inline Matrix cm_with_spectrum(const std::vector<double>& nus, Rng& rng) {
  const int n = static_cast<int>(nus.size());
  Eigen::VectorXd d(2 * n);
  for (int j = 0; j < n; ++j) d(2 * j) = d(2 * j + 1) = nus[j];
  const Matrix s = random_symplectic(n, rng);
  Matrix v = s * d.asDiagonal() * s.transpose();
  return 0.5 * (v + v.transpose());
}

inline Matrix random_physical_cm(int n, Rng& rng) {
  std::vector<double> nus(n);
  for (double& nu : nus) nu = 0.5 + rng.log_uniform(1e-3, 5.0);
  return cm_with_spectrum(nus, rng);
}

}  // namespace testsupport
