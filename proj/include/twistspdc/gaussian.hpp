#pragma once

// Covariance-matrix algebra for zero-mean Gaussian states with hbar = 1
// (vacuum variance 1/2). Coordinates are ordered per mode as (position,
// momentum); a single beam/photon uses (x, q_x, y, q_y).

#include <Eigen/Dense>

#include <vector>

namespace twistspdc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kPhysicalityTol = 1e-9;
inline constexpr double kPairingTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-12;

/// Symmetric real 2n x 2n second-moment matrix with strictly positive diagonal.
class CovMatrix {
 public:
  /// Throws WrongDimension for odd/empty/non-square input and InvalidParams
  /// for asymmetric entries or a non-positive diagonal. Entries are
  /// symmetrized on construction.
  explicit CovMatrix(Matrix entries);

  int n_modes() const { return static_cast<int>(entries_.rows() / 2); }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

struct SymplecticSpectrum {
  std::vector<double> values;  // ascending
  double residual = 0.0;       // worst relative +-i*nu pairing defect
};

struct WilliamsonFactors {
  Matrix symplectic;         // S_w with V = S_w diag(nu1,nu1,...) S_w^T
  std::vector<double> diag;  // nu_j, ascending
  double residual = 0.0;     // relative reconstruction error in balanced coordinates
};

enum class Party { First = 1, Second = 2 };

/// Direct sum of n copies of [[0,1],[-1,0]].
Matrix symplectic_form(int n_modes);

/// Per-coordinate diagonal d of the balancing transform diag(s, 1/s) per
/// mode with s = (V_qq / V_xx)^(1/4). d V d has equal x and q variances.
Vector balancing_scales(const CovMatrix& v);

/// Moduli of the eigenvalues of Omega*V, computed after balancing.
/// Throws NotPositiveDefinite or PairingDefect.
SymplecticSpectrum symplectic_spectrum(const CovMatrix& v);

/// V > 0 and min symplectic eigenvalue >= 1/2 - tol.
bool is_physical(const CovMatrix& v, double tol = kPhysicalityTol);

/// 1 / (2^n sqrt(det V)).
double purity(const CovMatrix& v);

/// Flips the momentum signs of one photon of an 8x8 two-photon matrix.
CovMatrix partial_transpose(const CovMatrix& v, Party party = Party::Second);

/// S V S^T with S = diag(1/sqrt2, sqrt2) on each of the four modes.
CovMatrix local_scale(const CovMatrix& v);

/// sum_j max(0, -ln(2 nu_j)) over a symplectic spectrum.
double log_negativity_of(const SymplecticSpectrum& pt_spectrum);

/// Log-negativity (natural log) of an 8x8 two-photon matrix, transposing photon 2.
double log_negativity(const CovMatrix& v);

/// Symplectic diagonalization. Throws NotPositiveDefinite or ConvergenceFailure.
WilliamsonFactors williamson(const CovMatrix& v);

/// Smallest eigenvalue of a symmetric matrix after the congruence
/// diag(scales) M diag(scales) and unit-diagonal normalization by `reference`.
/// Used to test PSD-ness of matrices whose entries span many decades.
double min_scaled_eigenvalue(const Matrix& m, const Vector& scales, const Matrix& reference);

}  // namespace twistspdc
