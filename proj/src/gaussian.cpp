#include "twistspdc/gaussian.hpp"

#include "twistspdc/errors.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace twistspdc {

namespace {

// Eigensolves run in extended precision. Two-photon matrices in SI units
// keep a spread of ~1e4 between the largest and smallest symplectic
// eigenvalue even after balancing, which costs several digits in double.
using Real = long double;
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

RMatrix balanced(const CovMatrix& v, const Vector& d) {
  const Matrix b = d.asDiagonal() * v.matrix() * d.asDiagonal();
  return b.cast<Real>();
}

RMatrix omega_of(int n_modes) { return symplectic_form(n_modes).cast<Real>(); }

void require_eight_by_eight(const CovMatrix& v, const char* op) {
  if (v.dim() != 8) {
    throw WrongDimension(fmt::format("{}: expected an 8x8 two-photon matrix, got {}x{}", op, v.dim(), v.dim()));
  }
}

}  // namespace

CovMatrix::CovMatrix(Matrix entries) : entries_(std::move(entries)) {
  const auto rows = entries_.rows();
  if (rows == 0 || rows != entries_.cols() || rows % 2 != 0) {
    throw WrongDimension(
        fmt::format("covariance matrix must be square with even dimension, got {}x{}", rows, entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw InvalidParams("covariance matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!(entries_(i, i) > 0.0)) {
      throw InvalidParams(fmt::format("covariance diagonal entry {} is not positive ({})", i, entries_(i, i)));
    }
  }
  // Asymmetry is measured against sqrt(V_ii V_jj) so the check is invariant
  // under per-coordinate unit changes.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = i + 1; j < rows; ++j) {
      const double scale = std::sqrt(entries_(i, i) * entries_(j, j));
      if (std::abs(entries_(i, j) - entries_(j, i)) > kSymmetryTol * scale) {
        throw InvalidParams(fmt::format("covariance matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

Matrix symplectic_form(int n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

Vector balancing_scales(const CovMatrix& v) {
  Vector d(v.dim());
  for (int j = 0; j < v.n_modes(); ++j) {
    const double s = std::pow(v(2 * j + 1, 2 * j + 1) / v(2 * j, 2 * j), 0.25);
    d(2 * j) = s;
    d(2 * j + 1) = 1.0 / s;
  }
  return d;
}

SymplecticSpectrum symplectic_spectrum(const CovMatrix& v) {
  const int n = v.n_modes();
  const RMatrix b = balanced(v, balancing_scales(v));

  Eigen::LLT<RMatrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("symplectic_spectrum: covariance matrix is not positive definite");
  }

  Eigen::EigenSolver<RMatrix> solver(omega_of(n) * b, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw PairingDefect("symplectic_spectrum: eigensolver did not converge", 1.0);
  }
  const auto& eig = solver.eigenvalues();

  Real max_im = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) max_im = std::max(max_im, std::abs(eig(i).imag()));

  std::vector<Real> upper;
  std::vector<Real> lower;
  Real worst = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    worst = std::max(worst, std::abs(eig(i).real()) / max_im);
    (eig(i).imag() > 0 ? upper : lower).push_back(std::abs(eig(i).imag()));
  }
  if (upper.size() != lower.size()) {
    throw PairingDefect("symplectic_spectrum: eigenvalues are not conjugate pairs", 1.0);
  }
  std::sort(upper.begin(), upper.end());
  std::sort(lower.begin(), lower.end());

  SymplecticSpectrum out;
  out.values.reserve(n);
  for (std::size_t j = 0; j < upper.size(); ++j) {
    worst = std::max(worst, std::abs(upper[j] - lower[j]) / max_im);
    out.values.push_back(static_cast<double>((upper[j] + lower[j]) / 2));
  }
  out.residual = static_cast<double>(worst);
  if (out.residual > kPairingTol) {
    throw PairingDefect(fmt::format("symplectic_spectrum: pairing defect {:.3e}", out.residual), out.residual);
  }
  return out;
}

bool is_physical(const CovMatrix& v, double tol) {
  try {
    return symplectic_spectrum(v).values.front() >= 0.5 - tol;
  } catch (const NotPositiveDefinite&) {
    return false;
  }
}

double purity(const CovMatrix& v) {
  // det of the balancing transform is 1, so the determinant is unchanged.
  const RMatrix b = balanced(v, balancing_scales(v));
  Eigen::LLT<RMatrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("purity: covariance matrix is not positive definite");
  }
  Real sqrt_det = 1;
  const RMatrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) sqrt_det *= l(i, i);
  return static_cast<double>(1 / (std::pow(Real{2}, v.n_modes()) * sqrt_det));
}

CovMatrix partial_transpose(const CovMatrix& v, Party party) {
  require_eight_by_eight(v, "partial_transpose");
  Vector sign = Vector::Ones(8);
  const int offset = party == Party::First ? 0 : 4;
  sign(offset + 1) = -1.0;
  sign(offset + 3) = -1.0;
  return CovMatrix(sign.asDiagonal() * v.matrix() * sign.asDiagonal());
}

CovMatrix local_scale(const CovMatrix& v) {
  require_eight_by_eight(v, "local_scale");
  Vector s(8);
  for (int j = 0; j < 4; ++j) {
    s(2 * j) = 1.0 / std::sqrt(2.0);
    s(2 * j + 1) = std::sqrt(2.0);
  }
  return CovMatrix(s.asDiagonal() * v.matrix() * s.asDiagonal());
}

double log_negativity_of(const SymplecticSpectrum& pt_spectrum) {
  double total = 0.0;
  for (double nu : pt_spectrum.values) total += std::max(0.0, -std::log(2.0 * nu));
  return total;
}

double log_negativity(const CovMatrix& v) {
  return log_negativity_of(symplectic_spectrum(partial_transpose(v, Party::Second)));
}

WilliamsonFactors williamson(const CovMatrix& v) {
  const int n = v.n_modes();
  const int dim = 2 * n;
  const Vector d = balancing_scales(v);
  const RMatrix b = balanced(v, d);
  const RMatrix omega = omega_of(n);

  Eigen::SelfAdjointEigenSolver<RMatrix> sym(b);
  if (sym.info() != Eigen::Success || sym.eigenvalues().minCoeff() <= 0) {
    throw NotPositiveDefinite("williamson: covariance matrix is not positive definite");
  }
  const RMatrix& q = sym.eigenvectors();
  const RMatrix root = q * sym.eigenvalues().cwiseSqrt().asDiagonal() * q.transpose();
  const RMatrix inv_root = q * sym.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();

  // i * B^{-1/2} Omega B^{-1/2} is Hermitian with eigenvalues +-1/nu_j. The
  // real and imaginary parts of each +1/nu eigenvector span one normal mode.
  const RMatrix m = inv_root * omega * inv_root;
  const CMatrix h = std::complex<Real>(0, 1) * m.cast<std::complex<Real>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> herm(h);
  if (herm.info() != Eigen::Success) {
    throw ConvergenceFailure("williamson: Hermitian eigensolver did not converge", 1.0);
  }

  RMatrix sb(dim, dim);
  std::vector<double> nus(n);
  const Real root2 = std::sqrt(Real{2});
  for (int j = 0; j < n; ++j) {
    // Eigenvalues ascend, so the largest 1/nu (smallest nu) is last.
    const Eigen::Index col = dim - 1 - j;
    const Real mu = herm.eigenvalues()(col);
    if (!(mu > 0)) throw ConvergenceFailure("williamson: spectrum lost its +-pairing", 1.0);
    const auto vec = herm.eigenvectors().col(col);
    const Real nu = 1 / mu;
    const Real w = 1 / std::sqrt(nu);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> c1 = root * (root2 * vec.imag()) * w;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> c2 = root * (root2 * vec.real()) * w;

    // Fix the free rotation within the normal-mode plane: on the physical
    // mode carrying most weight, the position column has no momentum
    // component and a positive position component.
    int anchor = 0;
    Real best = -1;
    for (int k = 0; k < n; ++k) {
      const Real weight = c1.segment(2 * k, 2).squaredNorm() + c2.segment(2 * k, 2).squaredNorm();
      if (weight > best) {
        best = weight;
        anchor = k;
      }
    }
    const Real phi = std::atan2(-c1(2 * anchor + 1), c2(2 * anchor + 1));
    Eigen::Matrix<Real, Eigen::Dynamic, 1> r1 = std::cos(phi) * c1 + std::sin(phi) * c2;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> r2 = -std::sin(phi) * c1 + std::cos(phi) * c2;
    if (r1(2 * anchor) < 0) {
      r1 = -r1;
      r2 = -r2;
    }
    sb.col(2 * j) = r1;
    sb.col(2 * j + 1) = r2;
    nus[j] = static_cast<double>(nu);
  }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> diag(dim);
  for (int j = 0; j < n; ++j) diag(2 * j) = diag(2 * j + 1) = nus[j];
  const Real recon = (sb * diag.asDiagonal() * sb.transpose() - b).norm() / b.norm();
  const Real sympl = (sb * omega * sb.transpose() - omega).norm();
  const double residual = static_cast<double>(std::max(recon, sympl));
  if (residual > 1e-9) {
    throw ConvergenceFailure(fmt::format("williamson: residual {:.3e} above 1e-9", residual), residual);
  }

  WilliamsonFactors out;
  out.symplectic = d.cwiseInverse().asDiagonal() * sb.cast<double>();
  out.diag = std::move(nus);
  out.residual = residual;
  return out;
}

double min_scaled_eigenvalue(const Matrix& m, const Vector& scales, const Matrix& reference) {
  const Matrix ref = scales.asDiagonal() * reference * scales.asDiagonal();
  const Vector norm = ref.diagonal().cwiseSqrt().cwiseInverse();
  const Vector total = scales.cwiseProduct(norm);
  const Matrix scaled = total.asDiagonal() * m * total.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(scaled, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace twistspdc
