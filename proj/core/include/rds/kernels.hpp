#pragma once

#include <complex>
#include <span>

#include <Eigen/Core>

#include "rds/coefficients.hpp"

namespace rds {

/// Parameters of the limit process I(alpha; z) on the right half-plane.
struct KernelParams {
  double alpha = 0.0;
  CovarianceSpec cov{1.0, 1.0, 0.0};

  /// Throws ArgumentError unless alpha > -1/2 and cov is valid.
  void validate() const;
};

/// E I(z1) I(z2) = Gamma(1+2a) (s1^2 - s2^2 + 2 i rho) / (z1 + z2)^{1+2a}.
std::complex<double> kernel_pseudo(const KernelParams& p, std::complex<double> z1, std::complex<double> z2);

/// E I(z1) conj I(z2) = Gamma(1+2a) (s1^2 + s2^2) / (z1 + conj z2)^{1+2a}.
std::complex<double> kernel_hermitian(const KernelParams& p, std::complex<double> z1, std::complex<double> z2);

/// Kernels of the part of the integral over u > u0 only,
/// i.e. Gamma(1+2a) w^{-(1+2a)} is replaced by w^{-(1+2a)} Gamma(1+2a, w u0).
std::complex<double> kernel_pseudo_tail(const KernelParams& p, std::complex<double> z1,
                                        std::complex<double> z2, double u0);
std::complex<double> kernel_hermitian_tail(const KernelParams& p, std::complex<double> z1,
                                           std::complex<double> z2, double u0);

/// Real 2m x 2m covariance of (Re X_1, Im X_1, ..., Re X_m, Im X_m) from the
/// Hermitian matrix H_ij = E X_i conj X_j and the pseudo matrix P_ij = E X_i X_j.
/// Only the upper triangles are read; the result is symmetric by construction.
Eigen::MatrixXd real_covariance(const Eigen::MatrixXcd& hermitian, const Eigen::MatrixXcd& pseudo);

/// Throws KernelInconsistencyError if the smallest eigenvalue is below
/// -rel_tol times the largest absolute eigenvalue.
void check_psd(const Eigen::MatrixXd& cov, double rel_tol = 1e-10);

/// joint covariance of the limit process at the grid points; validated PSD.
Eigen::MatrixXd joint_real_covariance(const KernelParams& p, std::span<const std::complex<double>> grid);

/// cosh(z1 - conj z2)^{-(1+2a)}; both points must satisfy |Im z| < pi/4.
std::complex<double> s_alpha_covariance(double alpha, std::complex<double> z1, std::complex<double> z2);

}  // namespace rds
