#include "rds/kernels.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "rds/errors.hpp"
#include "rds/special.hpp"

namespace rds {

using cplx = std::complex<double>;

void KernelParams::validate() const {
  if (!(alpha > -0.5) || !std::isfinite(alpha)) throw ArgumentError("kernel: alpha must exceed -1/2");
  if (!cov.is_valid()) throw ArgumentError("kernel: invalid covariance spec");
}

namespace {

void check_point(cplx z) {
  if (!(z.real() > 0.0)) throw DomainError("kernel: points must lie in the right half-plane");
}

cplx power_kernel(double alpha, cplx w) {
  return boost::math::tgamma(1.0 + 2.0 * alpha) * std::pow(w, -(1.0 + 2.0 * alpha));
}

}  // namespace

cplx kernel_pseudo(const KernelParams& p, cplx z1, cplx z2) {
  p.validate();
  check_point(z1);
  check_point(z2);
  return p.cov.pseudo_variance() * power_kernel(p.alpha, z1 + z2);
}

cplx kernel_hermitian(const KernelParams& p, cplx z1, cplx z2) {
  p.validate();
  check_point(z1);
  check_point(z2);
  return p.cov.trace() * power_kernel(p.alpha, z1 + std::conj(z2));
}

cplx kernel_pseudo_tail(const KernelParams& p, cplx z1, cplx z2, double u0) {
  p.validate();
  check_point(z1);
  check_point(z2);
  return p.cov.pseudo_variance() * laplace_tail(2.0 * p.alpha, z1 + z2, u0);
}

cplx kernel_hermitian_tail(const KernelParams& p, cplx z1, cplx z2, double u0) {
  p.validate();
  check_point(z1);
  check_point(z2);
  return p.cov.trace() * laplace_tail(2.0 * p.alpha, z1 + std::conj(z2), u0);
}

Eigen::MatrixXd real_covariance(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& pm) {
  const Eigen::Index m = h.rows();
  Eigen::MatrixXd c(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const cplx hij = h(i, j);
      const cplx pij = pm(i, j);
      const double rr = 0.5 * (pij.real() + hij.real());
      const double ii = 0.5 * (hij.real() - pij.real());
      const double ri = 0.5 * (pij.imag() - hij.imag());  // E Re X_i Im X_j
      const double ir = 0.5 * (pij.imag() + hij.imag());  // E Im X_i Re X_j
      c(2 * i, 2 * j) = rr;
      c(2 * i + 1, 2 * j + 1) = ii;
      c(2 * i, 2 * j + 1) = ri;
      c(2 * i + 1, 2 * j) = ir;
      c(2 * j, 2 * i) = rr;
      c(2 * j + 1, 2 * i + 1) = ii;
      c(2 * j + 1, 2 * i) = ri;
      c(2 * j, 2 * i + 1) = ir;
    }
  }
  return c;
}

void check_psd(const Eigen::MatrixXd& cov, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  if (ev.minCoeff() < -rel_tol * scale) {
    throw KernelInconsistencyError("covariance matrix is not positive semidefinite (min eigenvalue " +
                                   std::to_string(ev.minCoeff()) + ")");
  }
}

Eigen::MatrixXd joint_real_covariance(const KernelParams& p, std::span<const cplx> grid) {
  p.validate();
  const auto m = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd pm = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      h(i, j) = kernel_hermitian(p, grid[i], grid[j]);
      pm(i, j) = kernel_pseudo(p, grid[i], grid[j]);
    }
  }
  Eigen::MatrixXd c = real_covariance(h, pm);
  check_psd(c);
  return c;
}

cplx s_alpha_covariance(double alpha, cplx z1, cplx z2) {
  if (!(alpha > -0.5)) throw ArgumentError("s_alpha_covariance: alpha must exceed -1/2");
  constexpr double kQuarterPi = std::numbers::pi / 4.0;
  if (!(std::abs(z1.imag()) < kQuarterPi) || !(std::abs(z2.imag()) < kQuarterPi))
    throw DomainError("s_alpha_covariance: points must satisfy |Im z| < pi/4");
  return std::pow(std::cosh(z1 - std::conj(z2)), -(1.0 + 2.0 * alpha));
}

}  // namespace rds
