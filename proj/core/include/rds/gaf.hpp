#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rds/kernels.hpp"
#include "rds/random.hpp"

namespace rds {

enum class Domain { kPlane, kHalfPlane, kUnitDisk };

bool in_domain(Domain d, std::complex<double> z) noexcept;

/// A realization restricted to finitely many points.
struct GridSample {
  std::vector<std::complex<double>> points;
  std::vector<std::complex<double>> values;
  Domain domain = Domain::kHalfPlane;

  /// Throws ArgumentError on length mismatch or a point outside the domain.
  void validate() const;
  /// Columns re_z, im_z, re_val, im_val.
  void write_csv(std::ostream& out) const;
};

/// Brownian increments on a fixed partition 0 = t_0 < t_1 < ... < t_n.
struct BrownianGrid {
  std::vector<double> times;                      // t_1 .. t_n
  std::vector<std::array<double, 2>> increments;  // (dB_1, dB_2) over (t_{i-1}, t_i]

  /// Increments from normals 2i, 2i+1 of `stream` scaled by sqrt(t_i - t_{i-1}).
  static BrownianGrid sample(std::vector<double> times, const CounterStream& stream);
};

/// Centered real Gaussian vector with a fixed covariance, sampled through a
/// Cholesky factor. Diagonal jitter 1e-12, 1e-11, 1e-10 (relative to the mean
/// diagonal) is tried before giving up with DegenerateGridError.
class GaussianVectorSampler {
 public:
  explicit GaussianVectorSampler(const Eigen::MatrixXd& cov);

  /// Uses normals 0 .. dim-1 of the stream.
  Eigen::VectorXd sample(const CounterStream& stream) const;
  /// Packs (re, im) pairs into complex values.
  std::vector<std::complex<double>> sample_complex(const CounterStream& stream) const;

  double jitter() const noexcept { return jitter_; }
  Eigen::Index dim() const noexcept { return factor_.rows(); }

 private:
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
};

/// Draw of I(alpha; .) on the grid from its finite-dimensional law.
/// Grid points must be pairwise distinct.
GridSample sample_gaf_cholesky(const KernelParams& p, std::span<const std::complex<double>> grid,
                               const CounterStream& stream);

inline constexpr std::size_t kDefaultIntegralCells = std::size_t{1} << 14;

/// Discretised stochastic-integral representation
///   I_j(z) = int_0^inf y^alpha e^{-z y} dB_j(y),  I = (1, i) C^{1/2} (I_1, I_2)^T.
/// Cell weights carry the exact cell variance int y^{2 alpha} e^{-2 Re(z) y} dy and the
/// phase e^{-i Im(z) y_mid}. The first cells are geometrically graded towards 0.
class IntegralSampler {
 public:
  /// y_max <= 0 selects 30 / min Re(grid). Throws DiscretizationError when
  /// y_max * min Re(grid) < 30 or cells < 1000.
  IntegralSampler(const KernelParams& p, std::span<const std::complex<double>> grid, double y_max = 0.0,
                  std::size_t cells = kDefaultIntegralCells);

  GridSample sample(const CounterStream& stream) const;
  /// Sum over cells of |w_i(z_j)|^2, the discrete variance of I_1(z_j).
  double discrete_variance(std::size_t point) const;

  const std::vector<double>& times() const noexcept { return times_; }

 private:
  KernelParams params_;
  std::vector<std::complex<double>> grid_;
  std::vector<double> times_;
  std::vector<std::vector<std::complex<double>>> weights_;  // [point][cell], per unit normal
};

GridSample sample_gaf_integral(const KernelParams& p, std::span<const std::complex<double>> grid,
                               const CounterStream& stream, double y_max = 0.0,
                               std::size_t cells = kDefaultIntegralCells);

/// c_n^2 = (1+2a)(2+2a)...(n+2a)/n!, by recurrence.
double hyperbolic_gaf_coeff_sq(double alpha, std::size_t n);

/// Truncated power series sum_{n < N} a_n z^n.
struct PowerSeriesGaf {
  double alpha = 0.0;
  bool complex_coefficients = true;
  std::vector<std::complex<double>> coeffs;

  std::complex<double> operator()(std::complex<double> z) const;
  double real_value(double x) const;
};

/// a_n = c_n N_n with N_n standard complex (Re, Im each variance 1/2) or
/// standard real. The real series with alpha = 0 has c_n = 1.
PowerSeriesGaf sample_power_series_gaf(double alpha, bool complex_coefficients, const CounterStream& stream,
                                       std::size_t n_terms);

/// Bound on sum_{n >= n_terms} c_n^2 r^{2n}.
double power_series_tail_variance(double alpha, double r, std::size_t n_terms);
/// Smallest N with power_series_tail_variance(alpha, r, N) < tol^2.
std::size_t power_series_terms(double alpha, double r, double tol);

/// phi(z) = (1+z)/(1-z) and its inverse (w-1)/(w+1).
std::complex<double> mobius(std::complex<double> z);
std::complex<double> mobius_inv(std::complex<double> w);

/// 2^a Gamma(1+2a)^{-1/2} (1-z)^{-(1+2a)}.
std::complex<double> disk_prefactor(double alpha, std::complex<double> z);

/// f(z) = disk_prefactor(z) I(phi(z)) for each disk point; the image phi(z)
/// must be among I_values.points (AlignmentError otherwise).
GridSample time_change_to_disk(const KernelParams& p, const GridSample& i_values,
                               std::span<const std::complex<double>> disk_points);

}  // namespace rds
