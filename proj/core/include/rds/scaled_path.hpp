#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rds/coefficients.hpp"

namespace rds {

/// Options for the head/tail split of F_s(z) = s^{1/2+alpha} D(alpha; 1/2 + s z).
struct HybridOptions {
  /// Terms k <= head_terms are summed exactly with the stream's coefficients.
  std::size_t head_terms = 4096;
  /// Real-part range of the points where the path will be evaluated.
  double x_min = 0.1;
  double x_max = 4.0;
  /// Tail cells extend to u = tail_extent / x_min, where e^{-x u} is negligible.
  double tail_extent = 40.0;
  /// Cell width in u = s log k; 0 picks min(0.01, 0.05 / x_max).
  double cell_width = 0.0;

  void validate() const;
};

/// One realization of the scaled series as an analytic function of z.
///
/// The head k <= K is exact. Beyond K the series is replaced by a Gaussian
/// stochastic integral with the same covariance structure in the variable
/// u = s log k,
///   (1, i) C^{1/2} int_{u0}^inf u^alpha e^{-z u} dB(u),   u0 = s log(K + 1/2),
/// discretised on uniform cells with exact per-cell mass int u^{2 alpha} du.
/// The sum over cells is a finite exponential sum, hence analytic in z.
class ScaledSeriesPath {
 public:
  ScaledSeriesPath(const CoefficientStream& stream, double alpha, double s, const HybridOptions& opts);

  std::complex<double> operator()(std::complex<double> z) const;
  std::complex<double> head(std::complex<double> z) const;
  std::complex<double> tail(std::complex<double> z) const;

  double alpha() const noexcept { return alpha_; }
  double s() const noexcept { return s_; }
  double tail_start() const noexcept { return u0_; }
  std::size_t tail_cells() const noexcept { return tail_amp_.size(); }

 private:
  double alpha_;
  double s_;
  std::size_t head_terms_;
  std::vector<std::complex<double>> head_amp_;  // index k - 2
  double u0_ = 0.0;
  double width_ = 0.0;
  std::vector<std::complex<double>> tail_amp_;
};

/// Deterministic head weights s^{1/2+alpha} (log k)^alpha k^{-1/2 - s z} for k = 2..K (index k - 2).
std::vector<std::complex<double>> head_weights(double alpha, double s, std::complex<double> z,
                                               std::size_t head_terms);

/// Exact covariance of the discarded part sum_{k > K} of the scaled series:
///   s^{1+2 alpha} sum_{k>K} (log k)^{2 alpha} k^{-1 - s w},
/// with w = z1 + conj(z2) for the Hermitian entry and w = z1 + z2 for the pseudo entry
/// (multiplied by the trace or the pseudo-variance of C).
std::complex<double> scaled_tail_sum(double alpha, double s, std::complex<double> w, std::size_t head_terms);

/// Same quantity for the whole series (K = 1).
std::complex<double> scaled_full_sum(double alpha, double s, std::complex<double> w);

}  // namespace rds
