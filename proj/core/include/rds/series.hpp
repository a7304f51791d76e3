#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "rds/coefficients.hpp"

namespace rds {

/// Truncated Dirichlet series D_N(alpha; w) = sum_{n=2}^N (log n)^alpha (eta_n + i theta_n) n^{-w}.
struct SeriesSpec {
  double alpha = 0.0;
  std::size_t truncation_n = 2;
  bool compensated_summation = false;

  /// Compensated summation is switched on above this many terms.
  static constexpr std::size_t kCompensationThreshold = 100000;

  static SeriesSpec make(double alpha, std::size_t truncation_n) {
    return {alpha, truncation_n, truncation_n > kCompensationThreshold};
  }
  /// Throws ArgumentError unless alpha > -1/2 and N >= 2.
  void validate() const;
};

/// A point z in the right half-plane and a scale s > 0.
struct EvalRequest {
  std::complex<double> z{1.0, 0.0};
  double s = 1.0;

  void validate() const;
};

/// Shared read-only table with log(n) at index n, of size >= n_max + 1.
std::shared_ptr<const std::vector<double>> log_table(std::size_t n_max);

/// Smallest-prime-factor table up to n_max (spf[n] == n for primes).
std::shared_ptr<const std::vector<std::uint32_t>> smallest_prime_factors(std::size_t n_max);

/// Fills out[n] = n^{-w} for 2 <= n < out.size(). Only primes cost an
/// exponential; composites are products over the smallest-prime-factor table.
void fill_negative_powers(std::complex<double> w, std::span<std::complex<double>> out);

/// coeffs[0] holds (eta_2, theta_2). Throws LengthError if fewer than N-1 pairs.
std::complex<double> eval_partial(std::span<const Coefficient> coeffs, const SeriesSpec& spec,
                                  std::complex<double> w);

/// s^{1/2+alpha} D_N(alpha; 1/2 + s z).
std::complex<double> scaled_eval(std::span<const Coefficient> coeffs, const SeriesSpec& spec,
                                 const EvalRequest& req);

/// sum_{n=2}^N (log n)^{alpha+1} (eta_n + i theta_n) n^{-w}, i.e. minus the
/// w-derivative of the alpha-series.
std::complex<double> eval_shifted_alpha_derivative(std::span<const Coefficient> coeffs,
                                                   const SeriesSpec& spec, std::complex<double> w);

/// Upper bound on the standard deviation of the scaled tail beyond N,
///   sqrt( E(eta^2+theta^2) s^{1+2a} int_N^inf (log x)^{2a} x^{-1-2 s x0} dx ),
/// where x0 is the smallest real part on the evaluation grid.
double tail_std_bound(const SeriesSpec& spec, double s, double x0, double second_moment = 1.0);

inline constexpr std::size_t kDefaultTruncationCap = std::size_t{1} << 27;

/// Smallest power of two N with tail_std_bound < eps. Throws ResourceError
/// (naming the cap) if that N exceeds `cap`.
std::size_t choose_truncation(double alpha, double s, double x0, double eps,
                              double second_moment = 1.0, std::size_t cap = kDefaultTruncationCap);

/// Abscissa probe: max of log|S_n| / log n over the upper half of the
/// geometric grid floor(n_max^{j/200}), where S_n = sum_{k=2}^n (log k)^alpha (eta_k + i theta_k).
double estimate_sigma_c(std::span<const Coefficient> coeffs, double alpha, std::size_t n_max);

inline constexpr int kSigmaCGridSize = 200;

/// Plain-text fixtures: one "eta theta" pair per line, '#' comments allowed.
std::vector<Coefficient> read_coefficients(const std::filesystem::path& path);
void write_coefficients(const std::filesystem::path& path, std::span<const Coefficient> coeffs);

}  // namespace rds
