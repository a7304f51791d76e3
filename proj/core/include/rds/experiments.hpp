#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rds/coefficients.hpp"
#include "rds/scaled_path.hpp"
#include "rds/stats.hpp"
#include "rds/zeros.hpp"

namespace rds {

// One-dimensional CLT at z = 1 for real coefficients.

struct CltOptions {
  CoefficientModel model;
  double alpha = 0.0;
  double s = 2e-3;
  std::size_t replicates = 2000;
  std::uint64_t seed = 0;
  /// Exact terms per replicate; the rest is a Gaussian with the exact tail variance.
  std::size_t head_terms = std::size_t{1} << 16;
  /// Negative control: leave out the factor 2^{1+2 alpha} of the normaliser.
  bool broken_normalizer = false;
  /// Null-distribution sanity check: replace every replicate by an exact N(0,1) draw.
  bool exact_normal_replicates = false;
  unsigned threads = 1;
};

struct CltResult {
  std::vector<double> values;
  StatReport report;  // KS statistic and p-value; pass iff p > 0.001
};

CltResult clt_normality_check(const CltOptions& opts);

// Covariance of the scaled series against the limit kernels.

struct CovarianceOptions {
  CoefficientModel model;
  double alpha = 0.0;
  std::vector<double> s_values{1e-1, 1e-2, 1e-3};
  std::vector<std::complex<double>> points{{1.0, 0.0}, {1.0, 0.5}, {2.0, -0.5}};
  std::size_t replicates = 100000;
  std::uint64_t seed = 0;
  std::size_t head_terms = 2048;
  double se_band = 5.0;
  unsigned threads = 1;
};

/// Entries are listed for pairs (i, j) with i <= j, row by row.
struct CovarianceLevel {
  double s = 0.0;
  std::vector<std::complex<double>> empirical_hermitian, empirical_pseudo;
  std::vector<std::complex<double>> se_hermitian, se_pseudo;
  std::vector<std::complex<double>> exact_hermitian, exact_pseudo;    // finite s, infinite series
  std::vector<std::complex<double>> kernel_hermitian, kernel_pseudo;  // s -> 0 limit
  double exact_to_kernel = 0.0;      // max entry distance
  double empirical_to_kernel = 0.0;  // max entry distance
  bool within_band_of_exact = false;
  bool within_band_of_kernel = false;
};

struct CovarianceResult {
  std::vector<CovarianceLevel> levels;  // in the order of s_values
  bool monotone = false;                // exact_to_kernel strictly decreasing along s_values
  StatReport report;
};

CovarianceResult covariance_convergence(const CovarianceOptions& opts);

// Zero counts in the image disk of |z| < r.

struct ZeroCountOptions {
  CoefficientModel model = CoefficientModel::gauss_complex();
  double s = 1e-3;
  double r = 0.5;
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  std::size_t head_terms = 4096;
  double tol = 1e-6;
  double isolate_diameter = 0.1;
  double margin = 0.05;
  unsigned threads = 1;
};

struct ZeroCountResult {
  std::vector<int> counts;
  std::vector<double> empirical_pmf;
  ZeroCountLaw law;
  ChiSquareResult chi_square;
  StatReport report;  // TV to the pmf; pass iff TV < 0.1
};

/// Rectangle in the half-plane covering disk_image(r) with the given margin.
Region covering_rectangle(double r, double margin);

/// Number of zeros of one hybrid path in disk_image(r).
int zero_count_one(const CoefficientStream& stream, double s, double r, const ZeroCountOptions& opts);

ZeroCountResult zero_count_experiment(const ZeroCountOptions& opts);

/// TV distance between the empirical count laws of two runs; pass iff < 0.1.
StatReport universality_report(const ZeroCountResult& a, const ZeroCountResult& b);

// Real zeros of the scaled series against the real hyperbolic series.

struct RealZeroOptions {
  CoefficientModel model;
  double s = 1e-3;
  double a = 0.2;
  double b = 5.0;
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  std::size_t head_terms = 4096;
  double tol = 1e-9;
  unsigned threads = 1;
};

struct RealZeroResult {
  std::vector<int> series_counts;
  std::vector<int> gaf_counts;
  double tv = 0.0;
  ChiSquareResult chi_square;
  double mean_series = 0.0;
  double mean_gaf = 0.0;
  double se_difference = 0.0;
  StatReport report;  // pass iff TV < 0.15 and the means agree within 3 SE
};

RealZeroResult real_zero_process_comparison(const RealZeroOptions& opts);

// Law of the iterated logarithm, single path.

struct LilParams {
  double alpha = 0.0;
  double sigma1_sq = 1.0;
  std::vector<double> s_grid;

  /// Gamma(1+2 alpha) / 2^{2 alpha}.
  double c_alpha() const;
  /// (s^{1+2 alpha} / (c_alpha log log(1/s)))^{1/2}.
  double f_alpha(double s) const;
  void validate() const;
};

/// `points` values, geometric from s_max down to s_min.
std::vector<double> geometric_grid(double s_max, double s_min, std::size_t points);

struct LilTail {
  std::vector<double> t_mid;
  std::vector<double> sqrt_dt;
};

/// Geometric cells in t = log k from log(head + 1/2) to t_end, relative width `ratio`.
LilTail lil_tail_cells(std::size_t head_terms, double t_end, double ratio);

/// R(s) on the grid for given head coefficients eta_2..eta_{K+1} and one unit
/// normal per tail cell. Linear in (head_eta, tail_normals).
std::vector<double> lil_path_values(std::span<const double> head_eta, std::span<const double> tail_normals,
                                    const LilTail& tail, const LilParams& params);

struct LilOptions {
  CoefficientModel model;
  LilParams params;
  std::uint64_t seed = 0;
  std::size_t head_terms = std::size_t{1} << 20;
  double cell_ratio = 1e-3;
  double band = 1.05;
};

struct LilResult {
  std::vector<double> s_grid;
  std::vector<double> r_values;
  double max_r = 0.0;
  double min_r = 0.0;
  double fraction_inside = 0.0;
  StatReport report;  // verdict is always smoke
};

LilResult lil_band_check(const LilOptions& opts);

// Deterministic zeta-type limit.

struct ZetaRow {
  std::complex<double> z;
  std::complex<double> value;  // z^{1+beta} S(z)
  double error = 0.0;          // |value - Gamma(1+beta)|
};

inline constexpr std::uint64_t kZetaTerms = 100000;

std::vector<ZetaRow> zeta_limit_check(double beta, std::span<const std::complex<double>> z_list,
                                      std::uint64_t terms = kZetaTerms);

// Abscissa estimates for several replicates.
std::vector<double> sigma_c_estimates(const CoefficientModel& model, double alpha, std::size_t n_max,
                                      std::uint64_t seed, std::size_t replicates, unsigned threads = 1);

}  // namespace rds
