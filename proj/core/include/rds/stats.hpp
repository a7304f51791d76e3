#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rds {

struct ReplicateMeta {
  double alpha = 0.0;
  double s = 0.0;
  std::string model;
  std::uint64_t seed = 0;
};

/// One value per replicate, replicate i bound to stream identity (seed, i).
struct ReplicateSet {
  std::vector<std::complex<double>> values;
  ReplicateMeta meta;
};

enum class Verdict { kPass, kFail, kSmoke };
std::string to_string(Verdict v);

struct StatReport {
  std::string name;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<double> tv_distance;
  std::optional<double> standard_error;
  std::size_t n_replicates = 0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::kSmoke;
  /// Extra named numbers (means, maxima, thresholds), sorted by key.
  std::map<std::string, double> extra;

  std::string to_json() const;
  static std::vector<std::string> csv_header();
  std::vector<std::string> csv_row() const;
};

struct ComplexCovariance {
  std::complex<double> pseudo;      // mean of x y
  std::complex<double> hermitian;   // mean of x conj(y)
  std::complex<double> se_pseudo;   // (SE of re, SE of im)
  std::complex<double> se_hermitian;
  /// Largest of the four component standard errors.
  double se() const noexcept;
};

/// Requires equal lengths (PairingError) of at least 30 (ArgumentError).
ComplexCovariance empirical_complex_covariance(const ReplicateSet& xs, const ReplicateSet& ys);
ComplexCovariance empirical_complex_covariance(std::span<const std::complex<double>> xs,
                                               std::span<const std::complex<double>> ys);

double mean(std::span<const double> xs);
/// Sample variance with denominator n - 1.
double sample_variance(std::span<const double> xs);

/// sup |F_n - F| for the empirical CDF of xs.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov tail at lambda = (sqrt n + 0.12 + 0.11/sqrt n) D.
double ks_pvalue(double d, std::size_t n);
double standard_normal_cdf(double x);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Goodness of fit of counts against probabilities (tail bins merged until
/// every expected count is at least 5).
ChiSquareResult chi_square_gof(std::span<const std::size_t> counts, std::span<const double> probs);
/// Two-sample homogeneity test on count histograms, same merging rule.
ChiSquareResult chi_square_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Half the l1 distance; shorter vector padded with zeros.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Histogram of nonnegative integers and its normalised pmf.
std::vector<std::size_t> histogram(std::span<const int> values);
std::vector<double> normalize(std::span<const std::size_t> counts);

/// Law of N_r = sum_k Bernoulli(r^{2k}), k = 1..k_max.
struct ZeroCountLaw {
  double r = 0.0;
  std::vector<double> pmf;
  int k_max = 0;

  double mean() const;
  double variance() const;
};

/// k_max is the smallest k with r^{2k} < 1e-15.
ZeroCountLaw zero_count_pmf(double r);

}  // namespace rds
