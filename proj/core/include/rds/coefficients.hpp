#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "rds/random.hpp"

namespace rds {

/// Covariance matrix of (eta, theta):
///   [ sigma1_sq  rho       ]
///   [ rho        sigma2_sq ]
struct CovarianceSpec {
  double sigma1_sq = 1.0;
  double sigma2_sq = 0.0;
  double rho = 0.0;

  /// Throws ArgumentError unless the matrix is a nondegenerate covariance.
  static CovarianceSpec checked(double sigma1_sq, double sigma2_sq, double rho);

  bool is_valid() const noexcept;
  /// E(eta^2 + theta^2).
  double trace() const noexcept { return sigma1_sq + sigma2_sq; }
  /// E(eta + i theta)^2 = sigma1^2 - sigma2^2 + 2 i rho.
  std::complex<double> pseudo_variance() const noexcept { return {sigma1_sq - sigma2_sq, 2.0 * rho}; }
  bool is_isotropic(double tol = 1e-12) const noexcept;
  bool is_real() const noexcept { return sigma2_sq == 0.0 && rho == 0.0; }
};

/// Symmetric PSD square root of the covariance matrix.
Eigen::Matrix2d covariance_sqrt(const CovarianceSpec& spec);

/// One coefficient pair (eta_n, theta_n).
struct Coefficient {
  double eta = 0.0;
  double theta = 0.0;

  std::complex<double> value() const noexcept { return {eta, theta}; }
  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

struct RademacherReal {};
struct GaussianReal {
  double sigma = 1.0;
};
/// Standard complex normal: real and imaginary parts N(0, 1/2).
struct GaussianComplexIsotropic {};
/// exp(i U) with U uniform on [0, 2 pi).
struct UniformUnitCircle {};
/// Takes value `a` with probability p and b = -p a / (1 - p) otherwise.
struct TwoPointComplex {
  std::complex<double> a{1.0, 0.0};
  double p = 0.5;
};

/// Law of (eta, theta). Every kind is centered; parameters are validated on
/// construction so a live model always has a valid implied covariance.
class CoefficientModel {
 public:
  using Kind = std::variant<RademacherReal, GaussianReal, GaussianComplexIsotropic,
                            UniformUnitCircle, TwoPointComplex>;

  CoefficientModel() : kind_(RademacherReal{}) {}
  explicit CoefficientModel(Kind kind);

  static CoefficientModel rademacher() { return CoefficientModel(RademacherReal{}); }
  static CoefficientModel gauss_real(double sigma = 1.0) { return CoefficientModel(GaussianReal{sigma}); }
  static CoefficientModel gauss_complex() { return CoefficientModel(GaussianComplexIsotropic{}); }
  static CoefficientModel circle() { return CoefficientModel(UniformUnitCircle{}); }
  static CoefficientModel two_point(std::complex<double> a, double p) {
    return CoefficientModel(TwoPointComplex{a, p});
  }

  const Kind& kind() const noexcept { return kind_; }
  /// Documented configuration name: "rademacher", "gauss-real", ...
  std::string_view name() const noexcept;
  /// True when theta is identically zero.
  bool is_real() const noexcept;

  /// Maps one random block to a draw of (eta, theta).
  Coefficient draw(const CounterStream& stream, std::uint64_t index) const noexcept;

 private:
  Kind kind_;
};

/// Exact covariance of the model's law.
CovarianceSpec implied_covariance(const CoefficientModel& model);

/// Reproducible i.i.d. sequence (eta_n, theta_n), n >= 2, for one replicate.
class CoefficientStream {
 public:
  CoefficientStream(CoefficientModel model, std::uint64_t master_seed, std::uint32_t replicate_id)
      : model_(std::move(model)),
        stream_(master_seed, replicate_id, Substream::kCoefficients) {}

  /// Draw for series index n (n >= 2); a pure function of (seed, replicate, n).
  Coefficient at(std::uint64_t n) const noexcept { return model_.draw(stream_, n); }

  /// (eta_2, theta_2), ..., (eta_{count+1}, theta_{count+1}).
  std::vector<Coefficient> sample_pairs(std::size_t count) const;
  /// Pairs for indices first_n, ..., first_n + count - 1.
  std::vector<Coefficient> sample_pairs_from(std::uint64_t first_n, std::size_t count) const;

  const CoefficientModel& model() const noexcept { return model_; }
  std::uint64_t master_seed() const noexcept { return stream_.seed(); }
  std::uint32_t replicate_id() const noexcept { return stream_.replicate(); }

 private:
  CoefficientModel model_;
  CounterStream stream_;
};

}  // namespace rds
