#include "rds/coefficients.hpp"

#include <cmath>
#include <numbers>

#include "rds/errors.hpp"

namespace rds {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool CovarianceSpec::is_valid() const noexcept {
  if (!(sigma1_sq >= 0.0) || !(sigma2_sq >= 0.0) || !std::isfinite(rho)) return false;
  if (!(sigma1_sq + sigma2_sq > 0.0) || !std::isfinite(sigma1_sq + sigma2_sq)) return false;
  const double bound = sigma1_sq * sigma2_sq;
  return rho * rho <= bound * (1.0 + 1e-12);
}

bool CovarianceSpec::is_isotropic(double tol) const noexcept {
  return std::abs(sigma1_sq - sigma2_sq) <= tol * trace() && std::abs(rho) <= tol * trace();
}

CovarianceSpec CovarianceSpec::checked(double sigma1_sq, double sigma2_sq, double rho) {
  CovarianceSpec spec{sigma1_sq, sigma2_sq, rho};
  if (!spec.is_valid()) {
    throw ArgumentError("invalid covariance spec: need sigma1_sq, sigma2_sq >= 0, "
                        "sigma1_sq + sigma2_sq > 0 and rho^2 <= sigma1_sq * sigma2_sq");
  }
  return spec;
}

Eigen::Matrix2d covariance_sqrt(const CovarianceSpec& spec) {
  if (!spec.is_valid()) throw ArgumentError("covariance_sqrt: invalid covariance spec");
  // For a 2x2 PSD matrix A: sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
  const double det = std::max(0.0, spec.sigma1_sq * spec.sigma2_sq - spec.rho * spec.rho);
  const double d = std::sqrt(det);
  const double t = std::sqrt(spec.trace() + 2.0 * d);
  Eigen::Matrix2d m;
  m << (spec.sigma1_sq + d) / t, spec.rho / t, spec.rho / t, (spec.sigma2_sq + d) / t;
  return m;
}

CoefficientModel::CoefficientModel(Kind kind) : kind_(kind) {
  std::visit(overloaded{
                 [](const GaussianReal& g) {
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
                     throw ArgumentError("gauss-real: sigma must be positive");
                 },
                 [](const TwoPointComplex& t) {
                   if (!(t.p > 0.0 && t.p < 1.0))
                     throw ArgumentError("two-point: p must lie in (0, 1)");
                   if (t.a == std::complex<double>{} || !std::isfinite(std::abs(t.a)))
                     throw ArgumentError("two-point: a must be a nonzero finite value");
                 },
                 [](const auto&) {},
             },
             kind_);
}

std::string_view CoefficientModel::name() const noexcept {
  return std::visit(overloaded{
                        [](const RademacherReal&) { return std::string_view("rademacher"); },
                        [](const GaussianReal&) { return std::string_view("gauss-real"); },
                        [](const GaussianComplexIsotropic&) { return std::string_view("gauss-complex"); },
                        [](const UniformUnitCircle&) { return std::string_view("circle"); },
                        [](const TwoPointComplex&) { return std::string_view("two-point"); },
                    },
                    kind_);
}

bool CoefficientModel::is_real() const noexcept {
  return std::visit(overloaded{
                        [](const RademacherReal&) { return true; },
                        [](const GaussianReal&) { return true; },
                        [](const TwoPointComplex& t) { return t.a.imag() == 0.0; },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

Coefficient CoefficientModel::draw(const CounterStream& stream, std::uint64_t index) const noexcept {
  return std::visit(
      overloaded{
          [&](const RademacherReal&) {
            const auto b = stream.block(index);
            return Coefficient{(b[0] & 0x80000000u) ? 1.0 : -1.0, 0.0};
          },
          [&](const GaussianReal& g) {
            return Coefficient{g.sigma * stream.normal_pair(index).first, 0.0};
          },
          [&](const GaussianComplexIsotropic&) {
            const auto [x, y] = stream.normal_pair(index);
            return Coefficient{x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
          },
          [&](const UniformUnitCircle&) {
            const double angle = 2.0 * std::numbers::pi * stream.uniform_pair(index).first;
            return Coefficient{std::cos(angle), std::sin(angle)};
          },
          [&](const TwoPointComplex& t) {
            const double u = stream.uniform_pair(index).first;
            const std::complex<double> v = u < t.p ? t.a : -t.p * t.a / (1.0 - t.p);
            return Coefficient{v.real(), v.imag()};
          },
      },
      kind_);
}

CovarianceSpec implied_covariance(const CoefficientModel& model) {
  return std::visit(overloaded{
                        [](const RademacherReal&) { return CovarianceSpec{1.0, 0.0, 0.0}; },
                        [](const GaussianReal& g) { return CovarianceSpec{g.sigma * g.sigma, 0.0, 0.0}; },
                        [](const GaussianComplexIsotropic&) { return CovarianceSpec{0.5, 0.5, 0.0}; },
                        [](const UniformUnitCircle&) { return CovarianceSpec{0.5, 0.5, 0.0}; },
                        [](const TwoPointComplex& t) {
                          const std::complex<double> b = -t.p * t.a / (1.0 - t.p);
                          const double q = 1.0 - t.p;
                          CovarianceSpec c;
                          c.sigma1_sq = t.p * t.a.real() * t.a.real() + q * b.real() * b.real();
                          c.sigma2_sq = t.p * t.a.imag() * t.a.imag() + q * b.imag() * b.imag();
                          c.rho = t.p * t.a.real() * t.a.imag() + q * b.real() * b.imag();
                          return c;
                        },
                    },
                    model.kind());
}

std::vector<Coefficient> CoefficientStream::sample_pairs(std::size_t count) const {
  return sample_pairs_from(2, count);
}

std::vector<Coefficient> CoefficientStream::sample_pairs_from(std::uint64_t first_n, std::size_t count) const {
  if (count == 0) throw EmptyRequestError("sample_pairs: count must be at least 1");
  std::vector<Coefficient> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(first_n + i);
  return out;
}

}  // namespace rds
