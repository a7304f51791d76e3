#include "rds/gaf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Cholesky>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rds/errors.hpp"
#include "rds/io.hpp"

namespace rds {

using cplx = std::complex<double>;

bool in_domain(Domain d, cplx z) noexcept {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  switch (d) {
    case Domain::kPlane:
      return true;
    case Domain::kHalfPlane:
      return z.real() > 0.0;
    case Domain::kUnitDisk:
      return std::abs(z) < 1.0;
  }
  return false;
}

void GridSample::validate() const {
  if (points.size() != values.size()) throw ArgumentError("grid sample: points and values differ in length");
  for (const auto& z : points)
    if (!in_domain(domain, z)) throw DomainError("grid sample: point outside its domain");
}

void GridSample::write_csv(std::ostream& out) const {
  validate();
  CsvWriter csv(out);
  csv.header({"re_z", "im_z", "re_val", "im_val"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv.cell(points[i].real()).cell(points[i].imag()).cell(values[i].real()).cell(values[i].imag()).end_row();
  }
  csv.finish();
}

BrownianGrid BrownianGrid::sample(std::vector<double> times, const CounterStream& stream) {
  BrownianGrid g;
  g.increments.resize(times.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > prev)) throw ArgumentError("brownian grid: times must increase from 0");
    const double sd = std::sqrt(times[i] - prev);
    const auto [a, b] = stream.normal_pair(i);
    g.increments[i] = {sd * a, sd * b};
    prev = times[i];
  }
  g.times = std::move(times);
  return g;
}

GaussianVectorSampler::GaussianVectorSampler(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) throw ArgumentError("gaussian sampler: need a square covariance");
  const double mean_diag = cov.diagonal().mean();
  constexpr double kJitter[] = {0.0, 1e-12, 1e-11, 1e-10};
  for (const double j : kJitter) {
    Eigen::MatrixXd a = cov;
    a.diagonal().array() += j * mean_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().allFinite()) {
      factor_ = llt.matrixL();
      jitter_ = j;
      return;
    }
  }
  throw DegenerateGridError("gaussian sampler: Cholesky failed after jitter 1e-10 (near-duplicate points?)");
}

Eigen::VectorXd GaussianVectorSampler::sample(const CounterStream& stream) const {
  const Eigen::Index n = factor_.rows();
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = stream.normal(static_cast<std::uint64_t>(i));
  return factor_.triangularView<Eigen::Lower>() * g;
}

std::vector<cplx> GaussianVectorSampler::sample_complex(const CounterStream& stream) const {
  const Eigen::VectorXd x = sample(stream);
  std::vector<cplx> out(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {x(2 * i), x(2 * i + 1)};
  return out;
}

namespace {

void check_grid(std::span<const cplx> grid) {
  if (grid.empty()) throw EmptyRequestError("sampler: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i].real() > 0.0)) throw DomainError("sampler: grid points must lie in the right half-plane");
    for (std::size_t j = 0; j < i; ++j)
      if (grid[i] == grid[j]) throw DegenerateGridError("sampler: duplicated grid point");
  }
}

}  // namespace

GridSample sample_gaf_cholesky(const KernelParams& p, std::span<const cplx> grid, const CounterStream& stream) {
  check_grid(grid);
  const GaussianVectorSampler sampler(joint_real_covariance(p, grid));
  GridSample out;
  out.points.assign(grid.begin(), grid.end());
  out.values = sampler.sample_complex(stream);
  return out;
}

namespace {

constexpr std::size_t kGradedCells = 16;

// int_a^b y^{2 alpha} e^{-2 x y} dy
double cell_variance(double alpha, double x, double a, double b) {
  const double p = 1.0 + 2.0 * alpha;
  if (a == 0.0) {
    return std::pow(2.0 * x, -p) * boost::math::tgamma_lower(p, 2.0 * x * b);
  }
  auto f = [&](double y) { return std::pow(y, 2.0 * alpha) * std::exp(-2.0 * x * y); };
  return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

}  // namespace

IntegralSampler::IntegralSampler(const KernelParams& p, std::span<const cplx> grid, double y_max,
                                 std::size_t cells)
    : params_(p), grid_(grid.begin(), grid.end()) {
  p.validate();
  check_grid(grid);
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& z : grid) min_re = std::min(min_re, z.real());
  if (y_max <= 0.0) y_max = 30.0 / min_re;
  if (y_max * min_re < 30.0 * (1.0 - 1e-12))
    throw DiscretizationError("integral sampler: y_max * min Re(grid) must be at least 30");
  if (cells < 1000) throw DiscretizationError("integral sampler: need at least 1000 cells");

  const std::size_t uniform = cells - kGradedCells - 1;
  const double h = y_max / static_cast<double>(uniform + 1);
  times_.reserve(cells);
  for (std::size_t k = kGradedCells; k >= 1; --k) times_.push_back(std::ldexp(h, -static_cast<int>(k)));
  times_.push_back(h);
  for (std::size_t i = 1; i <= uniform; ++i) times_.push_back(h * static_cast<double>(i + 1));
  times_.back() = y_max;

  weights_.assign(grid_.size(), std::vector<cplx>(times_.size()));
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const double x = grid_[j].real();
    const double y = grid_[j].imag();
    double prev = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      const double dt = times_[i] - prev;
      const double mid = 0.5 * (prev + times_[i]);
      const double v = cell_variance(p.alpha, x, prev, times_[i]);
      weights_[j][i] = std::sqrt(v / dt) * std::polar(1.0, -y * mid);
      prev = times_[i];
    }
  }
}

double IntegralSampler::discrete_variance(std::size_t point) const {
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    total += std::norm(weights_.at(point)[i]) * (times_[i] - prev);
    prev = times_[i];
  }
  return total;
}

GridSample IntegralSampler::sample(const CounterStream& stream) const {
  const BrownianGrid b = BrownianGrid::sample(times_, stream);
  const Eigen::Matrix2d m = covariance_sqrt(params_.cov);
  GridSample out;
  out.points = grid_;
  out.values.resize(grid_.size());
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    cplx i1{};
    cplx i2{};
    const auto& w = weights_[j];
    for (std::size_t i = 0; i < times_.size(); ++i) {
      i1 += w[i] * b.increments[i][0];
      i2 += w[i] * b.increments[i][1];
    }
    const cplx re_part = m(0, 0) * i1 + m(0, 1) * i2;
    const cplx im_part = m(1, 0) * i1 + m(1, 1) * i2;
    out.values[j] = re_part + cplx(0.0, 1.0) * im_part;
  }
  return out;
}

GridSample sample_gaf_integral(const KernelParams& p, std::span<const cplx> grid, const CounterStream& stream,
                               double y_max, std::size_t cells) {
  return IntegralSampler(p, grid, y_max, cells).sample(stream);
}

double hyperbolic_gaf_coeff_sq(double alpha, std::size_t n) {
  double c = 1.0;
  for (std::size_t k = 1; k <= n; ++k) c *= (static_cast<double>(k) + 2.0 * alpha) / static_cast<double>(k);
  return c;
}

cplx PowerSeriesGaf::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double PowerSeriesGaf::real_value(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->real();
  return acc;
}

PowerSeriesGaf sample_power_series_gaf(double alpha, bool complex_coefficients, const CounterStream& stream,
                                       std::size_t n_terms) {
  if (n_terms < 1) throw EmptyRequestError("power series: n_terms must be at least 1");
  if (!(alpha > -0.5)) throw ArgumentError("power series: alpha must exceed -1/2");
  PowerSeriesGaf f{alpha, complex_coefficients, std::vector<cplx>(n_terms)};
  double c2 = 1.0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    if (n > 0) c2 *= (static_cast<double>(n) + 2.0 * alpha) / static_cast<double>(n);
    const double c = std::sqrt(c2);
    if (complex_coefficients) {
      const auto [a, b] = stream.normal_pair(n);
      f.coeffs[n] = c * std::sqrt(0.5) * cplx(a, b);
    } else {
      f.coeffs[n] = c * stream.normal(n);
    }
  }
  return f;
}

double power_series_tail_variance(double alpha, double r, std::size_t n_terms) {
  if (!(r >= 0.0 && r < 1.0)) throw ArgumentError("power series: radius must lie in [0, 1)");
  const double term = hyperbolic_gaf_coeff_sq(alpha, n_terms) * std::pow(r, 2.0 * static_cast<double>(n_terms));
  const double n = static_cast<double>(n_terms);
  const double q = std::max(r * r, (n + 1.0 + 2.0 * alpha) / (n + 1.0) * r * r);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return term / (1.0 - q);
}

std::size_t power_series_terms(double alpha, double r, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("power series: tol must be positive");
  std::size_t n = 1;
  while (power_series_tail_variance(alpha, r, n) >= tol * tol) {
    if (n > (std::size_t{1} << 24)) throw ResourceError("power series: too many terms for this radius");
    n = n < 64 ? n + 1 : n + n / 8;
  }
  return n;
}

cplx mobius(cplx z) {
  if (z == cplx(1.0, 0.0)) throw PoleError("mobius: pole at z = 1");
  return (1.0 + z) / (1.0 - z);
}

cplx mobius_inv(cplx w) {
  if (w == cplx(-1.0, 0.0)) throw PoleError("mobius_inv: pole at w = -1");
  return (w - 1.0) / (w + 1.0);
}

cplx disk_prefactor(double alpha, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("disk_prefactor: z must lie in the unit disk");
  return std::pow(2.0, alpha) / std::sqrt(boost::math::tgamma(1.0 + 2.0 * alpha)) *
         std::pow(1.0 - z, -(1.0 + 2.0 * alpha));
}

GridSample time_change_to_disk(const KernelParams& p, const GridSample& i_values, std::span<const cplx> disk_points) {
  p.validate();
  GridSample out;
  out.domain = Domain::kUnitDisk;
  out.points.assign(disk_points.begin(), disk_points.end());
  out.values.resize(disk_points.size());
  for (std::size_t k = 0; k < disk_points.size(); ++k) {
    const cplx w = mobius(disk_points[k]);
    std::size_t found = i_values.points.size();
    for (std::size_t i = 0; i < i_values.points.size(); ++i) {
      if (std::abs(i_values.points[i] - w) <= 1e-12 * (1.0 + std::abs(w))) {
        found = i;
        break;
      }
    }
    if (found == i_values.points.size())
      throw AlignmentError("time_change_to_disk: image of a disk point is missing from the sample");
    out.values[k] = disk_prefactor(p.alpha, disk_points[k]) * i_values.values[found];
  }
  return out;
}

}  // namespace rds
