#include "rds/scaled_path.hpp"

#include <cmath>

#include "rds/errors.hpp"
#include "rds/series.hpp"
#include "rds/special.hpp"

namespace rds {

using cplx = std::complex<double>;

void HybridOptions::validate() const {
  if (head_terms < 2) throw ArgumentError("hybrid path: head_terms must be at least 2");
  if (!(x_min > 0.0) || !(x_max >= x_min)) throw ArgumentError("hybrid path: need 0 < x_min <= x_max");
  if (!(tail_extent > 0.0)) throw ArgumentError("hybrid path: tail_extent must be positive");
  if (cell_width < 0.0) throw ArgumentError("hybrid path: cell_width must be nonnegative");
}

std::vector<cplx> head_weights(double alpha, double s, cplx z, std::size_t head_terms) {
  std::vector<cplx> powers(head_terms + 1);
  fill_negative_powers(0.5 + s * z, powers);
  const auto logs = log_table(head_terms);
  const double scale = std::pow(s, 0.5 + alpha);
  std::vector<cplx> out(head_terms - 1);
  for (std::size_t k = 2; k <= head_terms; ++k) {
    const double lk = alpha == 0.0 ? 1.0 : std::pow((*logs)[k], alpha);
    out[k - 2] = scale * lk * powers[k];
  }
  return out;
}

cplx scaled_tail_sum(double alpha, double s, cplx w, std::size_t head_terms) {
  return std::pow(s, 1.0 + 2.0 * alpha) * log_zeta_tail(2.0 * alpha, s * w, head_terms);
}

cplx scaled_full_sum(double alpha, double s, cplx w) { return scaled_tail_sum(alpha, s, w, 1); }

ScaledSeriesPath::ScaledSeriesPath(const CoefficientStream& stream, double alpha, double s,
                                   const HybridOptions& opts)
    : alpha_(alpha), s_(s), head_terms_(opts.head_terms) {
  opts.validate();
  if (!(alpha > -0.5)) throw ArgumentError("hybrid path: alpha must exceed -1/2");
  if (!(s > 0.0)) throw ArgumentError("hybrid path: s must be positive");

  const auto logs = log_table(head_terms_);
  const double scale = std::pow(s, 0.5 + alpha);
  head_amp_.resize(head_terms_ - 1);
  for (std::size_t k = 2; k <= head_terms_; ++k) {
    const double lk = (*logs)[k];
    const double weight = scale * (alpha == 0.0 ? 1.0 : std::pow(lk, alpha)) * std::exp(-0.5 * lk);
    head_amp_[k - 2] = weight * stream.at(k).value();
  }

  u0_ = s * std::log(static_cast<double>(head_terms_) + 0.5);
  width_ = opts.cell_width > 0.0 ? opts.cell_width : std::min(0.01, 0.05 / opts.x_max);
  const double u_end = opts.tail_extent / opts.x_min;
  if (u_end <= u0_) return;
  const auto cells = static_cast<std::size_t>(std::ceil((u_end - u0_) / width_));

  const Eigen::Matrix2d m = covariance_sqrt(implied_covariance(stream.model()));
  const CounterStream noise(stream.master_seed(), stream.replicate_id(), Substream::kTail);
  const double p = 1.0 + 2.0 * alpha;
  tail_amp_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = u0_ + static_cast<double>(i) * width_;
    // int_a^{a+h} u^{2 alpha} du without cancellation
    const double mass = std::pow(a, p) * std::expm1(p * std::log1p(width_ / a)) / p;
    const auto [n1, n2] = noise.normal_pair(i);
    const cplx g(m(0, 0) * n1 + m(0, 1) * n2, m(1, 0) * n1 + m(1, 1) * n2);
    tail_amp_[i] = std::sqrt(mass) * g;
  }
}

cplx ScaledSeriesPath::head(cplx z) const {
  thread_local std::vector<cplx> powers;
  powers.resize(head_terms_ + 1);
  fill_negative_powers(s_ * z, powers);
  cplx acc{};
  for (std::size_t k = 2; k <= head_terms_; ++k) acc += head_amp_[k - 2] * powers[k];
  return acc;
}

cplx ScaledSeriesPath::tail(cplx z) const {
  constexpr std::size_t kAnchor = 256;
  const cplx step = std::exp(-z * width_);
  cplx acc{};
  cplx e{};
  for (std::size_t i = 0; i < tail_amp_.size(); ++i) {
    if (i % kAnchor == 0) {
      e = std::exp(-z * (u0_ + (static_cast<double>(i) + 0.5) * width_));
    } else {
      e *= step;
    }
    acc += tail_amp_[i] * e;
  }
  return acc;
}

cplx ScaledSeriesPath::operator()(cplx z) const { return head(z) + tail(z); }

}  // namespace rds
