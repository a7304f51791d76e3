#include "rds/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>

#include "rds/errors.hpp"
#include "rds/special.hpp"
#include "rds/summation.hpp"

namespace rds {

using cplx = std::complex<double>;

void SeriesSpec::validate() const {
  if (!(alpha > -0.5) || !std::isfinite(alpha))
    throw ArgumentError("series: alpha must be finite and exceed -1/2");
  if (truncation_n < 2) throw ArgumentError("series: truncation level N must be at least 2");
}

void EvalRequest::validate() const {
  if (!(z.real() > 0.0)) throw DomainError("scaled_eval: z must lie in the right half-plane");
  if (!(s > 0.0) || !std::isfinite(s)) throw ArgumentError("scaled_eval: s must be positive");
}

namespace {

std::mutex g_table_mutex;
std::shared_ptr<const std::vector<double>> g_logs;
std::shared_ptr<const std::vector<std::uint32_t>> g_spf;

std::size_t grow(std::size_t have, std::size_t want) {
  return std::max(want, std::min<std::size_t>(2 * have, std::size_t{1} << 28));
}

}  // namespace

std::shared_ptr<const std::vector<double>> log_table(std::size_t n_max) {
  std::lock_guard lock(g_table_mutex);
  if (!g_logs || g_logs->size() <= n_max) {
    const std::size_t size = grow(g_logs ? g_logs->size() : 0, n_max + 1);
    auto table = std::make_shared<std::vector<double>>(size);
    (*table)[0] = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < size; ++n) (*table)[n] = std::log(static_cast<double>(n));
    g_logs = std::move(table);
  }
  return g_logs;
}

std::shared_ptr<const std::vector<std::uint32_t>> smallest_prime_factors(std::size_t n_max) {
  std::lock_guard lock(g_table_mutex);
  if (!g_spf || g_spf->size() <= n_max) {
    const std::size_t size = grow(g_spf ? g_spf->size() : 0, n_max + 1);
    auto spf = std::make_shared<std::vector<std::uint32_t>>(size, 0u);
    for (std::size_t i = 2; i < size; ++i) {
      if ((*spf)[i] != 0) continue;
      (*spf)[i] = static_cast<std::uint32_t>(i);
      for (std::size_t j = i * i; j < size; j += i)
        if ((*spf)[j] == 0) (*spf)[j] = static_cast<std::uint32_t>(i);
    }
    g_spf = std::move(spf);
  }
  return g_spf;
}

void fill_negative_powers(cplx w, std::span<cplx> out) {
  if (out.size() < 3) return;
  const auto spf = smallest_prime_factors(out.size() - 1);
  const auto logs = log_table(out.size() - 1);
  for (std::size_t n = 2; n < out.size(); ++n) {
    const std::uint32_t p = (*spf)[n];
    if (p == n) {
      out[n] = std::exp(-w * (*logs)[n]);
    } else {
      out[n] = out[p] * out[n / p];
    }
  }
}

namespace {

void check_length(std::span<const Coefficient> coeffs, const SeriesSpec& spec) {
  spec.validate();
  if (coeffs.size() + 1 < spec.truncation_n) {
    throw LengthError("series: " + std::to_string(coeffs.size()) + " coefficients supplied, N = " +
                      std::to_string(spec.truncation_n) + " needs " +
                      std::to_string(spec.truncation_n - 1));
  }
}

template <class Acc>
cplx sum_terms(std::span<const Coefficient> coeffs, double alpha, std::size_t n_max, cplx w) {
  const auto logs = log_table(n_max);
  Acc acc;
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double ln = (*logs)[n];
    const double weight = alpha == 0.0 ? 1.0 : std::pow(ln, alpha);
    const Coefficient& c = coeffs[n - 2];
    acc += weight * cplx(c.eta, c.theta) * std::exp(-w * ln);
  }
  return acc.value();
}

struct PlainSum {
  cplx total{};
  PlainSum& operator+=(cplx z) {
    total += z;
    return *this;
  }
  cplx value() const { return total; }
};

}  // namespace

cplx eval_partial(std::span<const Coefficient> coeffs, const SeriesSpec& spec, cplx w) {
  check_length(coeffs, spec);
  return spec.compensated_summation
             ? sum_terms<ComplexCompensatedSum>(coeffs, spec.alpha, spec.truncation_n, w)
             : sum_terms<PlainSum>(coeffs, spec.alpha, spec.truncation_n, w);
}

cplx scaled_eval(std::span<const Coefficient> coeffs, const SeriesSpec& spec, const EvalRequest& req) {
  req.validate();
  const cplx w = 0.5 + req.s * req.z;
  return std::pow(req.s, 0.5 + spec.alpha) * eval_partial(coeffs, spec, w);
}

cplx eval_shifted_alpha_derivative(std::span<const Coefficient> coeffs, const SeriesSpec& spec, cplx w) {
  spec.validate();
  SeriesSpec shifted = spec;
  shifted.alpha = spec.alpha + 1.0;
  return eval_partial(coeffs, shifted, w);
}

double tail_std_bound(const SeriesSpec& spec, double s, double x0, double second_moment) {
  spec.validate();
  if (!(s > 0.0)) throw ArgumentError("tail_std_bound: s must be positive");
  if (!(x0 > 0.0)) throw ArgumentError("tail_std_bound: x0 must be positive");
  if (second_moment < 0.0) throw ArgumentError("tail_std_bound: second moment must be nonnegative");
  // s^{1+2a} int_N^inf (log x)^{2a} x^{-1-2 s x0} dx = (2 x0)^{-(1+2a)} Gamma(1+2a, 2 s x0 log N)
  const double a = 1.0 + 2.0 * spec.alpha;
  const double lower = 2.0 * s * x0 * std::log(static_cast<double>(spec.truncation_n));
  const double variance =
      second_moment * std::pow(2.0 * x0, -a) * upper_incomplete_gamma(a, lower);
  return std::sqrt(std::max(0.0, variance));
}

std::size_t choose_truncation(double alpha, double s, double x0, double eps, double second_moment,
                              std::size_t cap) {
  if (!(eps > 0.0)) throw ArgumentError("choose_truncation: eps must be positive");
  for (std::size_t n = 2; n <= cap; n *= 2) {
    if (tail_std_bound(SeriesSpec::make(alpha, n), s, x0, second_moment) < eps) return n;
    if (n > cap / 2) break;
  }
  throw ResourceError("choose_truncation: tail bound below eps needs more than the configured cap of " +
                      std::to_string(cap) + " terms");
}

double estimate_sigma_c(std::span<const Coefficient> coeffs, double alpha, std::size_t n_max) {
  if (n_max < 100) throw ArgumentError("estimate_sigma_c: n_max must be at least 100");
  if (!(alpha > -0.5)) throw ArgumentError("estimate_sigma_c: alpha must exceed -1/2");
  if (coeffs.size() + 1 < n_max) throw LengthError("estimate_sigma_c: not enough coefficients for n_max");

  std::vector<std::size_t> checkpoints;
  const int j_first = kSigmaCGridSize / 2;
  for (int j = j_first; j <= kSigmaCGridSize; ++j) {
    std::size_t n = (j == kSigmaCGridSize)
                        ? n_max
                        : static_cast<std::size_t>(std::floor(
                              std::pow(static_cast<double>(n_max), static_cast<double>(j) / kSigmaCGridSize)));
    n = std::clamp<std::size_t>(n, 2, n_max);
    if (checkpoints.empty() || checkpoints.back() != n) checkpoints.push_back(n);
  }

  const auto logs = log_table(n_max);
  ComplexCompensatedSum partial;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t next = 0;
  for (std::size_t n = 2; n <= n_max && next < checkpoints.size(); ++n) {
    const double weight = alpha == 0.0 ? 1.0 : std::pow((*logs)[n], alpha);
    partial += weight * coeffs[n - 2].value();
    if (n == checkpoints[next]) {
      const double mod = std::abs(partial.value());
      if (mod > 0.0) best = std::max(best, std::log(mod) / (*logs)[n]);
      ++next;
    }
  }
  if (!std::isfinite(best)) throw UndefinedEstimatorError("estimate_sigma_c: every probed partial sum is zero");
  return best;
}

std::vector<Coefficient> read_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open coefficient file " + path.string());
  std::vector<Coefficient> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Coefficient c;
    if (!(fields >> c.eta)) continue;
    if (!(fields >> c.theta)) {
      throw ArgumentError(path.string() + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    out.push_back(c);
  }
  return out;
}

void write_coefficients(const std::filesystem::path& path, std::span<const Coefficient> coeffs) {
  std::ofstream out(path);
  out.precision(17);
  for (const auto& c : coeffs) out << c.eta << ' ' << c.theta << '\n';
}

}  // namespace rds
