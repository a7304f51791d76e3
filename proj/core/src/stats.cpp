#include "rds/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "rds/errors.hpp"
#include "rds/io.hpp"
#include "rds/summation.hpp"

namespace rds {

using cplx = std::complex<double>;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kSmoke:
      return "smoke";
  }
  return "smoke";
}

std::string StatReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["statistic"] = statistic;
  if (p_value) j["p_value"] = *p_value;
  if (tv_distance) j["tv_distance"] = *tv_distance;
  if (standard_error) j["standard_error"] = *standard_error;
  j["n_replicates"] = n_replicates;
  j["seed"] = seed;
  j["verdict"] = to_string(verdict);
  if (!extra.empty()) {
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    for (const auto& [k, v] : extra) e[k] = v;
    j["extra"] = e;
  }
  return j.dump(2);
}

std::vector<std::string> StatReport::csv_header() {
  return {"name", "statistic", "p_value", "tv_distance", "standard_error", "n_replicates", "seed", "verdict"};
}

std::vector<std::string> StatReport::csv_row() const {
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  return {name, format_double(statistic), opt(p_value), opt(tv_distance), opt(standard_error),
          std::to_string(n_replicates), std::to_string(seed), to_string(verdict)};
}

double ComplexCovariance::se() const noexcept {
  return std::max({se_pseudo.real(), se_pseudo.imag(), se_hermitian.real(), se_hermitian.imag()});
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw EmptyRequestError("mean: empty sample");
  return pairwise_mean(xs);
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ArgumentError("sample_variance: need at least two values");
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
  return pairwise_sum(std::span<const double>(sq)) / static_cast<double>(xs.size() - 1);
}

namespace {

double standard_error(const std::vector<double>& v) {
  return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

}  // namespace

ComplexCovariance empirical_complex_covariance(std::span<const cplx> xs, std::span<const cplx> ys) {
  if (xs.size() != ys.size()) throw PairingError("empirical covariance: replicate sets differ in length");
  if (xs.size() < 30) throw ArgumentError("empirical covariance: need at least 30 replicates");
  const std::size_t m = xs.size();
  std::vector<double> pr(m), pi(m), hr(m), hi(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = xs[k].real(), b = xs[k].imag(), c = ys[k].real(), d = ys[k].imag();
    pr[k] = a * c - b * d;
    pi[k] = a * d + b * c;
    hr[k] = a * c + b * d;
    hi[k] = b * c - a * d;
  }
  ComplexCovariance out;
  out.pseudo = {mean(pr), mean(pi)};
  out.hermitian = {mean(hr), mean(hi)};
  out.se_pseudo = {standard_error(pr), standard_error(pi)};
  out.se_hermitian = {standard_error(hr), standard_error(hi)};
  return out;
}

ComplexCovariance empirical_complex_covariance(const ReplicateSet& xs, const ReplicateSet& ys) {
  return empirical_complex_covariance(std::span<const cplx>(xs.values), std::span<const cplx>(ys.values));
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw EmptyRequestError("ks_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) throw EmptyRequestError("ks_pvalue: n must be positive");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda <= 0.0) return 1.0;
  double q;
  if (lambda < 1.18) {
    // Jacobi-transformed series, accurate for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi2 / (8.0 * lambda * lambda));
    }
    q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s;
  } else {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      s += (k % 2 == 1 ? term : -term);
      if (term < 1e-300) break;
    }
    q = 2.0 * s;
  }
  return std::clamp(q, 0.0, 1.0);
}

namespace {

double chi_square_tail(double stat, int dof) {
  if (dof < 1) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const std::size_t> counts, std::span<const double> probs) {
  if (probs.empty()) throw EmptyRequestError("chi_square_gof: empty pmf");
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw EmptyRequestError("chi_square_gof: no observations");
  const std::size_t bins = std::max(counts.size(), probs.size());
  std::vector<double> obs(bins, 0.0), expv(bins, 0.0);
  for (std::size_t j = 0; j < counts.size(); ++j) obs[j] = static_cast<double>(counts[j]);
  double psum = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    expv[j] = static_cast<double>(total) * probs[j];
    psum += probs[j];
  }
  expv[bins - 1] += static_cast<double>(total) * std::max(0.0, 1.0 - psum);

  std::vector<std::pair<double, double>> merged;
  double o = 0.0, e = 0.0;
  for (std::size_t j = 0; j < bins; ++j) {
    o += obs[j];
    e += expv[j];
    if (e >= 5.0) {
      merged.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (merged.empty()) {
      merged.emplace_back(o, e);
    } else {
      merged.back().first += o;
      merged.back().second += e;
    }
  }
  ChiSquareResult r;
  for (const auto& [mo, me] : merged)
    if (me > 0.0) r.statistic += (mo - me) * (mo - me) / me;
  r.bins = merged.size();
  r.dof = static_cast<int>(merged.size()) - 1;
  r.p_value = chi_square_tail(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const std::size_t bins = std::max(a.size(), b.size());
  double na = 0.0, nb = 0.0;
  for (auto x : a) na += static_cast<double>(x);
  for (auto x : b) nb += static_cast<double>(x);
  if (na == 0.0 || nb == 0.0) throw EmptyRequestError("chi_square_two_sample: empty sample");
  const double fa = na / (na + nb);
  const double fb = nb / (na + nb);
  auto at = [](std::span<const std::size_t> v, std::size_t j) { return j < v.size() ? static_cast<double>(v[j]) : 0.0; };

  std::vector<std::pair<double, double>> merged;
  double oa = 0.0, ob = 0.0;
  for (std::size_t j = 0; j < bins; ++j) {
    oa += at(a, j);
    ob += at(b, j);
    const double c = oa + ob;
    if (c * fa >= 5.0 && c * fb >= 5.0) {
      merged.emplace_back(oa, ob);
      oa = ob = 0.0;
    }
  }
  if (oa > 0.0 || ob > 0.0) {
    if (merged.empty()) {
      merged.emplace_back(oa, ob);
    } else {
      merged.back().first += oa;
      merged.back().second += ob;
    }
  }
  ChiSquareResult r;
  for (const auto& [xa, xb] : merged) {
    const double c = xa + xb;
    const double ea = c * fa;
    const double eb = c * fb;
    if (ea > 0.0) r.statistic += (xa - ea) * (xa - ea) / ea;
    if (eb > 0.0) r.statistic += (xb - eb) * (xb - eb) / eb;
  }
  r.bins = merged.size();
  r.dof = static_cast<int>(merged.size()) - 1;
  r.p_value = chi_square_tail(r.statistic, r.dof);
  return r;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j < p.size() ? p[j] : 0.0;
    const double b = j < q.size() ? q[j] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

std::vector<std::size_t> histogram(std::span<const int> values) {
  std::vector<std::size_t> h;
  for (int v : values) {
    if (v < 0) throw ArgumentError("histogram: negative count");
    if (static_cast<std::size_t>(v) >= h.size()) h.resize(static_cast<std::size_t>(v) + 1, 0);
    ++h[static_cast<std::size_t>(v)];
  }
  return h;
}

std::vector<double> normalize(std::span<const std::size_t> counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  std::vector<double> p(counts.size(), 0.0);
  if (total == 0.0) return p;
  for (std::size_t j = 0; j < counts.size(); ++j) p[j] = static_cast<double>(counts[j]) / total;
  return p;
}

double ZeroCountLaw::mean() const {
  CompensatedSum s;
  for (std::size_t j = 0; j < pmf.size(); ++j) s += static_cast<double>(j) * pmf[j];
  return s.value();
}

double ZeroCountLaw::variance() const {
  const double m = mean();
  CompensatedSum s;
  for (std::size_t j = 0; j < pmf.size(); ++j) s += (static_cast<double>(j) - m) * (static_cast<double>(j) - m) * pmf[j];
  return s.value();
}

ZeroCountLaw zero_count_pmf(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ArgumentError("zero_count_pmf: r must lie in (0, 1)");
  ZeroCountLaw law;
  law.r = r;
  law.pmf = {1.0};
  const double r2 = r * r;
  double q = r2;
  int k = 1;
  for (;; ++k, q *= r2) {
    std::vector<double> next(law.pmf.size() + 1, 0.0);
    for (std::size_t j = 0; j < law.pmf.size(); ++j) {
      next[j] += (1.0 - q) * law.pmf[j];
      next[j + 1] += q * law.pmf[j];
    }
    law.pmf = std::move(next);
    if (q < 1e-15) break;
  }
  law.k_max = k;
  return law;
}

}  // namespace rds
