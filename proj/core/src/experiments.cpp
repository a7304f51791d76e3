#include "rds/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "rds/errors.hpp"
#include "rds/gaf.hpp"
#include "rds/kernels.hpp"
#include "rds/parallel.hpp"
#include "rds/series.hpp"
#include "rds/special.hpp"
#include "rds/summation.hpp"

namespace rds {

using cplx = std::complex<double>;

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ArgumentError(msg);
}

double count_mean(const std::vector<int>& c) {
  std::vector<double> x(c.begin(), c.end());
  return mean(x);
}

double count_variance(const std::vector<int>& c) {
  std::vector<double> x(c.begin(), c.end());
  return sample_variance(x);
}

}  // namespace

CltResult clt_normality_check(const CltOptions& opts) {
  require(opts.model.is_real(), "clt: the coefficient model must be real");
  require(opts.s > 0.0 && opts.s < 0.1, "clt: need 0 < s < 0.1");
  require(opts.replicates >= 500, "clt: need at least 500 replicates");
  require(opts.alpha > -0.5, "clt: alpha must exceed -1/2");
  require(opts.head_terms >= 2, "clt: head_terms must be at least 2");

  const double sigma1_sq = implied_covariance(opts.model).sigma1_sq;
  const double a = 1.0 + 2.0 * opts.alpha;
  const double gamma = boost::math::tgamma(a);
  const double base = opts.broken_normalizer ? std::pow(opts.s, a) : std::pow(2.0 * opts.s, a);
  const double normalizer = std::sqrt(base / gamma / sigma1_sq);

  const std::size_t h = opts.head_terms;
  const auto logs = log_table(h);
  std::vector<double> w(h - 1);
  for (std::size_t k = 2; k <= h; ++k) {
    const double lk = (*logs)[k];
    w[k - 2] = (opts.alpha == 0.0 ? 1.0 : std::pow(lk, opts.alpha)) * std::exp(-(0.5 + opts.s) * lk);
  }
  const double tail_var = sigma1_sq * log_zeta_tail(2.0 * opts.alpha, cplx(2.0 * opts.s, 0.0), h).real();
  const double tail_sd = std::sqrt(std::max(0.0, tail_var));

  CltResult out;
  out.values.resize(opts.replicates);
  parallel_for(opts.replicates, opts.threads, [&](std::size_t r) {
    const auto rep = static_cast<std::uint32_t>(r);
    if (opts.exact_normal_replicates) {
      out.values[r] = CounterStream(opts.seed, rep, Substream::kAuxiliary).normal(0);
      return;
    }
    const CoefficientStream stream(opts.model, opts.seed, rep);
    CompensatedSum head;
    for (std::size_t k = 2; k <= h; ++k) head += w[k - 2] * stream.at(k).eta;
    const double tail = tail_sd * CounterStream(opts.seed, rep, Substream::kTail).normal(0);
    out.values[r] = normalizer * (head.value() + tail);
  });

  const double d = ks_statistic(out.values, standard_normal_cdf);
  out.report.name = opts.broken_normalizer ? "clt-broken-normalizer" : "clt";
  out.report.statistic = d;
  out.report.p_value = ks_pvalue(d, opts.replicates);
  out.report.n_replicates = opts.replicates;
  out.report.seed = opts.seed;
  out.report.verdict = *out.report.p_value > 0.001 ? Verdict::kPass : Verdict::kFail;
  out.report.extra["alpha"] = opts.alpha;
  out.report.extra["s"] = opts.s;
  out.report.extra["head_terms"] = static_cast<double>(h);
  const double total_var = sigma1_sq * log_zeta_tail(2.0 * opts.alpha, cplx(2.0 * opts.s, 0.0), 1).real();
  out.report.extra["tail_variance_share"] = tail_var / total_var;
  return out;
}

CovarianceResult covariance_convergence(const CovarianceOptions& opts) {
  require(opts.alpha > -0.5, "covariance: alpha must exceed -1/2");
  require(!opts.points.empty() && !opts.s_values.empty(), "covariance: need points and s values");
  require(opts.replicates >= 30, "covariance: need at least 30 replicates");
  for (const auto& z : opts.points) require(z.real() > 0.0, "covariance: points must lie in the right half-plane");
  for (double s : opts.s_values) require(s > 0.0, "covariance: s must be positive");

  const CovarianceSpec cov = implied_covariance(opts.model);
  const KernelParams kp{opts.alpha, cov};
  const std::size_t m = opts.points.size();
  const std::size_t levels = opts.s_values.size();
  const std::size_t h = opts.head_terms;

  std::vector<std::vector<std::vector<cplx>>> weights(levels);
  std::vector<GaussianVectorSampler> tails;
  for (std::size_t l = 0; l < levels; ++l) {
    const double s = opts.s_values[l];
    for (const auto& z : opts.points) weights[l].push_back(head_weights(opts.alpha, s, z, h));
    Eigen::MatrixXcd th(m, m), tp(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        th(i, j) = cov.trace() * scaled_tail_sum(opts.alpha, s, opts.points[i] + std::conj(opts.points[j]), h);
        tp(i, j) = cov.pseudo_variance() * scaled_tail_sum(opts.alpha, s, opts.points[i] + opts.points[j], h);
      }
    }
    tails.emplace_back(real_covariance(th, tp));
  }

  // values[l][i][r]
  std::vector<std::vector<std::vector<cplx>>> values(
      levels, std::vector<std::vector<cplx>>(m, std::vector<cplx>(opts.replicates)));
  parallel_for(opts.replicates, opts.threads, [&](std::size_t r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const CoefficientStream stream(opts.model, opts.seed, rep);
    std::vector<cplx> xi(h - 1);
    for (std::size_t k = 2; k <= h; ++k) xi[k - 2] = stream.at(k).value();
    const CounterStream noise(opts.seed, rep, Substream::kTail);
    for (std::size_t l = 0; l < levels; ++l) {
      const auto tail = tails[l].sample_complex(noise);
      for (std::size_t i = 0; i < m; ++i) {
        cplx acc{};
        const auto& w = weights[l][i];
        for (std::size_t k = 0; k < xi.size(); ++k) acc += w[k] * xi[k];
        values[l][i][r] = acc + tail[i];
      }
    }
  });

  CovarianceResult out;
  auto within = [&](cplx diff, cplx se) {
    return std::abs(diff.real()) <= opts.se_band * se.real() + 1e-12 &&
           std::abs(diff.imag()) <= opts.se_band * se.imag() + 1e-12;
  };
  for (std::size_t l = 0; l < levels; ++l) {
    CovarianceLevel lv;
    lv.s = opts.s_values[l];
    lv.within_band_of_exact = true;
    lv.within_band_of_kernel = true;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const auto e = empirical_complex_covariance(values[l][i], values[l][j]);
        const cplx zi = opts.points[i], zj = opts.points[j];
        const cplx eh = cov.trace() * scaled_full_sum(opts.alpha, lv.s, zi + std::conj(zj));
        const cplx ep = cov.pseudo_variance() * scaled_full_sum(opts.alpha, lv.s, zi + zj);
        const cplx kh = kernel_hermitian(kp, zi, zj);
        const cplx kpv = kernel_pseudo(kp, zi, zj);
        lv.empirical_hermitian.push_back(e.hermitian);
        lv.empirical_pseudo.push_back(e.pseudo);
        lv.se_hermitian.push_back(e.se_hermitian);
        lv.se_pseudo.push_back(e.se_pseudo);
        lv.exact_hermitian.push_back(eh);
        lv.exact_pseudo.push_back(ep);
        lv.kernel_hermitian.push_back(kh);
        lv.kernel_pseudo.push_back(kpv);
        lv.exact_to_kernel = std::max({lv.exact_to_kernel, std::abs(eh - kh), std::abs(ep - kpv)});
        lv.empirical_to_kernel =
            std::max({lv.empirical_to_kernel, std::abs(e.hermitian - kh), std::abs(e.pseudo - kpv)});
        lv.within_band_of_exact =
            lv.within_band_of_exact && within(e.hermitian - eh, e.se_hermitian) && within(e.pseudo - ep, e.se_pseudo);
        lv.within_band_of_kernel = lv.within_band_of_kernel && within(e.hermitian - kh, e.se_hermitian) &&
                                   within(e.pseudo - kpv, e.se_pseudo);
      }
    }
    out.levels.push_back(std::move(lv));
  }
  out.monotone = true;
  for (std::size_t l = 1; l < levels; ++l)
    out.monotone = out.monotone && out.levels[l].exact_to_kernel < out.levels[l - 1].exact_to_kernel;

  bool all_exact = true;
  for (const auto& lv : out.levels) all_exact = all_exact && lv.within_band_of_exact;
  const bool final_kernel = out.levels.back().within_band_of_kernel;
  out.report.name = "covariance";
  out.report.statistic = out.levels.back().empirical_to_kernel;
  out.report.n_replicates = opts.replicates;
  out.report.seed = opts.seed;
  out.report.verdict = (out.monotone && all_exact && final_kernel) ? Verdict::kPass : Verdict::kFail;
  out.report.extra["alpha"] = opts.alpha;
  out.report.extra["monotone"] = out.monotone ? 1.0 : 0.0;
  out.report.extra["within_band_of_exact_all_s"] = all_exact ? 1.0 : 0.0;
  out.report.extra["within_band_of_kernel_smallest_s"] = final_kernel ? 1.0 : 0.0;
  return out;
}

Region covering_rectangle(double r, double margin) {
  const auto [c, rad] = disk_image(r);
  require(margin > 0.0, "zero count: margin must be positive");
  const double lo_re = c - rad - margin;
  require(lo_re > 0.0, "zero count: margin pushes the rectangle out of the half-plane");
  return Region::rectangle({lo_re, -rad - margin}, {c + rad + margin, rad + margin}, Domain::kHalfPlane);
}

int zero_count_one(const CoefficientStream& stream, double s, double r, const ZeroCountOptions& opts) {
  LocateOptions lo;
  lo.isolate_diameter = opts.isolate_diameter;
  for (int attempt = 0; attempt <= lo.retry_budget; ++attempt) {
    const double margin = opts.margin * (1.0 + 0.0137 * attempt);
    const Region region = covering_rectangle(r, margin);
    HybridOptions ho;
    ho.head_terms = opts.head_terms;
    ho.x_min = region.lo.real();
    ho.x_max = region.hi.real();
    const ScaledSeriesPath path(stream, 0.0, s, ho);
    try {
      const PointMeasure pm = locate_zeros([&](cplx z) { return path(z); }, region, opts.tol, lo);
      return count_in_mapped_disk(pm, r);
    } catch (const BoundaryZeroError&) {
    } catch (const NonConvergenceError&) {
    }
  }
  throw UnresolvableBoundaryError("zero count: no admissible search rectangle after retries");
}

ZeroCountResult zero_count_experiment(const ZeroCountOptions& opts) {
  const CovarianceSpec cov = implied_covariance(opts.model);
  require(cov.is_isotropic(1e-12), "zero count: the model must be isotropic (sigma1^2 = sigma2^2, rho = 0)");
  require(opts.s > 0.0, "zero count: s must be positive");
  require(opts.replicates >= 1, "zero count: need replicates");

  ZeroCountResult out;
  out.law = zero_count_pmf(opts.r);
  out.counts.resize(opts.replicates);
  parallel_for(opts.replicates, opts.threads, [&](std::size_t i) {
    const CoefficientStream stream(opts.model, opts.seed, static_cast<std::uint32_t>(i));
    out.counts[i] = zero_count_one(stream, opts.s, opts.r, opts);
  });
  const auto hist = histogram(out.counts);
  out.empirical_pmf = normalize(hist);
  out.chi_square = chi_square_gof(hist, out.law.pmf);
  const double tv = tv_distance(out.empirical_pmf, out.law.pmf);

  out.report.name = std::string("zero-count-") + std::string(opts.model.name());
  out.report.statistic = out.chi_square.statistic;
  out.report.p_value = out.chi_square.p_value;
  out.report.tv_distance = tv;
  out.report.n_replicates = opts.replicates;
  out.report.seed = opts.seed;
  out.report.verdict = tv < 0.1 ? Verdict::kPass : Verdict::kFail;
  out.report.extra["r"] = opts.r;
  out.report.extra["s"] = opts.s;
  out.report.extra["mean_count"] = count_mean(out.counts);
  out.report.extra["law_mean"] = out.law.mean();
  return out;
}

StatReport universality_report(const ZeroCountResult& a, const ZeroCountResult& b) {
  StatReport rep;
  rep.name = "zero-count-universality";
  const double tv = tv_distance(a.empirical_pmf, b.empirical_pmf);
  rep.statistic = tv;
  rep.tv_distance = tv;
  const auto ha = histogram(a.counts);
  const auto hb = histogram(b.counts);
  rep.p_value = chi_square_two_sample(ha, hb).p_value;
  rep.n_replicates = std::min(a.counts.size(), b.counts.size());
  rep.seed = a.report.seed;
  rep.verdict = tv < 0.1 ? Verdict::kPass : Verdict::kFail;
  return rep;
}

RealZeroResult real_zero_process_comparison(const RealZeroOptions& opts) {
  require(opts.model.is_real(), "real zeros: the coefficient model must be real");
  require(opts.a > 0.0 && opts.b > opts.a, "real zeros: window must be a compact interval in (0, inf)");
  require(opts.s > 0.0, "real zeros: s must be positive");
  require(opts.replicates >= 2, "real zeros: need at least two replicates");

  const double ga = mobius_inv(cplx(opts.a, 0.0)).real();
  const double gb = mobius_inv(cplx(opts.b, 0.0)).real();
  const double rmax = std::max(std::abs(ga), std::abs(gb));
  const std::size_t n_terms = std::max<std::size_t>(200, power_series_terms(0.0, rmax, 1e-13));

  RealZeroResult out;
  out.series_counts.resize(opts.replicates);
  out.gaf_counts.resize(opts.replicates);
  parallel_for(opts.replicates, opts.threads, [&](std::size_t i) {
    const auto rep = static_cast<std::uint32_t>(i);
    const CoefficientStream stream(opts.model, opts.seed, rep);
    HybridOptions ho;
    ho.head_terms = opts.head_terms;
    ho.x_min = opts.a;
    ho.x_max = opts.b;
    const ScaledSeriesPath path(stream, 0.0, opts.s, ho);
    out.series_counts[i] =
        real_zeros([&](double x) { return path(cplx(x, 0.0)).real(); }, opts.a, opts.b, 0.0, opts.tol).total();
    const auto f = sample_power_series_gaf(0.0, false, CounterStream(opts.seed, rep, Substream::kPowerSeries), n_terms);
    out.gaf_counts[i] = real_zeros([&](double x) { return f.real_value(x); }, ga, gb, 0.0, opts.tol).total();
  });

  const auto hs = histogram(out.series_counts);
  const auto hg = histogram(out.gaf_counts);
  out.tv = tv_distance(normalize(hs), normalize(hg));
  out.chi_square = chi_square_two_sample(hs, hg);
  out.mean_series = count_mean(out.series_counts);
  out.mean_gaf = count_mean(out.gaf_counts);
  const double m = static_cast<double>(opts.replicates);
  out.se_difference = std::sqrt(count_variance(out.series_counts) / m + count_variance(out.gaf_counts) / m);
  const bool means_ok = std::abs(out.mean_series - out.mean_gaf) <= 3.0 * out.se_difference;

  out.report.name = "real-zeros";
  out.report.statistic = out.chi_square.statistic;
  out.report.p_value = out.chi_square.p_value;
  out.report.tv_distance = out.tv;
  out.report.standard_error = out.se_difference;
  out.report.n_replicates = opts.replicates;
  out.report.seed = opts.seed;
  out.report.verdict = (out.tv < 0.15 && means_ok) ? Verdict::kPass : Verdict::kFail;
  out.report.extra["mean_series"] = out.mean_series;
  out.report.extra["mean_gaf"] = out.mean_gaf;
  out.report.extra["window_a"] = opts.a;
  out.report.extra["window_b"] = opts.b;
  return out;
}

double LilParams::c_alpha() const { return boost::math::tgamma(1.0 + 2.0 * alpha) / std::pow(2.0, 2.0 * alpha); }

double LilParams::f_alpha(double s) const {
  return std::sqrt(std::pow(s, 1.0 + 2.0 * alpha) / (c_alpha() * std::log(std::log(1.0 / s))));
}

void LilParams::validate() const {
  require(alpha > -0.5, "lil: alpha must exceed -1/2");
  require(sigma1_sq > 0.0, "lil: sigma1^2 must be positive");
  require(!s_grid.empty(), "lil: empty s grid");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    if (!(s >= 1e-6 * (1 - 1e-12) && s <= 1e-2 * (1 + 1e-12)))
      throw ArgumentError("lil: grid points must lie in [1e-6, 1e-2]");
    if (i > 0 && !(s < s_grid[i - 1])) throw ArgumentError("lil: s grid must be decreasing");
  }
}

std::vector<double> geometric_grid(double s_max, double s_min, std::size_t points) {
  require(points >= 2 && s_max > s_min && s_min > 0.0, "geometric_grid: need s_max > s_min > 0 and 2+ points");
  std::vector<double> g(points);
  const double step = std::log(s_min / s_max) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = s_max * std::exp(step * static_cast<double>(i));
  g.front() = s_max;
  g.back() = s_min;
  return g;
}

LilTail lil_tail_cells(std::size_t head_terms, double t_end, double ratio) {
  require(ratio > 0.0, "lil: cell ratio must be positive");
  LilTail t;
  double a = std::log(static_cast<double>(head_terms) + 0.5);
  while (a < t_end) {
    const double b = a * (1.0 + ratio);
    t.t_mid.push_back(0.5 * (a + b));
    t.sqrt_dt.push_back(std::sqrt(b - a));
    a = b;
  }
  return t;
}

std::vector<double> lil_path_values(std::span<const double> head_eta, std::span<const double> tail_normals,
                                    const LilTail& tail, const LilParams& params) {
  params.validate();
  require(tail_normals.size() >= tail.t_mid.size(), "lil: one normal per tail cell is required");
  const std::size_t n_head = head_eta.size();
  const auto logs = log_table(n_head + 1);
  std::vector<double> a(n_head), lk(n_head);
  for (std::size_t i = 0; i < n_head; ++i) {
    lk[i] = (*logs)[i + 2];
    a[i] = (params.alpha == 0.0 ? 1.0 : std::pow(lk[i], params.alpha)) * std::exp(-0.5 * lk[i]) * head_eta[i];
  }
  std::vector<double> b(tail.t_mid.size());
  const double sigma1 = std::sqrt(params.sigma1_sq);
  for (std::size_t i = 0; i < b.size(); ++i)
    b[i] = sigma1 * std::pow(tail.t_mid[i], params.alpha) * tail.sqrt_dt[i] * tail_normals[i];

  std::vector<double> out(params.s_grid.size());
  for (std::size_t j = 0; j < params.s_grid.size(); ++j) {
    const double s = params.s_grid[j];
    CompensatedSum acc;
    for (std::size_t i = 0; i < n_head; ++i) acc += a[i] * std::exp(-s * lk[i]);
    for (std::size_t i = 0; i < b.size(); ++i) acc += b[i] * std::exp(-s * tail.t_mid[i]);
    out[j] = params.f_alpha(s) * acc.value() / sigma1;
  }
  return out;
}

LilResult lil_band_check(const LilOptions& opts) {
  require(opts.model.is_real(), "lil: the coefficient model must be real");
  LilParams params = opts.params;
  params.sigma1_sq = implied_covariance(opts.model).sigma1_sq;
  params.validate();

  const CoefficientStream stream(opts.model, opts.seed, 0);
  std::vector<double> eta(opts.head_terms - 1);
  for (std::size_t k = 2; k <= opts.head_terms; ++k) eta[k - 2] = stream.at(k).eta;
  const double s_min = *std::min_element(params.s_grid.begin(), params.s_grid.end());
  const LilTail tail = lil_tail_cells(opts.head_terms, 40.0 / s_min, opts.cell_ratio);
  const CounterStream noise(opts.seed, 0, Substream::kTail);
  std::vector<double> normals(tail.t_mid.size());
  for (std::size_t i = 0; i < normals.size(); ++i) normals[i] = noise.normal(i);

  LilResult out;
  out.s_grid = params.s_grid;
  out.r_values = lil_path_values(eta, normals, tail, params);
  out.max_r = *std::max_element(out.r_values.begin(), out.r_values.end());
  out.min_r = *std::min_element(out.r_values.begin(), out.r_values.end());
  std::size_t inside = 0;
  for (double r : out.r_values) inside += std::abs(r) <= opts.band ? 1 : 0;
  out.fraction_inside = static_cast<double>(inside) / static_cast<double>(out.r_values.size());

  out.report.name = "lil-band";
  out.report.statistic = out.max_r;
  out.report.n_replicates = 1;
  out.report.seed = opts.seed;
  out.report.verdict = Verdict::kSmoke;
  out.report.extra["max_r"] = out.max_r;
  out.report.extra["min_r"] = out.min_r;
  out.report.extra["fraction_inside_band"] = out.fraction_inside;
  out.report.extra["alpha"] = params.alpha;
  return out;
}

std::vector<ZetaRow> zeta_limit_check(double beta, std::span<const cplx> z_list, std::uint64_t terms) {
  require(beta > -1.0, "zeta check: beta must exceed -1");
  std::vector<ZetaRow> rows;
  const double target = boost::math::tgamma(1.0 + beta);
  for (const auto& z : z_list) {
    if (!(z.real() > 0.0) || !(std::abs(z) <= 1.0))
      throw DomainError("zeta check: need Re z > 0 and |z| <= 1");
    ZetaRow row;
    row.z = z;
    row.value = std::pow(z, 1.0 + beta) * log_zeta_sum(beta, z, terms);
    row.error = std::abs(row.value - target);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> sigma_c_estimates(const CoefficientModel& model, double alpha, std::size_t n_max,
                                      std::uint64_t seed, std::size_t replicates, unsigned threads) {
  std::vector<double> out(replicates);
  parallel_for(replicates, threads, [&](std::size_t i) {
    const CoefficientStream stream(model, seed, static_cast<std::uint32_t>(i));
    const auto coeffs = stream.sample_pairs(n_max - 1);
    out[i] = estimate_sigma_c(coeffs, alpha, n_max);
  });
  return out;
}

}  // namespace rds
