#include "rds/runner.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rds/errors.hpp"
#include "rds/experiments.hpp"
#include "rds/gaf.hpp"
#include "rds/io.hpp"
#include "rds/kernels.hpp"
#include "rds/parallel.hpp"
#include "rds/zeros.hpp"

#ifndef RDS_VERSION
#define RDS_VERSION "unknown"
#endif

namespace rds {

namespace fs = std::filesystem;
using cplx = std::complex<double>;
using ojson = nlohmann::ordered_json;

namespace {

// Hard caps; exceeding one is a resource error (exit 3), not a config error.
constexpr std::uint64_t kMaxReplicates = 10'000'000;
constexpr std::uint64_t kMaxHeadTerms = std::uint64_t{1} << 26;
constexpr std::uint64_t kMaxSeriesTerms = std::uint64_t{1} << 27;
constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 24;

const std::vector<std::string> kCommonKeys = {"experiment", "seed", "output_dir"};
const std::vector<std::string> kModelKeys = {"coefficients.kind", "coefficients.sigma", "coefficients.a_re",
                                             "coefficients.a_im", "coefficients.p"};

std::vector<std::string> keys(std::initializer_list<std::string> extra, bool with_model = true) {
  std::vector<std::string> k = kCommonKeys;
  if (with_model) k.insert(k.end(), kModelKeys.begin(), kModelKeys.end());
  k.insert(k.end(), extra.begin(), extra.end());
  return k;
}

std::uint64_t capped(const Config& cfg, const std::string& key, std::uint64_t fallback, std::uint64_t cap) {
  const std::uint64_t v = cfg.get_uint(key, fallback);
  if (v > cap) throw ResourceError(key + " = " + std::to_string(v) + " exceeds the cap " + std::to_string(cap));
  return v;
}

std::size_t replicates(const Config& cfg, std::uint64_t fallback) {
  return capped(cfg, "replicates", fallback, kMaxReplicates);
}

void positive(const Config& cfg, const std::string& key, double v) {
  if (!(v > 0.0)) {
    const int line = cfg.has(key) ? cfg.entries().at(key).line : 0;
    throw ConfigError(key + " must be positive", line);
  }
}

/// Files produced by one experiment, keyed by name relative to the output dir.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<StatReport> reports;

  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

template <class Fill>
std::string csv(Fill&& fill) {
  std::ostringstream out;
  {
    CsvWriter w(out);
    fill(w);
    w.finish();
  }
  return out.str();
}

std::string report_csv(const std::vector<StatReport>& reports) {
  return csv([&](CsvWriter& w) {
    w.header(StatReport::csv_header());
    for (const auto& r : reports) {
      for (const auto& c : r.csv_row()) w.cell(std::string_view(c));
      w.end_row();
    }
  });
}

std::string counts_csv(const std::vector<int>& counts) {
  return csv([&](CsvWriter& w) {
    w.header({"replicate", "count"});
    for (std::size_t i = 0; i < counts.size(); ++i)
      w.cell(static_cast<std::int64_t>(i)).cell(static_cast<std::int64_t>(counts[i])).end_row();
  });
}

std::string pmf_csv(const std::vector<double>& empirical, const std::vector<double>& law) {
  return csv([&](CsvWriter& w) {
    w.header({"k", "empirical", "law"});
    const std::size_t n = std::max(empirical.size(), law.size());
    for (std::size_t k = 0; k < n; ++k) {
      w.cell(static_cast<std::int64_t>(k))
          .cell(k < empirical.size() ? empirical[k] : 0.0)
          .cell(k < law.size() ? law[k] : 0.0)
          .end_row();
    }
  });
}

// Experiment drivers. Each validates its keys and parameters before sampling.

Artifacts run_clt(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"alpha", "s", "replicates", "head_terms", "negative_control"}));
  CltOptions o;
  o.model = model_from_config(cfg);
  o.alpha = cfg.get_double("alpha");
  o.s = cfg.get_double("s");
  o.replicates = replicates(cfg, 2000);
  o.seed = cfg.get_uint("seed");
  o.head_terms = capped(cfg, "head_terms", o.head_terms, kMaxHeadTerms);
  o.threads = threads;
  const bool control = cfg.get_bool("negative_control", false);

  Artifacts a;
  const auto res = clt_normality_check(o);
  a.add("clt_values.csv", csv([&](CsvWriter& w) {
          w.header({"replicate", "value"});
          for (std::size_t i = 0; i < res.values.size(); ++i)
            w.cell(static_cast<std::int64_t>(i)).cell(res.values[i]).end_row();
        }));
  a.reports.push_back(res.report);
  if (control) {
    o.broken_normalizer = true;
    auto broken = clt_normality_check(o);
    // The control is expected to be rejected.
    broken.report.verdict = *broken.report.p_value < 1e-6 ? Verdict::kPass : Verdict::kFail;
    broken.report.name = "clt-negative-control";
    a.reports.push_back(broken.report);
  }
  return a;
}

Artifacts run_covariance(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"alpha", "s", "replicates", "head_terms", "se_band", "points.re", "points.im"}));
  CovarianceOptions o;
  o.model = model_from_config(cfg);
  o.alpha = cfg.get_double("alpha");
  o.s_values = cfg.get_doubles("s", o.s_values);
  o.replicates = replicates(cfg, o.replicates);
  o.seed = cfg.get_uint("seed");
  o.head_terms = capped(cfg, "head_terms", o.head_terms, kMaxHeadTerms);
  o.se_band = cfg.get_double("se_band", o.se_band);
  if (cfg.has("points.re") || cfg.has("points.im")) {
    const auto re = cfg.get_doubles("points.re");
    const auto im = cfg.get_doubles("points.im");
    if (re.size() != im.size()) throw ConfigError("points.re and points.im differ in length");
    o.points.clear();
    for (std::size_t i = 0; i < re.size(); ++i) o.points.emplace_back(re[i], im[i]);
  }
  o.threads = threads;

  const auto res = covariance_convergence(o);
  Artifacts a;
  a.add("covariance.csv", csv([&](CsvWriter& w) {
          w.header({"s", "i", "j", "kind", "emp_re", "emp_im", "se_re", "se_im", "exact_re", "exact_im", "kernel_re",
                    "kernel_im"});
          for (const auto& lv : res.levels) {
            std::size_t e = 0;
            for (std::size_t i = 0; i < o.points.size(); ++i) {
              for (std::size_t j = i; j < o.points.size(); ++j, ++e) {
                auto row = [&](std::string_view kind, cplx emp, cplx se, cplx ex, cplx k) {
                  w.cell(lv.s).cell(static_cast<std::int64_t>(i)).cell(static_cast<std::int64_t>(j)).cell(kind);
                  w.cell(emp.real()).cell(emp.imag()).cell(se.real()).cell(se.imag());
                  w.cell(ex.real()).cell(ex.imag()).cell(k.real()).cell(k.imag()).end_row();
                };
                row("hermitian", lv.empirical_hermitian[e], lv.se_hermitian[e], lv.exact_hermitian[e],
                    lv.kernel_hermitian[e]);
                row("pseudo", lv.empirical_pseudo[e], lv.se_pseudo[e], lv.exact_pseudo[e], lv.kernel_pseudo[e]);
              }
            }
          }
        }));
  a.add("covariance_distance.csv", csv([&](CsvWriter& w) {
          w.header({"s", "exact_to_kernel", "empirical_to_kernel", "within_band_of_exact", "within_band_of_kernel"});
          for (const auto& lv : res.levels) {
            w.cell(lv.s).cell(lv.exact_to_kernel).cell(lv.empirical_to_kernel);
            w.cell(static_cast<std::int64_t>(lv.within_band_of_exact));
            w.cell(static_cast<std::int64_t>(lv.within_band_of_kernel)).end_row();
          }
        }));
  a.reports.push_back(res.report);
  return a;
}

void require_alpha_zero(const Config& cfg) {
  if (cfg.has("alpha") && cfg.get_double("alpha") != 0.0)
    throw ConfigError("this experiment is defined for alpha = 0 only", cfg.entries().at("alpha").line);
}

Artifacts run_zeros_complex(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"alpha", "s", "r", "replicates", "head_terms", "tol", "isolate_diameter", "margin",
                       "compare_model"}));
  require_alpha_zero(cfg);
  ZeroCountOptions o;
  o.model = model_from_config(cfg);
  o.s = cfg.get_double("s");
  o.r = cfg.get_double("r");
  o.replicates = replicates(cfg, o.replicates);
  o.seed = cfg.get_uint("seed");
  o.head_terms = capped(cfg, "head_terms", o.head_terms, kMaxHeadTerms);
  o.tol = cfg.get_double("tol", o.tol);
  o.isolate_diameter = cfg.get_double("isolate_diameter", o.isolate_diameter);
  o.margin = cfg.get_double("margin", o.margin);
  o.threads = threads;
  positive(cfg, "s", o.s);
  if (!(o.r > 0.0 && o.r < 1.0)) throw ConfigError("r must lie in (0, 1)", cfg.entries().at("r").line);

  std::optional<ZeroCountOptions> other;
  if (cfg.has("compare_model")) {
    Config c2;
    c2.set("coefficients.kind", cfg.get_string("compare_model"));
    other = o;
    other->model = model_from_config(c2);
  }

  Artifacts a;
  const auto res = zero_count_experiment(o);
  a.add("zero_counts.csv", counts_csv(res.counts));
  a.add("zero_count_pmf.csv", pmf_csv(res.empirical_pmf, res.law.pmf));
  a.reports.push_back(res.report);
  if (other) {
    const auto res2 = zero_count_experiment(*other);
    a.add("zero_counts_compare.csv", counts_csv(res2.counts));
    a.add("zero_count_pmf_compare.csv", pmf_csv(res2.empirical_pmf, res2.law.pmf));
    a.reports.push_back(res2.report);
    a.reports.push_back(universality_report(res, res2));
  }
  return a;
}

Artifacts run_zeros_real(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"alpha", "s", "window.a", "window.b", "replicates", "head_terms", "tol"}));
  require_alpha_zero(cfg);
  RealZeroOptions o;
  o.model = model_from_config(cfg);
  o.s = cfg.get_double("s");
  o.a = cfg.get_double("window.a", o.a);
  o.b = cfg.get_double("window.b", o.b);
  o.replicates = replicates(cfg, o.replicates);
  o.seed = cfg.get_uint("seed");
  o.head_terms = capped(cfg, "head_terms", o.head_terms, kMaxHeadTerms);
  o.tol = cfg.get_double("tol", o.tol);
  o.threads = threads;

  const auto res = real_zero_process_comparison(o);
  Artifacts a;
  a.add("real_zero_counts.csv", csv([&](CsvWriter& w) {
          w.header({"replicate", "series", "gaf"});
          for (std::size_t i = 0; i < res.series_counts.size(); ++i) {
            w.cell(static_cast<std::int64_t>(i)).cell(static_cast<std::int64_t>(res.series_counts[i]));
            w.cell(static_cast<std::int64_t>(res.gaf_counts[i])).end_row();
          }
        }));
  a.reports.push_back(res.report);
  return a;
}

Artifacts run_nr_dist(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"r", "replicates"}, false));
  const double r = cfg.get_double("r");
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("r must lie in (0, 1)", cfg.entries().at("r").line);
  const std::size_t m = replicates(cfg, 0);
  const std::uint64_t seed = m > 0 ? cfg.get_uint("seed") : cfg.get_uint("seed", 0);

  const auto law = zero_count_pmf(r);
  // Closed forms: sum_k q_k and sum_k q_k (1 - q_k) with q_k = r^{2k}.
  const double r2 = r * r;
  const double mean_exact = r2 / (1.0 - r2);
  const double var_exact = mean_exact - r2 * r2 / (1.0 - r2 * r2);
  double total = 0.0;
  for (double p : law.pmf) total += p;

  StatReport id;
  id.name = "nr-law-identities";
  id.statistic = std::max({std::abs(total - 1.0), std::abs(law.mean() - mean_exact), std::abs(law.variance() - var_exact)});
  id.seed = seed;
  id.verdict = id.statistic < 1e-12 ? Verdict::kPass : Verdict::kFail;
  id.extra["r"] = r;
  id.extra["k_max"] = law.k_max;
  id.extra["p0"] = law.pmf[0];

  Artifacts a;
  a.reports.push_back(id);
  std::vector<double> empirical;
  if (m > 0) {
    // Zeros of the hyperbolic series (alpha = 0) in |z| < r, by winding number.
    std::vector<int> counts(m);
    const std::size_t n_terms = std::max<std::size_t>(200, power_series_terms(0.0, std::min(0.99, r + 0.05), 1e-14));
    parallel_for(m, threads, [&](std::size_t i) {
      const auto f =
          sample_power_series_gaf(0.0, true, CounterStream(seed, static_cast<std::uint32_t>(i), Substream::kPowerSeries), n_terms);
      counts[i] = winding_count([&](cplx z) { return f(z); }, Region::disk(0.0, r, Domain::kUnitDisk));
    });
    const auto hist = histogram(counts);
    empirical = normalize(hist);
    StatReport sim;
    sim.name = "nr-law-simulation";
    sim.tv_distance = tv_distance(empirical, law.pmf);
    sim.statistic = *sim.tv_distance;
    sim.p_value = chi_square_gof(hist, law.pmf).p_value;
    sim.n_replicates = m;
    sim.seed = seed;
    sim.verdict = *sim.tv_distance < 0.1 ? Verdict::kPass : Verdict::kFail;
    a.reports.push_back(sim);
    a.add("nr_counts.csv", counts_csv(counts));
  }
  a.add("nr_pmf.csv", pmf_csv(empirical, law.pmf));
  return a;
}

Artifacts run_lil(const Config& cfg, unsigned) {
  cfg.check_keys(keys({"alpha", "lil.s_max", "lil.s_min", "lil.points", "head_terms", "cell_ratio", "band"}));
  LilOptions o;
  o.model = model_from_config(cfg);
  o.params.alpha = cfg.get_double("alpha");
  const auto points = cfg.get_uint("lil.points", 40);
  if (points < 2) throw ConfigError("lil.points must be at least 2");
  o.params.s_grid = geometric_grid(cfg.get_double("lil.s_max", 1e-2), cfg.get_double("lil.s_min", 1e-6), points);
  o.seed = cfg.get_uint("seed");
  o.head_terms = capped(cfg, "head_terms", o.head_terms, kMaxHeadTerms);
  o.cell_ratio = cfg.get_double("cell_ratio", o.cell_ratio);
  o.band = cfg.get_double("band", o.band);
  positive(cfg, "cell_ratio", o.cell_ratio);

  const auto res = lil_band_check(o);
  Artifacts a;
  a.add("lil.csv", csv([&](CsvWriter& w) {
          w.header({"s", "r"});
          for (std::size_t i = 0; i < res.s_grid.size(); ++i) w.cell(res.s_grid[i]).cell(res.r_values[i]).end_row();
        }));
  a.reports.push_back(res.report);
  return a;
}

Artifacts run_zeta(const Config& cfg, unsigned) {
  cfg.check_keys(keys({"beta", "s", "arg", "terms"}, false));
  const double beta = cfg.get_double("beta");
  const double s = cfg.get_double("s");
  const double arg = cfg.get_double("arg", std::numbers::pi / 4.0);
  const std::uint64_t terms = capped(cfg, "terms", kZetaTerms, kMaxSeriesTerms);
  positive(cfg, "s", s);
  if (!(beta > -1.0)) throw ConfigError("beta must exceed -1", cfg.entries().at("beta").line);
  if (!(std::abs(arg) < std::numbers::pi / 2)) throw ConfigError("arg must lie in (-pi/2, pi/2)");

  const std::vector<cplx> zs = {std::polar(s, arg), std::polar(s / 10.0, arg)};
  const auto rows = zeta_limit_check(beta, zs, terms);
  Artifacts a;
  a.add("zeta.csv", csv([&](CsvWriter& w) {
          w.header({"re_z", "im_z", "re_value", "im_value", "error"});
          for (const auto& r : rows)
            w.cell(r.z.real()).cell(r.z.imag()).cell(r.value.real()).cell(r.value.imag()).cell(r.error).end_row();
        }));
  StatReport rep;
  rep.name = "zeta-limit";
  rep.statistic = rows[0].error;
  rep.seed = cfg.get_uint("seed", 0);
  rep.verdict = rows[0].error < 0.02 && rows[1].error < rows[0].error ? Verdict::kPass : Verdict::kFail;
  rep.extra["beta"] = beta;
  rep.extra["error_small_z"] = rows[1].error;
  a.reports.push_back(rep);
  return a;
}

Artifacts run_gaf_sample(const Config& cfg, unsigned) {
  cfg.check_keys(keys({"alpha", "method", "grid.re_min", "grid.re_max", "grid.im_min", "grid.im_max", "grid.n_re",
                       "grid.n_im", "y_max", "cells"}));
  KernelParams p{cfg.get_double("alpha"), implied_covariance(model_from_config(cfg))};
  const std::string method = cfg.get_string("method", "cholesky");
  const double re0 = cfg.get_double("grid.re_min", 0.5), re1 = cfg.get_double("grid.re_max", 2.0);
  const double im0 = cfg.get_double("grid.im_min", -1.0), im1 = cfg.get_double("grid.im_max", 1.0);
  const auto nre = cfg.get_uint("grid.n_re", 8), nim = cfg.get_uint("grid.n_im", 8);
  if (nre < 1 || nim < 1 || nre * nim > 4096) throw ConfigError("grid must have between 1 and 4096 points");
  if (!(re0 > 0.0) || re1 < re0 || im1 < im0) throw ConfigError("grid must lie in Re z > 0 with min <= max");
  std::vector<cplx> grid;
  for (std::uint64_t i = 0; i < nre; ++i) {
    for (std::uint64_t j = 0; j < nim; ++j) {
      const double x = nre == 1 ? re0 : re0 + (re1 - re0) * static_cast<double>(i) / static_cast<double>(nre - 1);
      const double y = nim == 1 ? im0 : im0 + (im1 - im0) * static_cast<double>(j) / static_cast<double>(nim - 1);
      grid.emplace_back(x, y);
    }
  }
  const CounterStream stream(cfg.get_uint("seed"), 0, Substream::kGaf);
  GridSample sample;
  if (method == "cholesky") {
    sample = sample_gaf_cholesky(p, grid, stream);
  } else if (method == "integral") {
    const auto cells = capped(cfg, "cells", kDefaultIntegralCells, kMaxCells);
    sample = sample_gaf_integral(p, grid, CounterStream(cfg.get_uint("seed"), 0, Substream::kIntegral),
                                 cfg.get_double("y_max", 0.0), cells);
  } else {
    throw ConfigError("method must be cholesky or integral", cfg.entries().at("method").line);
  }
  std::ostringstream out;
  sample.write_csv(out);
  Artifacts a;
  a.add("gaf_sample.csv", out.str());
  StatReport rep;
  rep.name = "gaf-sample-" + method;
  rep.statistic = static_cast<double>(grid.size());
  rep.n_replicates = 1;
  rep.seed = cfg.get_uint("seed");
  rep.verdict = Verdict::kSmoke;
  a.reports.push_back(rep);
  return a;
}

Artifacts run_sigma_c(const Config& cfg, unsigned threads) {
  cfg.check_keys(keys({"alpha", "n_max", "replicates"}));
  const auto model = model_from_config(cfg);
  const double alpha = cfg.get_double("alpha");
  const std::size_t n_max = capped(cfg, "n_max", 1'000'000, kMaxSeriesTerms);
  const std::size_t m = replicates(cfg, 4);
  if (n_max < 1000) throw ConfigError("n_max must be at least 1000");
  if (m < 1) throw ConfigError("replicates must be positive");
  const std::uint64_t seed = cfg.get_uint("seed");
  const auto est = sigma_c_estimates(model, alpha, n_max, seed, m, threads);

  Artifacts a;
  a.add("sigma_c.csv", csv([&](CsvWriter& w) {
          w.header({"replicate", "estimate"});
          for (std::size_t i = 0; i < est.size(); ++i) w.cell(static_cast<std::int64_t>(i)).cell(est[i]).end_row();
        }));
  double worst = 0.0;
  for (double e : est) worst = std::max(worst, std::abs(e - 0.5));
  StatReport rep;
  rep.name = "sigma-c";
  rep.statistic = worst;
  rep.n_replicates = m;
  rep.seed = seed;
  rep.verdict = worst <= 0.1 ? Verdict::kPass : Verdict::kFail;
  rep.extra["alpha"] = alpha;
  rep.extra["n_max"] = static_cast<double>(n_max);
  a.reports.push_back(rep);
  return a;
}

using Driver = std::function<Artifacts(const Config&, unsigned)>;

const std::map<std::string, Driver>& drivers() {
  static const std::map<std::string, Driver> d = {
      {"clt", run_clt},           {"covariance", run_covariance}, {"zeros-complex", run_zeros_complex},
      {"zeros-real", run_zeros_real}, {"nr-dist", run_nr_dist},   {"lil", run_lil},
      {"zeta-check", run_zeta},   {"gaf-sample", run_gaf_sample}, {"sigma-c", run_sigma_c},
  };
  return d;
}

ojson config_echo(const Config& cfg) {
  ojson j = ojson::object();
  for (const auto& [k, e] : cfg.entries())
    if (k != "output_dir") j[k] = e.value;
  return j;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"clt",     "covariance", "zeros-complex", "zeros-real", "nr-dist",
                                                 "lil", "zeta-check", "gaf-sample",    "sigma-c"};
  return names;
}

RunOutcome run(const Config& cfg, unsigned threads, const std::optional<fs::path>& output_dir) {
  RunOutcome outcome;
  const auto started = std::chrono::steady_clock::now();
  Artifacts art;
  std::string experiment;
  fs::path dir;
  try {
    experiment = cfg.get_string("experiment");
    const auto it = drivers().find(experiment);
    if (it == drivers().end())
      throw ConfigError("unknown experiment '" + experiment + "'", cfg.entries().at("experiment").line);
    dir = output_dir ? *output_dir : fs::path(cfg.get_string("output_dir", "out"));
    art = it->second(cfg, threads);
  } catch (const ConfigError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  } catch (const ResourceError& e) {
    outcome.exit_code = kExitResource;
    outcome.message = e.what();
    return outcome;
  } catch (const ArgumentError& e) {
    // Library preconditions reached from config values.
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  fs::create_directories(dir);
  art.add("report.csv", report_csv(art.reports));
  ojson outputs = ojson::array();
  for (const auto& [name, content] : art.files) {
    write_file(dir / name, content);
    outputs.push_back({{"file", name}, {"fnv1a64", hex64(fnv1a64(content))}});
    outcome.files.push_back(name);
  }

  ojson report = ojson::array();
  ojson verdicts = ojson::object();
  bool ok = true;
  for (const auto& r : art.reports) {
    report.push_back(ojson::parse(r.to_json()));
    verdicts[r.name] = to_string(r.verdict);
    ok = ok && r.verdict != Verdict::kFail;
  }
  write_file(dir / "report.json", report.dump(2) + "\n");
  outcome.files.push_back("report.json");

  ojson manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["tool_version"] = RDS_VERSION;
  manifest["experiment"] = experiment;
  manifest["config"] = config_echo(cfg);
  manifest["threads"] = threads;
  manifest["wall_clock_seconds"] = wall;
  manifest["outputs"] = outputs;
  manifest["verdicts"] = verdicts;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  outcome.files.push_back("manifest.json");

  outcome.reports = std::move(art.reports);
  outcome.exit_code = ok ? kExitPass : kExitFail;
  return outcome;
}

int replay(const fs::path& manifest_path, unsigned threads, std::ostream& log) {
  ojson manifest;
  try {
    manifest = ojson::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    log << "replay: cannot read manifest " << manifest_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  const auto version = manifest.value("artifact_version", std::string());
  if (version != kArtifactVersion) {
    log << "replay: artifact version '" << version << "' does not match '" << kArtifactVersion << "'\n";
    return kExitReplay;
  }
  Config cfg;
  try {
    for (const auto& [k, v] : manifest.at("config").items()) cfg.set(k, v.get<std::string>());
  } catch (const std::exception& e) {
    log << "replay: malformed config echo: " << e.what() << "\n";
    return kExitConfig;
  }

  const fs::path original = manifest_path.parent_path();
  const fs::path scratch = fs::temp_directory_path() /
                           ("rdsim-replay-" + std::to_string(::getpid()) + "-" +
                            hex64(fnv1a64(fs::absolute(manifest_path).string())));
  fs::remove_all(scratch);
  const auto outcome = run(cfg, threads, scratch);
  if (outcome.exit_code == kExitConfig || outcome.exit_code == kExitResource) {
    log << "replay: " << outcome.message << "\n";
    fs::remove_all(scratch);
    return outcome.exit_code;
  }

  int code = kExitPass;
  for (const auto& out : manifest.at("outputs")) {
    const auto name = out.at("file").get<std::string>();
    if (fs::path(name).extension() != ".csv") continue;
    std::string before, after;
    try {
      before = read_file(original / name);
      after = read_file(scratch / name);
    } catch (const std::exception& e) {
      log << "replay: " << name << ": " << e.what() << "\n";
      code = kExitReplay;
      continue;
    }
    if (before != after) {
      log << "replay: " << name << " differs\n";
      code = kExitReplay;
    } else {
      log << "replay: " << name << " identical\n";
    }
  }
  fs::remove_all(scratch);
  return code;
}

}  // namespace rds
