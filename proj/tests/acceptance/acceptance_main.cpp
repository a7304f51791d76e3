// Acceptance run: one line per criterion, then a nonzero exit if any hard
// criterion failed. Shipped configs are run through the batch runner so the
// same artifacts feed the reproducibility check at the end.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rds/coefficients.hpp"
#include "rds/config.hpp"
#include "rds/errors.hpp"
#include "rds/experiments.hpp"
#include "rds/gaf.hpp"
#include "rds/io.hpp"
#include "rds/kernels.hpp"
#include "rds/runner.hpp"
#include "rds/series.hpp"
#include "rds/stats.hpp"
#include "rds/zeros.hpp"

using namespace rds;
namespace fs = std::filesystem;
using cplx = std::complex<double>;
using mp50 = boost::multiprecision::cpp_bin_float_50;

namespace {

enum class Outcome { kPass, kFail, kSmoke };

struct Line {
  int id;
  std::string title;
  Outcome outcome;
  std::string detail;
  double seconds;
};

std::vector<Line> g_lines;
const fs::path g_runs = fs::current_path() / "acceptance_runs";
std::map<std::string, RunOutcome> g_shipped;  // config stem -> outcome

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

void report(int id, const std::string& title, Outcome o, const std::string& detail, double seconds) {
  const char* tag = o == Outcome::kPass ? "PASS" : o == Outcome::kFail ? "FAIL" : "SMOKE";
  std::cout << "criterion " << id << " [" << tag << "] " << title << ": " << detail << " (" << fmt(seconds, 3)
            << " s)" << std::endl;
  g_lines.push_back({id, title, o, detail, seconds});
}

template <class Fn>
void criterion(int id, const std::string& title, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = Outcome::kFail;
  std::string detail;
  try {
    o = fn(detail);
  } catch (const std::exception& e) {
    o = Outcome::kFail;
    detail += std::string(" exception: ") + e.what();
  }
  report(id, title, o, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

Outcome pass_if(bool ok) { return ok ? Outcome::kPass : Outcome::kFail; }

const RunOutcome& shipped(const std::string& stem, const std::vector<std::pair<std::string, std::string>>& overrides = {},
                          const std::string& tag = "") {
  const std::string key = tag.empty() ? stem : stem + "-" + tag;
  auto it = g_shipped.find(key);
  if (it != g_shipped.end()) return it->second;
  Config cfg = Config::load(fs::path(RDS_CONFIG_DIR) / (stem + ".conf"));
  cfg.apply_overrides(overrides);
  auto out = run(cfg, 1, g_runs / key);
  if (out.exit_code == kExitConfig || out.exit_code == kExitResource)
    throw std::runtime_error("config " + stem + " rejected: " + out.message);
  return g_shipped.emplace(key, std::move(out)).first->second;
}

const StatReport& find_report(const RunOutcome& out, const std::string& name) {
  for (const auto& r : out.reports)
    if (r.name == name) return r;
  throw std::runtime_error("missing report " + name);
}

// 50-digit Gamma(1+2a) c w^{-(1+2a)}.
cplx mp_kernel(double alpha, cplx c, cplx w) {
  const mp50 a = 1 + 2 * mp50(alpha);
  const mp50 wr = w.real(), wi = w.imag();
  const mp50 mag = boost::math::tgamma(a) * exp(-a * log(sqrt(wr * wr + wi * wi)));
  const mp50 ph = -a * atan2(wi, wr);
  const mp50 re = mag * cos(ph), im = mag * sin(ph);
  return {static_cast<double>(re * mp50(c.real()) - im * mp50(c.imag())),
          static_cast<double>(re * mp50(c.imag()) + im * mp50(c.real()))};
}

Outcome kernels(std::string& d) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ua(-0.49, 3.0), ux(0.01, 5.0), uy(-5.0, 5.0), uc(0.05, 2.0), ur(-1, 1);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double s1 = uc(rng), s2 = uc(rng);
    const KernelParams p{ua(rng), {s1, s2, 0.99 * ur(rng) * std::sqrt(s1 * s2)}};
    const cplx z1(ux(rng), uy(rng)), z2(ux(rng), uy(rng));
    const cplx op = mp_kernel(p.alpha, p.cov.pseudo_variance(), z1 + z2);
    const cplx oh = mp_kernel(p.alpha, p.cov.trace(), z1 + std::conj(z2));
    worst = std::max({worst, std::abs(kernel_pseudo(p, z1, z2) - op) / std::abs(op),
                      std::abs(kernel_hermitian(p, z1, z2) - oh) / std::abs(oh)});
  }
  double var_err = 0.0;
  for (double alpha : {-0.25, 0.0, 1.0}) {
    for (double s : {1e-3, 0.5}) {
      const KernelParams p{alpha, {1.3, 0.0, 0.0}};
      const double want = boost::math::tgamma(1 + 2 * alpha) * 1.3 / std::pow(2 * s, 1 + 2 * alpha);
      var_err = std::max(var_err, std::abs(kernel_pseudo(p, s, s).real() - want) / want);
    }
  }
  d = "max rel err vs 50-digit oracle " + fmt(worst) + " (tol 1e-12), Var I rel err " + fmt(var_err);
  return pass_if(worst < 1e-12 && var_err < 1e-12);
}

Outcome samplers(std::string& d) {
  const std::vector<cplx> grid = {{0.5, 0.0}, {1.0, 1.0}, {2.0, -0.5}, {0.8, 0.3}};
  const std::vector<CovarianceSpec> covs = {{1.0, 1.0, 0.0}, {1.5, 0.5, 0.4}};
  const int m = 10000;
  int checked = 0, failed = 0;
  double worst = 0.0;
  for (double alpha : {-0.25, 0.0, 1.0}) {
    for (const auto& cov : covs) {
      const KernelParams p{alpha, cov};
      const IntegralSampler integral(p, grid);
      std::vector<std::vector<cplx>> a(grid.size(), std::vector<cplx>(m)), b = a;
      for (int r = 0; r < m; ++r) {
        const auto x = sample_gaf_cholesky(p, grid, CounterStream(77, r, Substream::kGaf));
        const auto y = integral.sample(CounterStream(77, r, Substream::kIntegral));
        for (std::size_t j = 0; j < grid.size(); ++j) {
          a[j][r] = x.values[j];
          b[j][r] = y.values[j];
        }
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const auto ea = empirical_complex_covariance(a[i], a[j]);
          const auto eb = empirical_complex_covariance(b[i], b[j]);
          auto cmp = [&](double x, double y, double sx, double sy) {
            const double se = std::hypot(sx, sy);
            if (se == 0.0) return;
            ++checked;
            const double z = std::abs(x - y) / se;
            worst = std::max(worst, z);
            if (z > 4.0) ++failed;
          };
          cmp(ea.hermitian.real(), eb.hermitian.real(), ea.se_hermitian.real(), eb.se_hermitian.real());
          cmp(ea.hermitian.imag(), eb.hermitian.imag(), ea.se_hermitian.imag(), eb.se_hermitian.imag());
          cmp(ea.pseudo.real(), eb.pseudo.real(), ea.se_pseudo.real(), eb.se_pseudo.real());
          cmp(ea.pseudo.imag(), eb.pseudo.imag(), ea.se_pseudo.imag(), eb.se_pseudo.imag());
        }
      }
    }
  }
  d = std::to_string(checked) + " entry components, " + std::to_string(failed) + " beyond 4 SE, max |z| " + fmt(worst);
  return pass_if(failed == 0);
}

Outcome covariance(std::string& d) {
  bool ok = true;
  for (const char* alpha : {"0", "0.5"}) {
    const auto& out = shipped("covariance", {{"alpha", alpha}}, std::string("alpha") + alpha);
    const auto& r = find_report(out, "covariance");
    const bool pass = r.verdict == Verdict::kPass;
    ok = ok && pass;
    d += std::string("alpha=") + alpha + ": monotone " + fmt(r.extra.at("monotone")) + ", within 5 SE of exact " +
         fmt(r.extra.at("within_band_of_exact_all_s")) + ", within 5 SE of kernel at s=1e-3 " +
         fmt(r.extra.at("within_band_of_kernel_smallest_s")) + ", final empirical-to-kernel " + fmt(r.statistic) + "; ";
  }
  return pass_if(ok);
}

Outcome clt(std::string& d) {
  bool ok = true;
  for (const char* model : {"rademacher", "gauss-real"}) {
    for (const char* alpha : {"0", "1"}) {
      const auto& out = shipped("clt", {{"model", model}, {"alpha", alpha}}, std::string(model) + "-alpha" + alpha);
      const auto& r = find_report(out, "clt");
      const auto& c = find_report(out, "clt-negative-control");
      ok = ok && r.verdict == Verdict::kPass && c.verdict == Verdict::kPass;
      d += std::string(model) + " alpha=" + alpha + ": p " + fmt(*r.p_value) + ", control p " + fmt(*c.p_value, 3) +
           "; ";
    }
  }
  return pass_if(ok);
}

Outcome zero_law(std::string& d) {
  double id = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto law = zero_count_pmf(r);
    double total = 0.0;
    for (double q : law.pmf) total += q;
    const double r2 = r * r;
    id = std::max({id, std::abs(total - 1.0), std::abs(law.mean() - r2 / (1 - r2)),
                   std::abs(law.variance() - (r2 / (1 - r2) - r2 * r2 / (1 - r2 * r2)))});
  }
  const double p0 = zero_count_pmf(0.5).pmf[0];
  const double p0_err = std::abs(p0 - 0.688537537120339715);
  const auto& out = shipped("zeros_complex");
  const auto& r = find_report(out, "zero-count-gauss-complex");
  d = "identity err " + fmt(id) + ", P{N=0} err " + fmt(p0_err) + ", TV " + fmt(*r.tv_distance) + " (M=" +
      std::to_string(r.n_replicates) + "), chi2 p " + fmt(*r.p_value);
  return pass_if(id < 1e-12 && p0_err < 1e-10 && *r.tv_distance < 0.1);
}

Outcome universality(std::string& d) {
  const auto& out = shipped("zeros_complex");
  const auto& u = find_report(out, "zero-count-universality");
  const auto& a = find_report(out, "zero-count-gauss-complex");
  const auto& b = find_report(out, "zero-count-circle");
  d = "gauss-complex vs circle TV " + fmt(*u.tv_distance) + " (to law: " + fmt(*a.tv_distance) + ", " +
      fmt(*b.tv_distance) + "), two-sample chi2 p " + fmt(*u.p_value);
  return pass_if(*u.tv_distance < 0.1);
}

Outcome real_zeros_check(std::string& d) {
  const auto& r = find_report(shipped("zeros_real"), "real-zeros");
  const double diff = std::abs(r.extra.at("mean_series") - r.extra.at("mean_gaf"));
  d = "TV " + fmt(*r.tv_distance) + ", means " + fmt(r.extra.at("mean_series")) + " vs " + fmt(r.extra.at("mean_gaf")) +
      " (|diff| " + fmt(diff) + ", 3 SE " + fmt(3 * *r.standard_error) + ")";
  return pass_if(*r.tv_distance < 0.15 && diff <= 3 * *r.standard_error);
}

struct Poly {
  std::vector<cplx> roots;
  cplx operator()(cplx z) const {
    cplx v = 1.0;
    for (const auto& r : roots) v *= z - r;
    return v;
  }
};

Outcome zero_finder(std::string& d) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_int_distribution<int> deg(1, 5);
  int total_ok = 0, additive_ok = 0, refine_ok = 0;
  double worst = 0.0;
  const Region sq = Region::rectangle({-1, -1}, {1, 1});
  for (int i = 0; i < 100; ++i) {
    std::vector<cplx> roots;
    const int n = deg(rng);
    while (static_cast<int>(roots.size()) < n) {
      const cplx z(u(rng), u(rng));
      if (std::all_of(roots.begin(), roots.end(), [&](cplx w) { return std::abs(z - w) > 0.1; })) roots.push_back(z);
    }
    if (n <= 4 && i % 3 == 0) roots.push_back(roots[0]);
    const Poly p{roots};
    const auto pm = locate_zeros(p, sq, 1e-10);
    bool mult_ok = pm.total() == static_cast<int>(roots.size());
    for (const auto& a : pm.atoms) {
      double best = INFINITY;
      for (const auto& r : roots) best = std::min(best, std::abs(r - a.location));
      worst = std::max(worst, best);
      const auto m = std::count_if(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r - a.location) < 1e-6; });
      mult_ok = mult_ok && m == a.multiplicity;
    }
    total_ok += mult_ok;
    double x = 0.05;
    while (std::any_of(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r.real() - x) < 1e-3; })) x += 0.0123;
    const int whole = winding_count(p, sq);
    additive_ok += whole == winding_count(p, Region::rectangle({-1, -1}, {x, 1})) +
                               winding_count(p, Region::rectangle({x, -1}, {1, 1}));
    WindingOptions fine;
    fine.samples_per_edge = 128;
    refine_ok += winding_count(p, sq, fine) == whole;
  }
  d = "multiplicities " + std::to_string(total_ok) + "/100, max root err " + fmt(worst) + ", additivity " +
      std::to_string(additive_ok) + "/100, refinement " + std::to_string(refine_ok) + "/100";
  return pass_if(total_ok == 100 && additive_ok == 100 && refine_ok == 100 && worst < 1e-8);
}

Outcome zeta(std::string& d) {
  bool ok = true;
  for (double beta : {-0.4, 0.0, 0.5, 2.0}) {
    const std::vector<cplx> z = {std::polar(1e-3, std::numbers::pi / 4), std::polar(1e-4, std::numbers::pi / 4)};
    const auto rows = zeta_limit_check(beta, z);
    ok = ok && rows[0].error < 0.02 && rows[1].error < rows[0].error;
    d += "beta=" + fmt(beta) + ": " + fmt(rows[0].error, 3) + " -> " + fmt(rows[1].error, 3) + "; ";
  }
  // The sum starts at k = 2, so the reference is 0.01 (zeta(1.01) - 1).
  const std::vector<cplx> z01 = {0.01};
  const auto v = zeta_limit_check(0.0, z01)[0].value;
  const double err = std::abs(v - 0.9957794333849687249);
  d += "z=0.01 value err " + fmt(err);
  return pass_if(ok && err < 1e-6);
}

Outcome derivative(std::string& d) {
  std::vector<std::vector<Coefficient>> fixtures = {read_coefficients(fs::path(RDS_FIXTURE_DIR) / "rademacher64.txt")};
  fixtures.push_back(CoefficientStream(CoefficientModel::gauss_complex(), 3, 0).sample_pairs(500));
  fixtures.push_back(CoefficientStream(CoefficientModel::two_point({1.0, 2.0}, 0.3), 3, 1).sample_pairs(2000));
  bool exact = true;
  double worst = 0.0;
  for (const auto& c : fixtures) {
    const std::size_t n = c.size() + 1;
    for (double alpha : {-0.3, 0.0, 0.5, 2.0}) {
      for (cplx w : {cplx(0.6, 0.8), cplx(1.0, 0.0), cplx(0.55, -7.0)}) {
        const SeriesSpec spec{alpha, n, false};
        const cplx got = eval_shifted_alpha_derivative(c, spec, w);
        exact = exact && got == eval_partial(c, SeriesSpec{alpha + 1, n, false}, w);
        const double h = 1e-5;
        const cplx fd = -(eval_partial(c, spec, w + h) - eval_partial(c, spec, w - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd - got) / std::abs(got));
      }
    }
  }
  d = std::string("identity exact: ") + (exact ? "yes" : "no") + ", central-difference rel err " + fmt(worst);
  return pass_if(exact && worst < 1e-6);
}

Outcome lil(std::string& d) {
  const auto& r = find_report(shipped("lil"), "lil-band");
  const double hi = r.extra.at("max_r"), lo = r.extra.at("min_r");
  const bool band = hi >= 0.4 && hi <= 1.4 && lo >= -1.4 && lo <= -0.4;
  d = "max R " + fmt(hi) + ", min R " + fmt(lo) + ", band " + (band ? "held" : "not held") + ", verdict " +
      to_string(r.verdict);
  return Outcome::kSmoke;
}

Outcome sigma_c(std::string& d) {
  bool ok = true;
  for (const char* alpha : {"0", "1"}) {
    const auto& r = find_report(shipped("sigma_c", {{"alpha", alpha}}, std::string("alpha") + alpha), "sigma-c");
    const auto csv = read_file(g_runs / (std::string("sigma_c-alpha") + alpha) / "sigma_c.csv");
    std::string values;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line) && line[0] != '#') values += fmt(std::stod(line.substr(line.find(',') + 1))) + " ";
    ok = ok && r.verdict == Verdict::kPass;
    d += std::string("alpha=") + alpha + ": estimates " + values + "(max |e-1/2| " + fmt(r.statistic) + "); ";
  }
  return pass_if(ok);
}

Outcome reproducibility(std::string& d) {
  int replays = 0, mismatches = 0;
  for (const auto& entry : fs::directory_iterator(RDS_CONFIG_DIR)) {
    if (entry.path().extension() != ".conf") continue;
    const auto stem = entry.path().stem().string();
    shipped(stem);
    for (unsigned threads : {1u, 4u, 8u}) {
      std::ostringstream log;
      const int code = replay(g_runs / stem / "manifest.json", threads, log);
      ++replays;
      if (code != kExitPass) {
        ++mismatches;
        d += stem + " with " + std::to_string(threads) + " threads: exit " + std::to_string(code) + "; ";
      }
    }
  }
  d += std::to_string(replays) + " replays, " + std::to_string(mismatches) + " mismatches";
  return pass_if(mismatches == 0 && replays > 0);
}

}  // namespace

int main() {
  fs::remove_all(g_runs);
  fs::create_directories(g_runs);
  std::cout << "acceptance runs in " << g_runs << std::endl;

  criterion(1, "kernel arithmetic", kernels);
  criterion(2, "sampler cross-validation", samplers);
  criterion(3, "covariance convergence", covariance);
  criterion(4, "one-dimensional CLT", clt);
  criterion(5, "zero-count law", zero_law);
  criterion(6, "local universality", universality);
  criterion(7, "real-zero universality", real_zeros_check);
  criterion(8, "zero finder exactness", zero_finder);
  criterion(9, "zeta-type limit", zeta);
  criterion(10, "derivative identity", derivative);
  criterion(11, "LIL band", lil);
  criterion(12, "abscissa of convergence", sigma_c);
  criterion(13, "reproducibility", reproducibility);

  int failed = 0;
  for (const auto& l : g_lines) failed += l.outcome == Outcome::kFail;
  std::cout << "summary: " << g_lines.size() - failed << "/" << g_lines.size() << " criteria without failure, "
            << failed << " failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
