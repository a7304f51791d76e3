#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <json.hpp>

#include "rds/errors.hpp"
#include "rds/experiments.hpp"
#include "rds/stats.hpp"

using namespace rds;
using cplx = std::complex<double>;

TEST_CASE("kolmogorov tail") {
  // lambda = 1.3581 is the classical 5% point, 1.6276 the 1% point.
  const std::size_t n = 1000000;
  const double scale = std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n));
  CHECK(ks_pvalue(1.3581 / scale, n) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(ks_pvalue(1.6276 / scale, n) == doctest::Approx(0.01).epsilon(2e-3));
  // Both branches agree where they meet.
  CHECK(ks_pvalue(1.1799 / scale, n) == doctest::Approx(ks_pvalue(1.1801 / scale, n)).epsilon(1e-3));
  CHECK(ks_pvalue(0.0, 10) == 1.0);
  CHECK(ks_pvalue(1.0, 100) < 1e-30);
}

TEST_CASE("ks statistic") {
  CHECK(ks_statistic({0.0}, standard_normal_cdf) == doctest::Approx(0.5));
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back((i + 0.5) / 100.0);
  CHECK(ks_statistic(xs, [](double x) { return x; }) == doctest::Approx(0.005));
  CHECK_THROWS_AS(ks_statistic({}, standard_normal_cdf), EmptyRequestError);
  CHECK(standard_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("chi-square tests") {
  // Two bins with statistic 3.8414588 gives p = 0.05 with one degree of freedom.
  const double n = 1000.0;
  const double d = std::sqrt(3.841458820694124 * 0.25 * n);  // (o-e)^2/e summed over 2 bins
  const std::vector<std::size_t> counts = {static_cast<std::size_t>(std::llround(500 + d)),
                                           static_cast<std::size_t>(std::llround(500 - d))};
  const auto r = chi_square_gof(counts, std::vector<double>{0.5, 0.5});
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(0.05).epsilon(0.05));

  const auto merged = chi_square_gof(std::vector<std::size_t>{60, 38, 2}, std::vector<double>{0.6, 0.38, 0.02});
  CHECK(merged.bins == 2);
  CHECK(merged.statistic == doctest::Approx(0.0).epsilon(1e-12));

  const auto same = chi_square_two_sample(std::vector<std::size_t>{50, 30, 20}, std::vector<std::size_t>{50, 30, 20});
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  const auto differ =
      chi_square_two_sample(std::vector<std::size_t>{90, 10}, std::vector<std::size_t>{10, 90});
  CHECK(differ.p_value < 1e-20);
  CHECK_THROWS_AS(chi_square_gof(std::vector<std::size_t>{0, 0}, std::vector<double>{0.5, 0.5}), EmptyRequestError);
}

TEST_CASE("tv distance, histogram, normalise") {
  CHECK(tv_distance(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0}) == doctest::Approx(0.5));
  CHECK(tv_distance(std::vector<double>{0.2, 0.8}, std::vector<double>{0.2, 0.8}) == 0.0);
  const auto h = histogram(std::vector<int>{0, 2, 2, 1, 0, 0});
  CHECK(h == std::vector<std::size_t>{3, 1, 2});
  const auto p = normalize(h);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(histogram(std::vector<int>{-1}), ArgumentError);
}

TEST_CASE("zero-count law identities") {
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto law = zero_count_pmf(r);
    double total = 0.0;
    for (double q : law.pmf) total += q;
    const double r2 = r * r;
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(std::abs(law.mean() - r2 / (1.0 - r2)) < 1e-12);
    CHECK(std::abs(law.variance() - (r2 / (1.0 - r2) - r2 * r2 / (1.0 - r2 * r2))) < 1e-12);
    CHECK(std::pow(r2, law.k_max) < 1e-15);
    CHECK(std::pow(r2, law.k_max - 1) >= 1e-15);
  }
  // prod_{k>=1} (1 - 4^{-k}), mpmath.
  CHECK(std::abs(zero_count_pmf(0.5).pmf[0] - 0.688537537120339715) < 1e-10);
  CHECK_THROWS_AS(zero_count_pmf(1.0), ArgumentError);
  CHECK_THROWS_AS(zero_count_pmf(0.0), ArgumentError);
}

TEST_CASE("empirical complex covariance") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<cplx> x(20000), y(20000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cplx a(nd(rng), nd(rng));
    x[i] = a;
    y[i] = std::conj(a) * cplx(0.0, 1.0);
  }
  const auto e = empirical_complex_covariance(x, y);
  // E a conj(conj(a) i) = E a^2 (-i) = 0, E a (conj a i) = 2i.
  CHECK(std::abs(e.pseudo - cplx(0.0, 2.0)) < 5 * e.se());
  CHECK(std::abs(e.hermitian) < 5 * e.se());
  CHECK_THROWS_AS(empirical_complex_covariance(std::span<const cplx>(x).first(40), std::span<const cplx>(y).first(41)),
                  PairingError);
  CHECK_THROWS_AS(empirical_complex_covariance(std::span<const cplx>(x).first(20), std::span<const cplx>(y).first(20)),
                  ArgumentError);
}

TEST_CASE("stat report serialisation") {
  StatReport r;
  r.name = "demo";
  r.statistic = 0.25;
  r.p_value = 0.5;
  r.n_replicates = 10;
  r.seed = 3;
  r.verdict = Verdict::kSmoke;
  r.extra["b"] = 2.0;
  r.extra["a"] = 1.0;
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["verdict"] == "smoke");
  CHECK(j["p_value"] == 0.5);
  CHECK(!j.contains("tv_distance"));
  CHECK(j["extra"]["a"] == 1.0);
  const auto row = r.csv_row();
  CHECK(row.size() == StatReport::csv_header().size());
  CHECK(row[3].empty());
}

TEST_CASE("clt harness") {
  CltOptions o;
  o.model = CoefficientModel::rademacher();
  o.seed = 42;
  o.head_terms = 4096;
  o.exact_normal_replicates = true;
  const auto null = clt_normality_check(o);
  CHECK(null.values.size() == 2000);
  CHECK(*null.report.p_value > 0.001);

  o.exact_normal_replicates = false;
  o.broken_normalizer = true;
  CHECK(*clt_normality_check(o).report.p_value < 1e-6);

  o.model = CoefficientModel::gauss_complex();
  CHECK_THROWS_AS(clt_normality_check(o), ArgumentError);
  o.model = CoefficientModel::rademacher();
  o.s = 0.2;
  CHECK_THROWS_AS(clt_normality_check(o), ArgumentError);
  o.s = 2e-3;
  o.replicates = 100;
  CHECK_THROWS_AS(clt_normality_check(o), ArgumentError);
}

TEST_CASE("clt values scale exactly with a power-of-two gaussian scale") {
  CltOptions a;
  a.model = CoefficientModel::gauss_real(1.0);
  a.replicates = 500;
  a.head_terms = 1024;
  CltOptions b = a;
  b.model = CoefficientModel::gauss_real(4.0);
  const auto ra = clt_normality_check(a), rb = clt_normality_check(b);
  CHECK(ra.values == rb.values);
}

TEST_CASE("zero count helpers") {
  const Region rect = covering_rectangle(0.5, 0.05);
  CHECK(rect.lo.real() == doctest::Approx(5.0 / 3.0 - 4.0 / 3.0 - 0.05));
  CHECK_THROWS_AS(covering_rectangle(0.5, 0.4), ArgumentError);
  ZeroCountOptions o;
  o.model = CoefficientModel::rademacher();
  CHECK_THROWS_AS(zero_count_experiment(o), ArgumentError);
  o.model = CoefficientModel::gauss_complex();
  const CoefficientStream stream(o.model, 1, 0);
  const int n = zero_count_one(stream, 1e-3, 0.5, o);
  CHECK(n >= 0);
  CHECK(n == zero_count_one(stream, 1e-3, 0.5, o));
}

TEST_CASE("lil helpers") {
  LilParams p;
  p.alpha = 0.5;
  p.s_grid = geometric_grid(1e-2, 1e-6, 40);
  CHECK(p.s_grid.size() == 40);
  CHECK(p.s_grid.front() == 1e-2);
  CHECK(p.s_grid.back() == 1e-6);
  CHECK(p.c_alpha() == doctest::Approx(0.5));
  CHECK_NOTHROW(p.validate());
  LilParams bad = p;
  bad.s_grid.push_back(1e-7);
  CHECK_THROWS_AS(bad.validate(), ArgumentError);

  // R(s) is linear in the driving noise.
  p.s_grid = geometric_grid(1e-2, 1e-4, 5);
  const auto tail = lil_tail_cells(1000, 40.0 / 1e-4, 1e-2);
  std::vector<double> h1(999), h2(999), t1(tail.t_mid.size()), t2(tail.t_mid.size()), hs(999), ts(tail.t_mid.size());
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < h1.size(); ++i) {
    h1[i] = nd(rng);
    h2[i] = nd(rng);
    hs[i] = h1[i] + 3.0 * h2[i];
  }
  for (std::size_t i = 0; i < t1.size(); ++i) {
    t1[i] = nd(rng);
    t2[i] = nd(rng);
    ts[i] = t1[i] + 3.0 * t2[i];
  }
  const auto r1 = lil_path_values(h1, t1, tail, p), r2 = lil_path_values(h2, t2, tail, p),
             rs = lil_path_values(hs, ts, tail, p);
  for (std::size_t j = 0; j < rs.size(); ++j) CHECK(rs[j] == doctest::Approx(r1[j] + 3.0 * r2[j]).epsilon(1e-10));
}

TEST_CASE("zeta rows") {
  const std::vector<cplx> z = {std::polar(1e-3, std::numbers::pi / 4), std::polar(1e-4, std::numbers::pi / 4)};
  const auto rows = zeta_limit_check(0.0, z);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error < 0.02);
  CHECK(rows[1].error < rows[0].error);
  const std::vector<cplx> bad = {{-1e-3, 0.0}};
  CHECK_THROWS_AS(zeta_limit_check(0.0, bad), DomainError);
  CHECK_THROWS_AS(zeta_limit_check(-1.0, z), ArgumentError);
}
