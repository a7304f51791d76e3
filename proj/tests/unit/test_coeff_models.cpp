#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "rds/coefficients.hpp"
#include "rds/errors.hpp"
#include "rds/random.hpp"

using namespace rds;

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter stream draws are pure functions of the key and index") {
  const CounterStream a(42, 3, Substream::kCoefficients);
  const CounterStream b(42, 3, Substream::kCoefficients);
  for (std::uint64_t i : {std::uint64_t{1000}, std::uint64_t{0}, std::uint64_t{77}}) {
    CHECK(a.block(i) == b.block(i));
    CHECK(a.normal(i) == b.normal(i));
  }
  CHECK(a.block(5) != CounterStream(42, 4, Substream::kCoefficients).block(5));
  CHECK(a.block(5) != CounterStream(43, 3, Substream::kCoefficients).block(5));
  CHECK(a.block(5) != CounterStream(42, 3, Substream::kTail).block(5));
  CHECK(a.normal(6) == a.normal_pair(3).first);
  CHECK(a.normal(7) == a.normal_pair(3).second);
}

TEST_CASE("uniforms lie in the open unit interval and normals have unit moments") {
  const CounterStream s(9, 0, Substream::kAuxiliary);
  const int n = 200000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n / 2; ++i) {
    const auto [u, v] = s.uniform_pair(i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    for (double x : {s.normal_pair(i).first, s.normal_pair(i).second}) {
      m1 += x;
      m2 += x * x;
      m4 += x * x * x * x;
    }
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
  CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("covariance spec validation") {
  CHECK_NOTHROW(CovarianceSpec::checked(1.0, 0.0, 0.0));
  CHECK_NOTHROW(CovarianceSpec::checked(1.0, 1.0, 1.0));
  CHECK_THROWS_AS(CovarianceSpec::checked(-1.0, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(CovarianceSpec::checked(0.0, 0.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(CovarianceSpec::checked(1.0, 1.0, 1.5), ArgumentError);
  const auto c = CovarianceSpec::checked(2.0, 0.5, 0.3);
  CHECK(c.trace() == doctest::Approx(2.5));
  CHECK(c.pseudo_variance().real() == doctest::Approx(1.5));
  CHECK(c.pseudo_variance().imag() == doctest::Approx(0.6));
  CHECK(CovarianceSpec::checked(0.7, 0.7, 0.0).is_isotropic());
  CHECK_FALSE(c.is_isotropic());
}

TEST_CASE("covariance square root squares back") {
  for (const auto& c : {CovarianceSpec{1, 0, 0}, CovarianceSpec{0.5, 0.5, 0}, CovarianceSpec{2.0, 0.5, 0.3},
                        CovarianceSpec{1.0, 1.0, 1.0}, CovarianceSpec{0.2, 3.0, -0.7}}) {
    const auto r = covariance_sqrt(c);
    const Eigen::Matrix2d sq = r * r;
    CHECK(sq(0, 0) == doctest::Approx(c.sigma1_sq).epsilon(1e-12));
    CHECK(sq(1, 1) == doctest::Approx(c.sigma2_sq).epsilon(1e-12));
    CHECK(sq(0, 1) == doctest::Approx(c.rho).epsilon(1e-12));
    CHECK(r(0, 1) == r(1, 0));
  }
}

TEST_CASE("model construction rejects invalid parameters") {
  CHECK_THROWS_AS(CoefficientModel::gauss_real(0.0), ArgumentError);
  CHECK_THROWS_AS(CoefficientModel::two_point({1.0, 0.0}, 1.0), ArgumentError);
  CHECK_THROWS_AS(CoefficientModel::two_point({0.0, 0.0}, 0.5), ArgumentError);
}

TEST_CASE("model names and realness") {
  CHECK(CoefficientModel::rademacher().name() == "rademacher");
  CHECK(CoefficientModel::gauss_real().name() == "gauss-real");
  CHECK(CoefficientModel::gauss_complex().name() == "gauss-complex");
  CHECK(CoefficientModel::circle().name() == "circle");
  CHECK(CoefficientModel::two_point({1, 1}, 0.3).name() == "two-point");
  CHECK(CoefficientModel::rademacher().is_real());
  CHECK(CoefficientModel::gauss_real(2.0).is_real());
  CHECK_FALSE(CoefficientModel::circle().is_real());
}

TEST_CASE("empirical moments match the implied covariance") {
  const std::vector<CoefficientModel> models = {
      CoefficientModel::rademacher(), CoefficientModel::gauss_real(1.5), CoefficientModel::gauss_complex(),
      CoefficientModel::circle(), CoefficientModel::two_point({1.0, 2.0}, 0.25)};
  const std::size_t n = 100000;
  for (const auto& model : models) {
    CAPTURE(model.name());
    const CoefficientStream stream(model, 123, 0);
    const auto pairs = stream.sample_pairs(n);
    double me = 0, mt = 0, s11 = 0, s22 = 0, s12 = 0;
    double q11 = 0, q22 = 0, q12 = 0;
    for (const auto& c : pairs) {
      me += c.eta;
      mt += c.theta;
      s11 += c.eta * c.eta;
      s22 += c.theta * c.theta;
      s12 += c.eta * c.theta;
      q11 += std::pow(c.eta, 4);
      q22 += std::pow(c.theta, 4);
      q12 += c.eta * c.eta * c.theta * c.theta;
    }
    const double dn = static_cast<double>(n);
    const auto cov = implied_covariance(model);
    auto se = [&](double m4, double m2) { return std::sqrt(std::max(m4 / dn - m2 * m2, 1e-30) / dn); };
    CHECK(std::abs(me / dn) < 5.0 * std::sqrt(cov.sigma1_sq / dn) + 1e-15);
    CHECK(std::abs(mt / dn) < 5.0 * std::sqrt(cov.sigma2_sq / dn) + 1e-15);
    CHECK(std::abs(s11 / dn - cov.sigma1_sq) <= 5.0 * se(q11, s11 / dn) + 1e-12);
    CHECK(std::abs(s22 / dn - cov.sigma2_sq) <= 5.0 * se(q22, s22 / dn) + 1e-12);
    CHECK(std::abs(s12 / dn - cov.rho) <= 5.0 * se(q12, s12 / dn) + 1e-12);
  }
}

TEST_CASE("draws have the model's support") {
  const CoefficientStream rad(CoefficientModel::rademacher(), 1, 0);
  const CoefficientStream circ(CoefficientModel::circle(), 1, 0);
  const CoefficientStream two(CoefficientModel::two_point({1.0, 2.0}, 0.25), 1, 0);
  std::set<std::pair<double, double>> atoms;
  for (std::uint64_t n = 2; n < 2000; ++n) {
    const auto r = rad.at(n);
    CHECK((r.eta == 1.0 || r.eta == -1.0));
    CHECK(r.theta == 0.0);
    CHECK(std::abs(circ.at(n).value()) == doctest::Approx(1.0).epsilon(1e-14));
    atoms.insert({two.at(n).eta, two.at(n).theta});
  }
  CHECK(atoms.size() == 2);
}

TEST_CASE("sample_pairs agrees with indexed access") {
  const CoefficientStream s(CoefficientModel::gauss_complex(), 77, 5);
  const auto a = s.sample_pairs(100);
  const auto b = s.sample_pairs_from(50, 20);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == s.at(i + 2));
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == a[48 + i]);
  CHECK_THROWS_AS(s.sample_pairs(0), EmptyRequestError);
  CHECK(s.master_seed() == 77);
  CHECK(s.replicate_id() == 5);
}

TEST_CASE("gaussian scale enters linearly") {
  const CoefficientStream a(CoefficientModel::gauss_real(1.0), 5, 2);
  const CoefficientStream b(CoefficientModel::gauss_real(4.0), 5, 2);
  for (std::uint64_t n = 2; n < 100; ++n) CHECK(b.at(n).eta == 4.0 * a.at(n).eta);
}
