#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rds/errors.hpp"
#include "rds/gaf.hpp"
#include "rds/zeros.hpp"

using namespace rds;
using cplx = std::complex<double>;

namespace {

struct Poly {
  std::vector<cplx> roots;  // repeated entries for multiplicity
  cplx operator()(cplx z) const {
    cplx v = 1.0;
    for (const auto& r : roots) v *= z - r;
    return v;
  }
};

// Roots in (-0.9, 0.9)^2, pairwise at least 0.1 apart; one may be doubled.
Poly random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_int_distribution<int> deg(1, 5);
  const int d = deg(rng);
  std::vector<cplx> distinct;
  while (static_cast<int>(distinct.size()) < d) {
    const cplx z(u(rng), u(rng));
    if (std::all_of(distinct.begin(), distinct.end(), [&](cplx w) { return std::abs(z - w) > 0.1; }))
      distinct.push_back(z);
  }
  Poly p{distinct};
  if (d <= 4 && std::uniform_int_distribution<int>(0, 2)(rng) == 0) p.roots.push_back(distinct[0]);
  return p;
}

}  // namespace

TEST_CASE("polynomial corpus: multiplicities and root locations") {
  std::mt19937_64 rng(2024);
  const Region square = Region::rectangle({-1.0, -1.0}, {1.0, 1.0});
  for (int i = 0; i < 100; ++i) {
    const Poly p = random_poly(rng);
    CAPTURE(i);
    const auto pm = locate_zeros(p, square, 1e-10);
    CHECK(pm.total() == static_cast<int>(p.roots.size()));
    for (const auto& atom : pm.atoms) {
      const int mult = static_cast<int>(std::count_if(p.roots.begin(), p.roots.end(),
                                                      [&](cplx r) { return std::abs(r - atom.location) < 1e-6; }));
      CHECK(atom.multiplicity == mult);
      double best = INFINITY;
      for (const auto& r : p.roots) best = std::min(best, std::abs(r - atom.location));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("winding additivity and refinement invariance") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> cut(-0.6, 0.6);
  for (int i = 0; i < 30; ++i) {
    const Poly p = random_poly(rng);
    double x = cut(rng);
    // Keep the cut away from roots.
    while (std::any_of(p.roots.begin(), p.roots.end(), [&](cplx r) { return std::abs(r.real() - x) < 1e-3; }))
      x = cut(rng);
    const int whole = winding_count(p, Region::rectangle({-1, -1}, {1, 1}));
    const int left = winding_count(p, Region::rectangle({-1, -1}, {x, 1}));
    const int right = winding_count(p, Region::rectangle({x, -1}, {1, 1}));
    CHECK(whole == left + right);
    CHECK(whole == static_cast<int>(p.roots.size()));
    WindingOptions fine;
    fine.samples_per_edge = 128;
    CHECK(winding_count(p, Region::rectangle({-1, -1}, {1, 1}), fine) == whole);
  }
}

TEST_CASE("disk regions") {
  const Poly p{{{0.1, 0.1}, {0.5, 0.0}, {-0.7, 0.0}}};
  CHECK(winding_count(p, Region::disk(0.0, 0.3)) == 1);
  CHECK(winding_count(p, Region::disk(0.0, 0.6)) == 2);
  const auto pm = locate_zeros(p, Region::disk(0.0, 0.6), 1e-10);
  CHECK(pm.total() == 2);
}

TEST_CASE("boundary zeros are reported") {
  const Poly p{{{1.0, 0.0}}};
  CHECK_THROWS_AS(winding_count(p, Region::rectangle({0.0, -1.0}, {1.0, 1.0})), BoundaryZeroError);
  CHECK_THROWS_AS(Region::rectangle({1.0, 0.0}, {0.0, 1.0}).validate(), ArgumentError);
}

TEST_CASE("region domain tags are enforced") {
  CHECK_THROWS_AS(Region::rectangle({-0.5, -1.0}, {1.0, 1.0}, Domain::kHalfPlane).validate(), DomainError);
  CHECK_NOTHROW(Region::rectangle({0.1, -1.0}, {1.0, 1.0}, Domain::kHalfPlane).validate());
  CHECK_THROWS_AS(Region::disk(0.0, 1.0, Domain::kUnitDisk).validate(), DomainError);
}

TEST_CASE("real zeros") {
  const auto f = [](double x) { return std::sin(x); };
  const auto pm = real_zeros(f, 0.5, 10.0, 0.0, 1e-12);
  REQUIRE(pm.total() == 3);
  for (int k = 0; k < 3; ++k) CHECK(pm.atoms[k].location.real() == doctest::Approx((k + 1) * std::numbers::pi).epsilon(1e-12));
  const auto neg = real_zeros([&](double x) { return -f(x); }, 0.5, 10.0, 0.0, 1e-12);
  REQUIRE(neg.atoms.size() == pm.atoms.size());
  for (std::size_t i = 0; i < pm.atoms.size(); ++i) CHECK(neg.atoms[i].location == pm.atoms[i].location);
  // A zero exactly on a grid node is found once.
  const auto node = real_zeros([](double x) { return x - 0.5; }, 0.0, 1.0, 0.25, 1e-12);
  REQUIRE(node.total() == 1);
  CHECK(node.atoms[0].location.real() == 0.5);
  CHECK_THROWS_AS(real_zeros(f, 1.0, 0.5, 0.0, 1e-9), ArgumentError);
}

TEST_CASE("disk image and mapped counts") {
  const auto [c, r] = disk_image(0.5);
  CHECK(c == doctest::Approx(5.0 / 3.0));
  CHECK(r == doctest::Approx(4.0 / 3.0));
  // Zeros of (w - phi(0.3)) (w - phi(0.7)) with only the first inside phi(|z| < 0.5).
  const Poly p{{mobius(0.3), mobius(0.7)}};
  const Region rect = Region::rectangle({c - r - 0.05, -r - 0.05}, {c + r + 0.05, r + 0.05}, Domain::kHalfPlane);
  const auto pm = locate_zeros(p, rect, 1e-9);
  CHECK(count_in_mapped_disk(pm, 0.5) == 1);
  const Region small = Region::rectangle({0.5, -0.5}, {1.5, 0.5}, Domain::kHalfPlane);
  CHECK_THROWS_AS(count_in_mapped_disk(locate_zeros(p, small, 1e-9), 0.5), CoverageError);
}

TEST_CASE("isolation shortcut gives the same atoms") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Poly p = random_poly(rng);
    LocateOptions quick;
    quick.isolate_diameter = 0.2;
    const auto a = locate_zeros(p, Region::rectangle({-1, -1}, {1, 1}), 1e-10);
    const auto b = locate_zeros(p, Region::rectangle({-1, -1}, {1, 1}), 1e-10, quick);
    REQUIRE(a.total() == b.total());
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t k = 0; k < a.atoms.size(); ++k) CHECK(std::abs(a.atoms[k].location - b.atoms[k].location) < 1e-8);
  }
}

TEST_CASE("point measure csv") {
  const Poly p{{{0.25, 0.0}}};
  const auto pm = locate_zeros(p, Region::rectangle({-1, -1}, {1, 1}), 1e-12);
  std::ostringstream out;
  pm.write_csv(out);
  const std::string s = out.str();
  CHECK(s.rfind("# {", 0) == 0);
  CHECK(s.find("re,im,multiplicity\n0.25") != std::string::npos);
}
