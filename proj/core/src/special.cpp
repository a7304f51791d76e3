#include "rds/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "rds/errors.hpp"
#include "rds/summation.hpp"

namespace rds {

namespace {

using cplx = std::complex<double>;

constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;

cplx lower_gamma_series(double a, cplx w) {
  // gamma(a, w) = w^a e^{-w} sum_n w^n / (a (a+1) ... (a+n))
  cplx term = 1.0 / a;
  cplx sum = term;
  for (int n = 1; n < 2000; ++n) {
    term *= w / (a + n);
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return std::exp(a * std::log(w) - w) * sum;
}

bool upper_gamma_fraction(double a, cplx w, cplx& out) {
  // Modified Lentz evaluation of the Legendre continued fraction.
  cplx b = w + 1.0 - a;
  cplx c = 1.0 / kTiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 5000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      out = std::exp(a * std::log(w) - w) * h;
      return true;
    }
  }
  return false;
}

}  // namespace

cplx upper_incomplete_gamma(double a, cplx w) {
  if (!(a > 0.0)) throw ArgumentError("upper_incomplete_gamma: a must be positive");
  if (w.real() < 0.0) throw DomainError("upper_incomplete_gamma: Re(w) must be nonnegative");
  if (w == cplx{}) return boost::math::tgamma(a);
  if (std::abs(w) >= a + 1.0 && std::abs(w) > 1.5) {
    cplx cf;
    if (upper_gamma_fraction(a, w, cf)) return cf;
  }
  return boost::math::tgamma(a) - lower_gamma_series(a, w);
}

double upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw ArgumentError("upper_incomplete_gamma: a must be positive");
  if (x < 0.0) throw DomainError("upper_incomplete_gamma: x must be nonnegative");
  if (x == 0.0) return boost::math::tgamma(a);
  return boost::math::tgamma(a, x);
}

cplx laplace_tail(double power, cplx w, double u0) {
  if (!(power > -1.0)) throw ArgumentError("laplace_tail: power must exceed -1");
  if (!(w.real() > 0.0)) throw DomainError("laplace_tail: Re(w) must be positive");
  if (u0 < 0.0) throw ArgumentError("laplace_tail: lower limit must be nonnegative");
  const double a = 1.0 + power;
  return std::exp(-a * std::log(w)) * upper_incomplete_gamma(a, w * u0);
}

cplx log_zeta_sum(double beta, cplx z, std::uint64_t terms, bool endpoint_correction) {
  if (!(beta > -1.0)) throw ArgumentError("log_zeta_sum: beta must exceed -1");
  if (!(z.real() > 0.0)) throw DomainError("log_zeta_sum: Re(z) must be positive");
  if (terms < 2) throw ArgumentError("log_zeta_sum: need at least two terms");
  ComplexCompensatedSum acc;
  for (std::uint64_t k = 2; k <= terms; ++k) {
    const double lk = std::log(static_cast<double>(k));
    acc += std::exp(beta * std::log(lk) - (1.0 + z) * lk);
  }
  const double log_k = std::log(static_cast<double>(terms));
  acc += laplace_tail(beta, z, log_k);
  if (endpoint_correction) {
    const double k = static_cast<double>(terms);
    const cplx f = std::exp(beta * std::log(log_k) - (1.0 + z) * log_k);
    const cplx df = f / k * (beta / log_k - (1.0 + z));
    acc += -0.5 * f - df / 12.0;
  }
  return acc.value();
}

cplx log_zeta_tail(double beta, cplx z, std::uint64_t after) {
  if (!(beta > -1.0)) throw ArgumentError("log_zeta_tail: beta must exceed -1");
  if (!(z.real() > 0.0)) throw DomainError("log_zeta_tail: Re(z) must be positive");
  if (after < 1) throw ArgumentError("log_zeta_tail: need after >= 1");
  const std::uint64_t terms = std::max<std::uint64_t>(2 * after, 4096);
  ComplexCompensatedSum acc;
  for (std::uint64_t k = after + 1; k <= terms; ++k) {
    const double lk = std::log(static_cast<double>(k));
    acc += std::exp(beta * std::log(lk) - (1.0 + z) * lk);
  }
  const double log_k = std::log(static_cast<double>(terms));
  const double k = static_cast<double>(terms);
  const cplx f = std::exp(beta * std::log(log_k) - (1.0 + z) * log_k);
  const cplx df = f / k * (beta / log_k - (1.0 + z));
  acc += laplace_tail(beta, z, log_k);
  acc += -0.5 * f - df / 12.0;
  return acc.value();
}

}  // namespace rds
