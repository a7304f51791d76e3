#pragma once

#include <complex>
#include <cstdint>

namespace rds {

/// Upper incomplete gamma Gamma(a, w) for a > 0 and Re(w) >= 0, principal
/// branch of w^a. Series for small |w|, Legendre continued fraction otherwise.
std::complex<double> upper_incomplete_gamma(double a, std::complex<double> w);

/// Real upper incomplete gamma Gamma(a, x), a > 0, x >= 0.
double upper_incomplete_gamma(double a, double x);

/// Laplace-type tail integral  int_{u0}^inf u^power e^{-w u} du
///   = w^{-(1+power)} Gamma(1+power, w u0),   power > -1, Re(w) > 0, u0 >= 0.
std::complex<double> laplace_tail(double power, std::complex<double> w, double u0);

/// S_beta(z) = sum_{k>=2} (log k)^beta k^{-1-z}, evaluated as the partial sum
/// up to `terms` plus the closed-form integral tail int_terms^inf. With
/// `endpoint_correction` the first two Euler-Maclaurin endpoint terms are
/// subtracted as well.
std::complex<double> log_zeta_sum(double beta, std::complex<double> z, std::uint64_t terms,
                                  bool endpoint_correction = false);

/// sum_{k > after} (log k)^beta k^{-1-z}: explicit terms up to K = max(2 after, 4096),
/// then the integral tail with the two Euler-Maclaurin endpoint terms.
std::complex<double> log_zeta_tail(double beta, std::complex<double> z, std::uint64_t after);

}  // namespace rds
