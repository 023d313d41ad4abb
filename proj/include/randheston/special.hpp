#pragma once

#include "randheston/types.hpp"

namespace randheston::special {

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// Standard normal cdf and its logarithm; the log stays finite far in the left tail.
double norm_cdf(double x);
double log_norm_cdf(double x);
double norm_pdf(double x);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) on the whole complex plane.
cplx faddeeva(cplx z);

/// log w(z), usable where w itself would overflow (deep lower half-plane).
cplx log_faddeeva(cplx z);

double log_gamma(double x);

}  // namespace randheston::special
