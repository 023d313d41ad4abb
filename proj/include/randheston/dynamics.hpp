#pragma once

#include <optional>

#include "randheston/heston.hpp"
#include "randheston/mixture.hpp"
#include "randheston/randomiser.hpp"

namespace randheston {

/// Law of the variance after an elapsed time t, started from a randomised initial variance.
struct ForwardContext {
    double t;
    /// xi^2 (1 - e^{-kappa t}) / (4 kappa).
    double beta;
    /// 1 / (2 beta), the endpoint contributed by the CIR transition.
    double b;
    /// 4 kappa theta / xi^2.
    double dof;
    /// m b / (m + b e^{-kappa t}); set only for a finite initial endpoint m.
    std::optional<double> b_star;

    double endpoint() const { return b_star ? *b_star : b; }
};

ForwardContext forward_context(const ModelParams& p, const Randomiser& r, double t);

/// log E[exp(u V_t)] for real u below the endpoint.
double forward_log_mgf(const ModelParams& p, const Randomiser& r, double t, double u);
cplx forward_log_mgf(const ModelParams& p, const Randomiser& r, double t, cplx u);
/// The forward variance as a law usable by the pricing engines.
VarianceLaw forward_law(const ModelParams& p, const Randomiser& r, double t);

struct VarianceMoments {
    double mean;
    double var;
};
VarianceMoments variance_moments(const ModelParams& p, const Randomiser& r, double t);

struct ForwardTail {
    double endpoint;
    /// Coefficient of the leading singular term at the endpoint.
    double g0;
    /// Power of 1 / (endpoint - u) in that term; 0 stands for a logarithm.
    double exponent;
    /// Full constants when the expansion has the polynomial fat-tail form.
    std::optional<Fat> fat;
    /// Thin originals: log M behaves like g0 / (endpoint - u)^exponent with a non-integer or unsupported power.
    bool nonpolynomial;
};
ForwardTail forward_tail_class(const ModelParams& p, const Randomiser& r, double t);

/// Implied variance at remaining maturity tau, seen from time t; throws UnsupportedForwardCase for Weibull and Exponential.
double forward_smile(const ModelParams& p, const Randomiser& r, double t, double tau, double x, int order);

}  // namespace randheston
