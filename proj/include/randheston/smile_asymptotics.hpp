#pragma once

#include <functional>
#include <vector>

#include "randheston/heston.hpp"
#include "randheston/mixture.hpp"
#include "randheston/numerics.hpp"
#include "randheston/randomiser.hpp"

namespace randheston {

enum class SmileEngine { Bounded, BoundedHigher, Thin, Fat1, Fat2, ATM, MOTM, ModDev };

/// coefficient(x) * t^t_power * (log t)^log_power.
struct SmileTerm {
    double t_power;
    int log_power;
    std::function<double(double)> coefficient;
};

/// Implied variance as a finite sum of terms, leading (most singular) term first.
struct SmileAsymptote {
    SmileEngine engine;
    std::vector<SmileTerm> terms;

    double implied_variance(double t, double x) const;
};

// ---------------------------------------------------------------- bounded support

/// sup_u { u x - v_plus Lambda(u) } over the domain of Lambda.
LegendreResult bounded_rate(const ModelParams& p, double v_plus, double x);
/// Small-time limit of the implied variance for x != 0.
double bounded_smile(const ModelParams& p, double v_plus, double x);
SmileAsymptote bounded_asymptote(const ModelParams& p, double v_plus);

struct UniformExpansion {
    double call_price;
    /// log of call_price minus intrinsic value; stays finite when the price underflows.
    double log_time_value;
    double u_star;
    double rate;
    /// The exp{D0(u*) v_plus + C0(u*) + x} factor.
    double U;
};

double uniform_U(const ModelParams& p, double v_plus, double x);
/// Leading-order call price for a uniformly distributed initial variance.
UniformExpansion uniform_call_expansion(const ModelParams& p, const Uniform& law, double t, double x);

// ---------------------------------------------------------------- thin tail

struct ThinRates {
    double gamma_lo;  ///< l2 / (1 + l2)
    double gamma_hi;  ///< l2 / (l2 - 1)
    double c_lo;      ///< (2 l1 l2)^(1 / (1 + l2))
    double c_hi;      ///< (2 l1 l2)^(1 / (1 - l2))
};

ThinRates thin_rates(const Thin& tail);
/// Limit of t^gamma_lo log M(t, u / t^gamma_lo).
double thin_limit_cgf(const Thin& tail, double u);
/// Its conjugate, the small-time rate function.
double thin_rate(const Thin& tail, double x);
double thin_smile(const Thin& tail, double t, double x);
SmileAsymptote thin_asymptote(const Thin& tail);

/// Explosion exponent of sigma^2(t, x t^alpha).
double motm_exponent(const Thin& tail, double alpha);
/// Implied variance at the moving strike x t^alpha; alpha in (1 - gamma_hi, 1/2).
double motm_smile(const Thin& tail, double t, double x, double alpha);

/// Moderate-deviation rate at speed t^gamma. Bounded: gamma in (0, 1); Thin: gamma in (0, gamma_hi].
double moddev_rate(const ModelParams& p, const TailClass& tail, double gamma, double x);

// ---------------------------------------------------------------- fat tail

struct FatTailConstants {
    double rate;     ///< sqrt(2 m) |x|
    double c1;       ///< omega = 2 only
    double zeta;     ///< omega = 2 only
    double h1;
    double h2;
    double b1, b2, b3;
    /// log of the prefactor C_t(x) and of E_t(x) at the requested t.
    double log_C;
    double log_E;
    /// Set when |log C_t| exceeds the c1 t^(-1/4) correction it is supposed to trail.
    bool remainder_dominates;
};

/// Throws UnsupportedOmega for omega outside {1, 2}, InvalidArgument on a wrong gamma0 sign.
FatTailConstants fat_tail_constants(const ModelParams& p, const Fat& tail, double t, double x);

/// Implied variance to order 1, 2 or 3; for omega = 1 orders 2 and 3 coincide.
double fat_smile(const ModelParams& p, const Fat& tail, double t, double x, int order);
SmileAsymptote fat_asymptote(const ModelParams& p, const Fat& tail, int order);

struct FatCallExpansion {
    double call_price;
    double log_time_value;
};
FatCallExpansion fat_call_expansion(const ModelParams& p, const Fat& tail, double t, double x);
/// omega = 1 only: the same price assembled through the Gamma density of the saddle fluctuations.
FatCallExpansion fat_call_expansion_gamma_route(const ModelParams& p, const Fat& tail, double t, double x);

/// Solution u of d/du [sqrt(t) log M(t, u / sqrt(t))] = x.
double saddlepoint_exact(const ModelParams& p, const VarianceLaw& law, double t, double x);
/// Second derivative of sqrt(t) log M(t, u / sqrt(t)) in u.
double saddle_curvature(const ModelParams& p, const VarianceLaw& law, double t, double u);

/// Limit of sqrt(t) log M(t, sqrt(2 m / t)) for a scaled non-central chi-square; +inf when rho xi m >= 1.
double ncx2_boundary_limit(const ModelParams& p, const ScaledNCX2& law);

// ---------------------------------------------------------------- at the money

/// Small-time limit of the ATM implied volatility.
double atm_limit(const Randomiser& r);

}  // namespace randheston
