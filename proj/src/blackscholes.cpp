#include "randheston/blackscholes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "randheston/special.hpp"
#include "randheston/types.hpp"

namespace randheston {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double intrinsic(double x) { return x < 0.0 ? -std::expm1(x) : 0.0; }

// log of the call time value for k >= 0 at total volatility s > 0.
double log_call_otm(double k, double s) {
    const double d1 = -k / s + 0.5 * s;
    const double d2 = d1 - s;
    if (d1 <= 0.0) {
        const double diff = special::erfcx(-d1 * kInvSqrt2) - special::erfcx(-d2 * kInvSqrt2);
        return -0.5 * d1 * d1 + std::log(0.5 * diff);
    }
    return std::log(special::norm_cdf(d1) - std::exp(k) * special::norm_cdf(d2));
}

// d log C / d log s.
double log_call_slope(double k, double s, double log_c) {
    const double d1 = -k / s + 0.5 * s;
    return s * std::exp(-0.5 * d1 * d1 - log_c) * std::numbers::inv_sqrtpi * kInvSqrt2;
}

// Total volatility s with log_call_otm(k, s) = target, k >= 0.
double invert_total_vol(double k, double target) {
    if (!(target < 0.0) || std::isnan(target))
        throw Error(ErrorKind::NoArbitrageViolation, "option value at or above the upper bound");
    if (target == -std::numeric_limits<double>::infinity())
        throw Error(ErrorKind::NoArbitrageViolation, "option value at the intrinsic bound");
    double lo = std::log(1e-12), hi = std::log(50.0);
    auto f = [&](double y) { return log_call_otm(k, std::exp(y)) - target; };
    while (f(lo) > 0.0) {
        lo -= 5.0;
        if (lo < -700.0) return 0.0;
    }
    while (f(hi) < 0.0) {
        hi += 1.0;
        if (hi > 10.0) throw Error(ErrorKind::NoArbitrageViolation, "price too close to the upper bound");
    }
    // Brenner-Subrahmanyam seed, clipped to the bracket.
    double y = std::log(std::sqrt(2.0 * std::numbers::pi) * std::exp(target) + 1e-300);
    if (!(y > lo && y < hi)) y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double s = std::exp(y);
        const double lc = log_call_otm(k, s);
        const double fy = lc - target;
        if (fy > 0.0) hi = y; else lo = y;
        if (std::abs(fy) < 1e-15 || hi - lo < 1e-15) break;
        const double slope = log_call_slope(k, s, lc);
        double next = y - fy / slope;
        if (!std::isfinite(next) || !(next > lo && next < hi) || slope < 1e-300) next = 0.5 * (lo + hi);
        if (std::abs(next - y) < 1e-16 * std::max(1.0, std::abs(y))) {
            y = next;
            break;
        }
        y = next;
    }
    return std::exp(y);
}

}  // namespace

double bs_call(double t, double x, double sigma) {
    const double s = sigma * std::sqrt(t);
    if (!(s > 0.0)) return intrinsic(x);
    const double d1 = -x / s + 0.5 * s;
    return special::norm_cdf(d1) - std::exp(x) * special::norm_cdf(d1 - s);
}

double bs_put(double t, double x, double sigma) {
    const double s = sigma * std::sqrt(t);
    if (!(s > 0.0)) return x > 0.0 ? std::expm1(x) : 0.0;
    const double d1 = -x / s + 0.5 * s;
    return std::exp(x) * special::norm_cdf(s - d1) - special::norm_cdf(-d1);
}

double bs_vega(double t, double x, double sigma) {
    const double st = std::sqrt(t);
    const double s = sigma * st;
    if (!(s > 0.0)) return 0.0;
    const double d1 = -x / s + 0.5 * s;
    return st * special::norm_pdf(d1);
}

double log_bs_otm(double t, double x, double sigma) {
    const double s = sigma * std::sqrt(t);
    if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
    if (x >= 0.0) return log_call_otm(x, s);
    return x + log_call_otm(-x, s);
}

double implied_vol(double t, double x, double call_price) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    const double lower = intrinsic(x);
    if (!(call_price > lower) || !(call_price < 1.0))
        throw Error(ErrorKind::NoArbitrageViolation, "call price outside (intrinsic, 1)");
    const double otm = x >= 0.0 ? call_price : call_price - lower;
    return implied_vol_from_log_otm(t, x, std::log(otm));
}

double implied_vol_from_log_otm(double t, double x, double log_otm) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    const double k = std::abs(x);
    const double target = x >= 0.0 ? log_otm : log_otm - x;
    return invert_total_vol(k, target) / std::sqrt(t);
}

double bs_atm_expansion(double t, double v, std::optional<double> b) {
    if (!(t > 0.0)) return 0.0;
    double price = std::sqrt(v * t / (2.0 * std::numbers::pi));
    if (b) price += *b * t * std::sqrt(t);
    return price;
}

}  // namespace randheston
