#include "randheston/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace randheston::special {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Continued fraction for erfc(x) exp(x^2), x > 0, evaluated bottom-up.
double erfcx_cf(double x) {
    double frac = 0.0;
    for (int k = 60; k >= 1; --k) frac = 0.5 * k / (x + frac);
    return kInvSqrtPi / (x + frac);
}

// Rational approximation in the upper half-plane (Weideman, N = 40 terms).
struct WeidemanTable {
    static constexpr int N = 40;
    double L;
    std::array<double, N> coef;  // coef[j] multiplies Z^j

    WeidemanTable() : L(std::sqrt(N / std::numbers::sqrt2)) {
        constexpr int M = 2 * N;
        constexpr int M2 = 2 * M;
        std::array<double, M2> f{};
        // f = [0; exp(-t^2)(L^2 + t^2)] for k = -M+1 .. M-1, then fftshift.
        std::array<double, M2> raw{};
        raw[0] = 0.0;
        for (int k = -M + 1; k <= M - 1; ++k) {
            const double theta = k * std::numbers::pi / M;
            const double t = L * std::tan(0.5 * theta);
            raw[k + M] = std::exp(-t * t) * (L * L + t * t);
        }
        for (int i = 0; i < M2; ++i) f[i] = raw[(i + M2 / 2) % M2];
        for (int j = 1; j <= N; ++j) {
            double acc = 0.0;
            for (int n = 0; n < M2; ++n) acc += f[n] * std::cos(2.0 * std::numbers::pi * j * n / M2);
            coef[j - 1] = acc / M2;
        }
    }
};

const WeidemanTable& weideman() {
    static const WeidemanTable table;
    return table;
}

cplx faddeeva_upper(cplx z) {
    const double r = std::abs(z);
    if (r > 8.0 || (r > 5.0 && z.imag() > 1.0)) {
        // Laplace continued fraction.
        cplx frac = 0.0;
        for (int k = 80; k >= 1; --k) frac = (0.5 * k) / (z - frac);
        return cplx(0.0, kInvSqrtPi) / (z - frac);
    }
    const auto& tab = weideman();
    const cplx iz(-z.imag(), z.real());
    const cplx den = tab.L - iz;
    const cplx Z = (tab.L + iz) / den;
    cplx p = 0.0;
    for (int j = WeidemanTable::N - 1; j >= 0; --j) p = p * Z + tab.coef[j];
    return 2.0 * p / (den * den) + kInvSqrtPi / den;
}

}  // namespace

double erfcx(double x) {
    if (x < 0.0) {
        // 2 exp(x^2) - erfcx(-x); split x^2 so the exponent carries no rounding.
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return 2.0 * std::exp(hi) * (1.0 + lo) - erfcx(-x);
    }
    if (x < 5.0) {
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return std::exp(hi) * (1.0 + lo) * std::erfc(x);
    }
    return erfcx_cf(x);
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x) * kInvSqrtPi * kInvSqrt2; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_norm_cdf(double x) {
    if (x > -5.0) return std::log(norm_cdf(x));
    const double y = -x * kInvSqrt2;
    return -y * y + std::log(0.5 * erfcx(y));
}

cplx faddeeva(cplx z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx log_faddeeva(cplx z) {
    if (z.imag() >= 0.0) return std::log(faddeeva_upper(z));
    const cplx e = -z * z;
    const cplx reflected = faddeeva_upper(-z);
    if (e.real() > 0.0) return e + std::log(2.0 - std::exp(-e) * reflected);
    return std::log(2.0 * std::exp(e) - reflected);
}

double log_gamma(double x) { return std::lgamma(x); }

}  // namespace randheston::special
