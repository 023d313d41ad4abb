#include "randheston/smile_asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace randheston {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

void require_otm(double x) {
    if (x == 0.0) throw Error(ErrorKind::AtmUndefined, "log-strike 0 has no out-of-the-money limit");
}

void require_fat(const Fat& f) {
    if (f.omega != 1 && f.omega != 2)
        throw Error(ErrorKind::UnsupportedOmega, "fat-tail expansions exist for omega in {1, 2} only");
    if (!(f.m > 0.0) || !std::isfinite(f.m))
        throw Error(ErrorKind::InvalidArgument, "fat tail needs a finite positive mgf endpoint");
    if (f.omega == 1 && !(f.g0 < 0.0))
        throw Error(ErrorKind::InvalidArgument, "omega = 1 needs gamma0 < 0");
    if (f.omega == 2 && !(f.g0 > 0.0))
        throw Error(ErrorKind::InvalidArgument, "omega = 2 needs gamma0 > 0");
    if (f.omega == 2 && !f.g2)
        throw Error(ErrorKind::InvalidArgument, "omega = 2 needs gamma2");
}

double intrinsic(double x) { return std::max(0.0, 1.0 - std::exp(x)); }

double fat_leading(const Fat& f, double x) { return std::abs(x) / (2.0 * std::sqrt(2.0 * f.m)); }

double fat_c1(const Fat& f, double x) {
    const double w = f.omega;
    return w * std::pow(f.g0, 1.0 / w) *
           std::pow(std::abs(x) / (std::sqrt(2.0 * f.m) * (w - 1.0)), 1.0 - 1.0 / w);
}

double fat_h1(const ModelParams& p, const Fat& f, double x) {
    const double m = f.m;
    const double skew = 0.5 * p.rho * p.xi * m * x;
    if (f.omega == 1) {
        const double a = std::abs(f.g0);
        return (skew + (a - 0.5) * std::log(std::abs(x)) + f.g1 + std::log(4.0 * std::sqrt(kPi)) -
                (0.5 * a + 0.25) * std::log(2.0 * m) - std::lgamma(a)) /
               (4.0 * m);
    }
    const double g0 = f.g0;
    return (skew + g0 * *f.g2 + 9.0 * g0 / (4.0 * m) + 0.625 * std::log(2.0) - 0.375 * std::log(m) +
            0.25 * std::log(g0) - 0.25 * std::log(std::abs(x))) /
           (4.0 * m);
}

double fat_h2(const Fat& f) {
    if (f.omega == 1) return (0.5 - std::abs(f.g0)) / (8.0 * f.m);
    return (0.5 + f.g0 * f.g1) / (16.0 * f.m);
}

}  // namespace

double SmileAsymptote::implied_variance(double t, double x) const {
    double total = 0.0;
    for (const SmileTerm& term : terms) {
        double v = term.coefficient(x) * std::pow(t, term.t_power);
        if (term.log_power != 0) v *= std::pow(std::log(t), term.log_power);
        total += v;
    }
    return total;
}

// ---------------------------------------------------------------- bounded support

LegendreResult bounded_rate(const ModelParams& p, double v_plus, double x) {
    if (!(v_plus > 0.0)) throw Error(ErrorKind::InvalidArgument, "upper support bound must be positive");
    const auto [lo, hi] = lambda_domain(p);
    ConvexFn fn;
    fn.value = [&p, v_plus](double u) { return v_plus * lambda_limit(p, u); };
    fn.derivative = [&p, v_plus](double u) { return v_plus * lambda_derivative(p, u); };
    fn.lo = lo;
    fn.hi = hi;
    if (x == 0.0) return LegendreResult{0.0, 0.0, 0.0, LegendreStatus::Interior};
    return legendre(fn, x);
}

double bounded_smile(const ModelParams& p, double v_plus, double x) {
    require_otm(x);
    return x * x / (2.0 * bounded_rate(p, v_plus, x).f_star);
}

SmileAsymptote bounded_asymptote(const ModelParams& p, double v_plus) {
    return {SmileEngine::Bounded,
            {{0.0, 0, [p, v_plus](double x) { return bounded_smile(p, v_plus, x); }}}};
}

double uniform_U(const ModelParams& p, double v_plus, double x) {
    require_otm(x);
    const double u = bounded_rate(p, v_plus, x).u_star;
    return std::exp(D0_beta(p, 0.0, u) * v_plus + C0(p, u) + x);
}

UniformExpansion uniform_call_expansion(const ModelParams& p, const Uniform& law, double t, double x) {
    require_otm(x);
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    const double vp = law.hi;
    const LegendreResult r = bounded_rate(p, vp, x);
    if (r.status == LegendreStatus::Boundary)
        throw Error(ErrorKind::OutsideDomain, "saddle point sits on the boundary of the domain");
    const double u = r.u_star;
    const double log_U = D0_beta(p, 0.0, u) * vp + C0(p, u) + x;
    const double lam = lambda_limit(p, u);
    const double lam2 = lambda_second(p, u);
    const double log_den =
        std::log((law.hi - law.lo) * lam * u * u) + 0.5 * std::log(2.0 * kPi * vp * lam2);
    UniformExpansion out;
    out.u_star = u;
    out.rate = r.f_star;
    out.U = std::exp(log_U);
    out.log_time_value = -r.f_star / t + log_U + 2.5 * std::log(t) - log_den;
    out.call_price = intrinsic(x) + std::exp(out.log_time_value);
    return out;
}

// ---------------------------------------------------------------- thin tail

ThinRates thin_rates(const Thin& tail) {
    if (!(tail.l1 > 0.0) || !(tail.l2 > 1.0))
        throw Error(ErrorKind::InvalidArgument, "thin tail needs l1 > 0 and l2 > 1");
    const double l1 = tail.l1, l2 = tail.l2;
    return {l2 / (1.0 + l2), l2 / (l2 - 1.0), std::pow(2.0 * l1 * l2, 1.0 / (1.0 + l2)),
            std::pow(2.0 * l1 * l2, 1.0 / (1.0 - l2))};
}

double thin_limit_cgf(const Thin& tail, double u) {
    const ThinRates r = thin_rates(tail);
    return r.c_hi * std::pow(std::abs(u), 2.0 * r.gamma_hi) / (2.0 * r.gamma_hi);
}

double thin_rate(const Thin& tail, double x) {
    const ThinRates r = thin_rates(tail);
    return r.c_lo * std::pow(std::abs(x), 2.0 * r.gamma_lo) / (2.0 * r.gamma_lo);
}

double thin_smile(const Thin& tail, double t, double x) {
    require_otm(x);
    const ThinRates r = thin_rates(tail);
    return std::pow(t, r.gamma_lo - 1.0) * r.gamma_lo * std::pow(std::abs(x), 2.0 * (1.0 - r.gamma_lo)) /
           r.c_lo;
}

SmileAsymptote thin_asymptote(const Thin& tail) {
    const ThinRates r = thin_rates(tail);
    return {SmileEngine::Thin,
            {{r.gamma_lo - 1.0, 0, [r](double x) {
                  require_otm(x);
                  return r.gamma_lo * std::pow(std::abs(x), 2.0 * (1.0 - r.gamma_lo)) / r.c_lo;
              }}}};
}

double motm_exponent(const Thin& tail, double alpha) {
    return (1.0 - 2.0 * alpha) * (1.0 - thin_rates(tail).gamma_lo);
}

double motm_smile(const Thin& tail, double t, double x, double alpha) {
    require_otm(x);
    const ThinRates r = thin_rates(tail);
    if (!(alpha > 1.0 - r.gamma_hi && alpha < 0.5))
        throw Error(ErrorKind::InvalidRegime, "moving-strike exponent outside (1 - gamma_hi, 1/2)");
    return std::pow(t, -motm_exponent(tail, alpha)) * r.gamma_lo *
           std::pow(std::abs(x), 2.0 * (1.0 - r.gamma_lo)) / r.c_lo;
}

double moddev_rate(const ModelParams& p, const TailClass& tail, double gamma, double x) {
    if (const auto* b = std::get_if<Bounded>(&tail)) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw Error(ErrorKind::InvalidRegime, "bounded support needs a speed exponent in (0, 1)");
        return x * x / (2.0 * b->v_plus);
    }
    if (const auto* th = std::get_if<Thin>(&tail)) {
        const ThinRates r = thin_rates(*th);
        const bool at_edge = std::abs(gamma - r.gamma_hi) <= 1e-12 * r.gamma_hi;
        if (!(gamma > 0.0) || (gamma > r.gamma_hi && !at_edge))
            throw Error(ErrorKind::InvalidRegime, "thin tail needs a speed exponent in (0, gamma_hi]");
        if (!at_edge) return thin_rate(*th, x);
        if (x == 0.0) return 0.0;
        const auto [lo, hi] = lambda_domain(p);
        const double scale = r.c_hi / r.gamma_hi * std::pow(2.0, r.gamma_hi - 1.0);
        ConvexFn fn;
        fn.lo = lo;
        fn.hi = hi;
        fn.value = [&p, scale, r](double u) { return scale * std::pow(lambda_limit(p, u), r.gamma_hi); };
        fn.derivative = [&p, scale, r](double u) {
            return scale * r.gamma_hi * std::pow(lambda_limit(p, u), r.gamma_hi - 1.0) *
                   lambda_derivative(p, u);
        };
        return legendre(fn, x).f_star;
    }
    throw Error(ErrorKind::InvalidRegime, "no moderate-deviation rate for a fat tail");
}

// ---------------------------------------------------------------- fat tail

FatTailConstants fat_tail_constants(const ModelParams& p, const Fat& f, double t, double x) {
    require_fat(f);
    require_otm(x);
    const double m = f.m;
    const double w = f.omega;
    const double s = sgn(x);
    const double ax = std::abs(x);
    const double r2m = std::sqrt(2.0 * m);
    const double drift = 0.5 * (1.0 - p.rho * p.xi * m);

    FatTailConstants c{};
    c.rate = r2m * ax;
    c.h1 = fat_h1(p, f, x);
    c.h2 = fat_h2(f);

    const double delta = f.omega == 1 ? std::abs(f.g0) : (w - 1.0) * f.g0;
    c.b1 = -s * std::pow(2.0 * m, (1.0 - w) / (2.0 * w)) * std::pow(delta / ax, 1.0 / w) +
           (f.omega == 1 ? drift : 0.0);

    const double skew = 0.5 * (p.rho * p.xi * m + 1.0) * x;
    if (f.omega == 1) {
        const double a = std::abs(f.g0);
        c.log_C = skew + f.g1 + (a - 1.0) * std::log(ax) - std::lgamma(a) -
                  (1.0 + 0.5 * a) * std::log(2.0 * m) + (1.0 - 0.5 * a) * std::log(t);
        c.log_E = 0.0;
        c.remainder_dominates = false;
        return c;
    }

    const double g2 = *f.g2;
    const double fa = f.g1 * (w - 2.0) / (w - 1.0);
    const double fb = (g2 * (w - 2.0) - f.g1) / (w - 1.0);
    c.b2 = -s * fa * r2m / (2.0 * w * w) * c.b1 * c.b1;
    c.b3 = s * (c.b1 * c.b1 / (r2m * w) *
                (1.0 - 0.5 * w - 2.0 * fa * m * std::log(r2m * std::abs(c.b1)) - 2.0 * fb * m)) +
           drift;
    c.c1 = fat_c1(f, x);
    c.zeta = std::sqrt(2.0) * std::pow(2.0 * m / (f.g0 * f.g0), 0.125) * std::pow(ax, 0.75);
    c.log_C = skew + f.g0 * g2 + f.g0 / (4.0 * m) - std::log(2.0 * m * std::sqrt(2.0 * kPi) * c.zeta) +
              (0.875 + 0.25 * f.g0 * f.g1) * std::log(t);
    c.log_E = c.c1 / std::pow(t, 0.25);
    c.remainder_dominates = std::abs(c.log_C) > c.log_E;
    return c;
}

double fat_smile(const ModelParams& p, const Fat& f, double t, double x, int order) {
    require_fat(f);
    require_otm(x);
    if (order < 1 || order > 3) throw Error(ErrorKind::InvalidArgument, "order must be 1, 2 or 3");
    return fat_asymptote(p, f, order).implied_variance(t, x);
}

SmileAsymptote fat_asymptote(const ModelParams& p, const Fat& f, int order) {
    require_fat(f);
    SmileAsymptote a{f.omega == 1 ? SmileEngine::Fat1 : SmileEngine::Fat2, {}};
    a.terms.push_back({-0.5, 0, [f](double x) { return fat_leading(f, x); }});
    if (f.omega == 2 && order >= 2)
        a.terms.push_back({-0.25, 0, [f](double x) { return fat_c1(f, x) / (4.0 * f.m); }});
    if ((f.omega == 1 && order >= 2) || order >= 3) {
        a.terms.push_back({0.0, 0, [p, f](double x) { return fat_h1(p, f, x); }});
        const double h2 = fat_h2(f);
        a.terms.push_back({0.0, 1, [h2](double) { return h2; }});
    }
    return a;
}

FatCallExpansion fat_call_expansion(const ModelParams& p, const Fat& f, double t, double x) {
    const FatTailConstants c = fat_tail_constants(p, f, t, x);
    FatCallExpansion out;
    out.log_time_value = -c.rate / std::sqrt(t) + c.log_E + c.log_C;
    out.call_price = intrinsic(x) + std::exp(out.log_time_value);
    return out;
}

FatCallExpansion fat_call_expansion_gamma_route(const ModelParams& p, const Fat& f, double t, double x) {
    require_fat(f);
    require_otm(x);
    if (f.omega != 1) throw Error(ErrorKind::UnsupportedOmega, "the Gamma route needs omega = 1");
    const double a = std::abs(f.g0);
    const double ax = std::abs(x);
    const double m = f.m;
    const double scale_inv = a / ax;
    // Gamma(shape a, scale |x| / a) density at |x|.
    const double log_density = (a - 1.0) * std::log(ax) - std::lgamma(a) - scale_inv * ax + a * std::log(scale_inv);
    const double c2 = 0.5 * (p.rho * p.xi * m - 1.0) * x - f.g0;
    FatCallExpansion out;
    out.log_time_value = -std::sqrt(2.0 * m) * ax / std::sqrt(t) + x + c2 + f.g1 +
                         a * std::log(ax / (a * std::sqrt(2.0 * m))) + log_density - std::log(2.0 * m) +
                         (1.0 - 0.5 * a) * std::log(t);
    out.call_price = intrinsic(x) + std::exp(out.log_time_value);
    return out;
}

namespace {

double real_log_mgf(const ModelParams& p, const VarianceLaw& law, double t, double v) {
    return mixture_log_mgf(p, law, t, cplx(v, 0.0)).real();
}

// Derivative in v of log M(t, v) with the Ridders step kept inside (lo, hi).
double log_mgf_slope(const ModelParams& p, const VarianceLaw& law, double t, double v, double lo, double hi,
                     int order) {
    const double room = std::min(v - lo, hi - v);
    const double h0 = std::min(1e-2 * std::max(1.0, std::abs(v)), 0.5 * room);
    return finite_diff([&](double y) { return real_log_mgf(p, law, t, y); }, v, order, h0);
}

}  // namespace

double saddlepoint_exact(const ModelParams& p, const VarianceLaw& law, double t, double x) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    const auto [lo, hi] = real_moment_domain(p, law, t);
    const double rt = std::sqrt(t);
    auto gap = [&](double v) { return log_mgf_slope(p, law, t, v, lo, hi, 1) - x; };
    // Walk from the interior towards each edge until the slope passes x.
    auto edge = [&](double from, double to) {
        double prev = from;
        for (int k = 1; k <= 60; ++k) {
            const double frac = 1.0 - std::pow(0.5, k);
            const double v = from + frac * (to - from);
            const double gv = gap(v);
            if (!std::isfinite(gv)) break;
            if ((to > from && gv > 0.0) || (to < from && gv < 0.0)) return std::pair{prev, v};
            prev = v;
        }
        throw Error(ErrorKind::NoBracket, "log-strike beyond the attainable slope range");
    };
    const double mid = 0.5;
    const double g_mid = gap(mid);
    if (g_mid == 0.0) return mid * rt;
    const auto [a, b] = g_mid < 0.0 ? edge(mid, std::isfinite(hi) ? hi : 1e6)
                                    : edge(mid, std::isfinite(lo) ? lo : -1e6);
    const double v = root_find(gap, a, b, 1e-13 * std::max(1.0, std::abs(b)));
    return v * rt;
}

double saddle_curvature(const ModelParams& p, const VarianceLaw& law, double t, double u) {
    const auto [lo, hi] = real_moment_domain(p, law, t);
    const double rt = std::sqrt(t);
    return log_mgf_slope(p, law, t, u / rt, lo, hi, 2) / rt;
}

double ncx2_boundary_limit(const ModelParams& p, const ScaledNCX2& law) {
    const double m = 0.5 / law.scale;
    const double g0 = law.noncentrality / (4.0 * law.scale);
    const double lev = p.rho * p.xi * m;
    if (lev >= 1.0) return kInf;
    return std::sqrt(2.0 / m) * g0 / (1.0 - lev);
}

double atm_limit(const Randomiser& r) { return moments(r).mean_sqrt; }

}  // namespace randheston
