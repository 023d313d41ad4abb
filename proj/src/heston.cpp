#include "randheston/heston.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "randheston/numerics.hpp"

namespace randheston {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// a cot(a), with its series near the removable singularity.
double a_cot_a(double a) {
    if (std::abs(a) < 1e-4) {
        const double a2 = a * a;
        return 1.0 - a2 / 3.0 - a2 * a2 / 45.0 - 2.0 * a2 * a2 * a2 / 945.0;
    }
    return a * std::cos(a) / std::sin(a);
}

double a_cot_a_prime(double a) {
    if (std::abs(a) < 1e-4) {
        const double a2 = a * a;
        return -2.0 * a / 3.0 - 4.0 * a * a2 / 45.0 - 12.0 * a * a2 * a2 / 945.0;
    }
    const double s = std::sin(a);
    return std::cos(a) / s - a / (s * s);
}

void require_in_domain(const ModelParams& p, double u) {
    const auto [lo, hi] = lambda_domain(p);
    if (!(u > lo && u < hi))
        throw Error(ErrorKind::OutsideDomain, "u outside the domain of the small-time limit");
}

}  // namespace

ModelParams ModelParams::make(double kappa, double theta, double xi, double rho) {
    ModelParams p{kappa, theta, xi, rho};
    validate(p);
    return p;
}

void validate(const ModelParams& p) {
    if (!(p.kappa > 0.0) || !(p.theta > 0.0) || !(p.xi > 0.0) || !(std::abs(p.rho) <= 1.0))
        throw Error(ErrorKind::InvalidArgument,
                    "model parameters need kappa, theta, xi > 0 and |rho| <= 1");
}

double ModelParams::rho_bar() const { return std::sqrt(std::max(0.0, 1.0 - rho * rho)); }

bool ModelParams::large_time_ok() const { return std::abs(rho) < 1.0 && kappa > rho * xi; }

cplx d(const ModelParams& p, cplx u) {
    const cplx b = p.kappa - p.rho * p.xi * u;
    cplx r = std::sqrt(b * b + p.xi * p.xi * u * (1.0 - u));
    if (r.real() < 0.0) r = -r;
    return r;
}

cplx g(const ModelParams& p, cplx u) {
    const cplx b = p.kappa - p.rho * p.xi * u;
    const cplx dd = d(p, u);
    return (b - dd) / (b + dd);
}

AffinePair affine(const ModelParams& p, double t, cplx u) {
    if (u == cplx(0.0)) return {0.0, 0.0};
    const double xi2 = p.xi * p.xi;
    const double scale = p.kappa * p.theta / xi2;
    const cplx b = p.kappa - p.rho * p.xi * u;
    const cplx dd = d(p, u);
    if (std::abs(dd) * std::max(t, 1.0) < 1e-7 * (std::abs(b) + 1.0)) {
        // d -> 0 limit of the closed form.
        const cplx D = b * b * t / (xi2 * (2.0 + b * t));
        const cplx C = scale * (b * t - 2.0 * std::log(1.0 + 0.5 * b * t));
        return {C, D};
    }
    const cplx gg = (b - dd) / (b + dd);
    const cplx e = std::exp(-dd * t);
    const cplx D = (b - dd) / xi2 * (1.0 - e) / (1.0 - gg * e);
    const cplx C = scale * ((b - dd) * t - 2.0 * std::log((1.0 - gg * e) / (1.0 - gg)));
    return {C, D};
}

cplx heston_C(const ModelParams& p, double t, cplx u) { return affine(p, t, u).C; }
cplx heston_D(const ModelParams& p, double t, cplx u) { return affine(p, t, u).D; }

cplx c_log_argument(const ModelParams& p, double t, cplx u) {
    const cplx gg = g(p, u);
    return (1.0 - gg * std::exp(-d(p, u) * t)) / (1.0 - gg);
}

double BranchTracker::observe(cplx value) {
    const double arg = std::arg(value);
    if (!started_) {
        started_ = true;
        last_arg_ = arg;
        unwrapped_ = arg;
        return unwrapped_;
    }
    double step = arg - last_arg_;
    // A principal-branch wrap shows up as a step near +-2 pi.
    if (step > kPi) step -= 2.0 * kPi;
    else if (step < -kPi) step += 2.0 * kPi;
    if (std::abs(step) > 0.5 * kPi)
        throw Error(ErrorKind::BranchFailure, "path too coarse to follow the branch of the logarithm");
    last_arg_ = arg;
    unwrapped_ += step;
    return unwrapped_;
}

std::pair<double, double> lambda_domain(const ModelParams& p) {
    const double rb = p.rho_bar();
    if (rb == 0.0) {
        // Degenerate correlation: Lambda(u) = u^2 / (2 - xi rho u).
        const double pole = 2.0 / (p.xi * p.rho);
        constexpr double inf = std::numeric_limits<double>::infinity();
        return p.rho > 0.0 ? std::pair{-inf, pole} : std::pair{pole, inf};
    }
    const double scale = 2.0 / (p.xi * rb);
    if (p.rho == 0.0) return {-kPi / p.xi, kPi / p.xi};
    const double at = std::atan(rb / p.rho);
    if (p.rho < 0.0) return {scale * at, scale * (at + kPi)};
    return {scale * (at - kPi), scale * at};
}

double lambda_limit(const ModelParams& p, double u) {
    require_in_domain(p, u);
    const double a = 0.5 * p.xi * p.rho_bar() * u;
    const double q = 2.0 * a_cot_a(a) - p.xi * p.rho * u;
    return u * u / q;
}

double lambda_derivative(const ModelParams& p, double u) {
    require_in_domain(p, u);
    const double rb = p.rho_bar();
    const double a = 0.5 * p.xi * rb * u;
    const double q = 2.0 * a_cot_a(a) - p.xi * p.rho * u;
    const double dq = p.xi * rb * a_cot_a_prime(a) - p.xi * p.rho;
    return (2.0 * u * q - u * u * dq) / (q * q);
}

double lambda_second(const ModelParams& p, double u) {
    require_in_domain(p, u);
    const auto [lo, hi] = lambda_domain(p);
    double h = 1e-5 * (std::isfinite(hi - lo) ? hi - lo : 10.0);
    h = std::min({h, 0.25 * (u - lo), 0.25 * (hi - u)});
    // Richardson on the first derivative's central difference.
    return finite_diff([&p](double v) { return lambda_derivative(p, v); }, u, 1, 64.0 * h);
}

AffineCoeffs affine_coeffs(const ModelParams& p, double u) {
    const double s = u < 0.0 ? -1.0 : 1.0;
    const double rb = p.rho_bar();
    const double k = p.kappa, r = p.rho, x = p.xi;
    AffineCoeffs c;
    c.d0 = x * rb * s;
    c.d1 = kI * ((2.0 * k * r - x) / (2.0 * rb)) * s;
    c.g0 = (kI * r - rb * s) / (kI * r + rb * s);
    const cplx den = rb + kI * r * s;
    c.g1 = (2.0 * k - r * x) * s / (x * rb * den * den);
    c.d2 = (k * k - c.d1 * c.d1) / (2.0 * c.d0 * u);
    const cplx m = r * x - kI * c.d0;
    c.g2 = ((k * k - c.d1 * c.d1) * r * x / c.d0 + (k - c.d1) * m * c.g1) / (m * m);
    return c;
}

cplx D0_beta_complex(const ModelParams& p, double beta, double u) {
    if (u == 0.0) throw Error(ErrorKind::OutsideDomain, "second-order term undefined at u = 0");
    require_in_domain(p, u);
    const AffineCoeffs c = affine_coeffs(p, u);
    const double xi2 = p.xi * p.xi;
    const cplx e = std::exp(-kI * c.d0 * u);
    const cplx P = p.rho * p.xi + kI * c.d0;
    const cplx den = 1.0 - c.g0 * e;
    const cplx first = (1.0 - e) / (xi2 * den) * (P * beta * u + p.kappa - c.d1);
    const cplx second = kI * c.g1 * P / xi2 * (1.0 - e) / (den * den) * e;
    const cplx third = -P * u / xi2 * (c.d1 - kI * c.d0 * u * beta) / (den * den) * (1.0 - c.g0) * e;
    return first + second + third;
}

cplx C0_complex(const ModelParams& p, double u) {
    if (u == 0.0) throw Error(ErrorKind::OutsideDomain, "second-order term undefined at u = 0");
    require_in_domain(p, u);
    const AffineCoeffs c = affine_coeffs(p, u);
    const cplx e = std::exp(-kI * c.d0 * u);
    const cplx P = p.rho * p.xi + kI * c.d0;
    return -(p.kappa * p.theta / (p.xi * p.xi)) *
           (P * u + 2.0 * std::log((1.0 - c.g0 * e) / (1.0 - c.g0)));
}

double D0_beta(const ModelParams& p, double beta, double u) { return D0_beta_complex(p, beta, u).real(); }
double C0(const ModelParams& p, double u) { return C0_complex(p, u).real(); }

namespace {

// Time at which D(., u) blows up for real u; infinite when it never does.
double explosion_time(const ModelParams& p, double u) {
    const double b = p.kappa - p.rho * p.xi * u;
    const double delta = b * b - p.xi * p.xi * u * (u - 1.0);
    if (delta >= 0.0) {
        if (b >= 0.0) return std::numeric_limits<double>::infinity();
        const double s = std::sqrt(delta);
        return std::log((b - s) / (b + s)) / s;
    }
    const double beta = std::sqrt(-delta);
    const double phi = std::atan2(beta, b);
    return 2.0 * (kPi - phi) / beta;
}

double explosion_edge(const ModelParams& p, double t, double dir) {
    // Moments in [0, 1] never explode; walk outwards from the nearest end.
    const double base = dir > 0.0 ? 1.0 : 0.0;
    double inner = base;
    double step = 1.0;
    double outer = base + dir * step;
    int guard = 0;
    while (explosion_time(p, outer) > t) {
        inner = outer;
        step *= 2.0;
        outer = base + dir * step;
        if (++guard > 200) return dir * std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 200 && std::abs(outer - inner) > 1e-13 * std::max(1.0, std::abs(outer)); ++i) {
        const double mid = 0.5 * (inner + outer);
        if (explosion_time(p, mid) > t) inner = mid; else outer = mid;
    }
    return inner;
}

}  // namespace

std::pair<double, double> explosion_bounds(const ModelParams& p, double t) {
    return {explosion_edge(p, t, -1.0), explosion_edge(p, t, +1.0)};
}

}  // namespace randheston
