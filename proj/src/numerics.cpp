#include "randheston/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace randheston {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

double root_find(const RealFn& fn, double lo, double hi, double tol, int max_iter) {
    if (lo > hi) std::swap(lo, hi);
    const double flo = fn(lo);
    const double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw Error(ErrorKind::NoBracket, "no sign change on bracket");
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto r = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, stop, iters);
    if (iters >= static_cast<std::uintmax_t>(max_iter) && !stop(r.first, r.second))
        throw Error(ErrorKind::MaxIterations, "root_find did not converge");
    return 0.5 * (r.first + r.second);
}

double root_find_newton(const std::function<std::pair<double, double>(double)>& fn_and_deriv,
                        double lo, double hi, double tol, int max_iter) {
    if (lo > hi) std::swap(lo, hi);
    double flo = fn_and_deriv(lo).first;
    const double fhi = fn_and_deriv(hi).first;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw Error(ErrorKind::NoBracket, "no sign change on bracket");
    const bool increasing = flo < 0.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const auto [f, df] = fn_and_deriv(x);
        if (f == 0.0) return x;
        if ((f < 0.0) == increasing) lo = x; else hi = x;
        double next = x - f / df;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
        x = next;
    }
    throw Error(ErrorKind::MaxIterations, "root_find_newton did not converge");
}

std::pair<double, double> minimise(const RealFn& fn, double lo, double hi, double tol) {
    // Golden-section/parabolic search; accuracy in the abscissa is ~sqrt(eps) at best.
    const int bits = std::clamp(static_cast<int>(-std::log2(std::max(tol, 1e-16))), 8, 52 / 2 + 1);
    std::uintmax_t iters = 500;
    auto safe = [&fn](double u) { return finite_or_inf(fn(u)); };
    const auto r = boost::math::tools::brent_find_minima(safe, lo, hi, bits, iters);
    return {r.first, r.second};
}

LegendreResult legendre(const ConvexFn& fn, double x) {
    auto g = [&](double u) { return finite_or_inf(fn.value(u)) - u * x; };
    const bool lo_finite = std::isfinite(fn.lo);
    const bool hi_finite = std::isfinite(fn.hi);

    double start = 0.0;
    if (lo_finite && hi_finite) start = 0.5 * (fn.lo + fn.hi);
    else if (lo_finite) start = std::max(0.0, fn.lo + 1.0);
    else if (hi_finite) start = std::min(0.0, fn.hi - 1.0);
    if (!(start > fn.lo && start < fn.hi)) start = 0.5 * (fn.lo + fn.hi);

    auto expand = [&](double dir) {
        double step = std::max(1.0, std::abs(start));
        double prev = start;
        double gprev = g(prev);
        for (int i = 0; i < 200; ++i) {
            const double next = start + dir * step;
            const double gnext = g(next);
            if (gnext > gprev) return next;
            prev = next;
            gprev = gnext;
            step *= 2.0;
        }
        throw Error(ErrorKind::NonConvex, "conjugate is unbounded in this direction");
    };
    // Endpoints are nudged inwards; values there may be infinite.
    const double a = lo_finite ? fn.lo + 1e-13 * std::max(1.0, std::abs(fn.lo)) : expand(-1.0);
    const double b = hi_finite ? fn.hi - 1e-13 * std::max(1.0, std::abs(fn.hi)) : expand(+1.0);

    LegendreResult res;
    res.x = x;
    double u = 0.0;
    if (fn.derivative) {
        const RealFn& df = *fn.derivative;
        auto slope = [&](double v) { return df(v) - x; };
        const double sa = slope(a);
        const double sb = slope(b);
        if (std::isfinite(sa) && sa >= 0.0) {
            u = a;
            res.status = lo_finite ? LegendreStatus::Boundary : LegendreStatus::Interior;
        } else if (std::isfinite(sb) && sb <= 0.0) {
            u = b;
            res.status = hi_finite ? LegendreStatus::Boundary : LegendreStatus::Interior;
        } else {
            // Shrink the bracket until both slopes are finite.
            double lo = a, hi = b;
            while (!std::isfinite(slope(lo))) lo = 0.5 * (lo + start);
            while (!std::isfinite(slope(hi))) hi = 0.5 * (hi + start);
            if (slope(lo) > 0.0 || slope(hi) < 0.0) {
                u = minimise(g, a, b).first;
            } else {
                u = root_find(slope, lo, hi, 1e-14 * std::max(1.0, std::abs(hi - lo)));
            }
        }
    } else {
        u = minimise(g, a, b).first;
        const double width = b - a;
        if ((lo_finite && u - a < 1e-8 * width) || (hi_finite && b - u < 1e-8 * width))
            res.status = LegendreStatus::Boundary;
    }
    if (res.status == LegendreStatus::Boundary) {
        const double end = (lo_finite && std::abs(u - fn.lo) < std::abs(u - fn.hi)) ? fn.lo : fn.hi;
        if (std::isfinite(fn.value(end))) u = end;
    }
    res.u_star = u;
    res.f_star = u * x - fn.value(u);
    if (!std::isfinite(res.f_star)) throw Error(ErrorKind::NonConvex, "non-finite conjugate value");
    // Local convexity probe around the maximiser.
    const double h = 1e-4 * std::max(1.0, std::abs(u));
    const double gm = g(u);
    if ((u - h > fn.lo && g(u - h) < gm - 1e-9 * (1.0 + std::abs(gm))) ||
        (u + h < fn.hi && g(u + h) < gm - 1e-9 * (1.0 + std::abs(gm))))
        throw Error(ErrorKind::NonConvex, "maximiser is not a local maximum");
    return res;
}

double quadrature(const RealFn& fn, double a, double b, double rel_tol) {
    double err = 0.0;
    const double r =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 20, rel_tol, &err);
    if (!std::isfinite(r) || err > 1e3 * rel_tol * std::abs(r) + 1e-300)
        throw Error(ErrorKind::NonConvergent, "quadrature error estimate too large");
    return r;
}

cplx quadrature_complex(const std::function<cplx(double)>& fn, double a, double b, double rel_tol) {
    double err = 0.0;
    const cplx r =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 20, rel_tol, &err);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
        err > 1e3 * rel_tol * std::abs(r) + 1e-300)
        throw Error(ErrorKind::NonConvergent, "quadrature error estimate too large");
    return r;
}

double quadrature_abs(const RealFn& fn, double a, double b, double abs_tol, int max_depth) {
    double err = 0.0;
    const double r = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 0, 0.0, &err);
    if (err <= abs_tol || max_depth <= 0 || !std::isfinite(r)) return r;
    const double mid = 0.5 * (a + b);
    return quadrature_abs(fn, a, mid, 0.5 * abs_tol, max_depth - 1) +
           quadrature_abs(fn, mid, b, 0.5 * abs_tol, max_depth - 1);
}

double finite_diff(const RealFn& fn, double u, int order, double h0) {
    if (order != 1 && order != 2) throw Error(ErrorKind::InvalidArgument, "order must be 1 or 2");
    constexpr int kTab = 10;
    constexpr double kCon = 1.4;
    constexpr double kCon2 = kCon * kCon;
    const double fu = order == 2 ? fn(u) : 0.0;
    auto stencil = [&](double h) {
        if (order == 1) return (fn(u + h) - fn(u - h)) / (2.0 * h);
        return (fn(u + h) - 2.0 * fu + fn(u - h)) / (h * h);
    };
    std::array<std::array<double, kTab>, kTab> a{};
    double h = h0;
    a[0][0] = stencil(h);
    double err = kInf;
    double ans = a[0][0];
    for (int i = 1; i < kTab; ++i) {
        h /= kCon;
        a[0][i] = stencil(h);
        double fac = kCon2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kCon2;
            const double errt =
                std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= err) {
                err = errt;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return ans;
}

}  // namespace randheston
