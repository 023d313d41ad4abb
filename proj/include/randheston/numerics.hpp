#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "randheston/types.hpp"

namespace randheston {

using RealFn = std::function<double(double)>;

/// Smooth convex function on the open interval (lo, hi); either end may be infinite.
struct ConvexFn {
    RealFn value;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::optional<RealFn> derivative;
};

enum class LegendreStatus { Interior, Boundary };

struct LegendreResult {
    double x = 0.0;
    double f_star = 0.0;
    double u_star = 0.0;
    LegendreStatus status = LegendreStatus::Interior;
};

/// Root of fn inside [lo, hi]; needs a sign change. TOMS 748 bracketing.
double root_find(const RealFn& fn, double lo, double hi, double tol = 1e-12, int max_iter = 300);

/// Safeguarded Newton: falls back to bisection whenever a step leaves the bracket.
double root_find_newton(const std::function<std::pair<double, double>(double)>& fn_and_deriv,
                        double lo, double hi, double tol = 1e-12, int max_iter = 300);

/// sup_u { u x - f(u) } over the domain of f.
LegendreResult legendre(const ConvexFn& fn, double x);

/// Minimiser of a unimodal function on [lo, hi] (Brent), returned with its value.
std::pair<double, double> minimise(const RealFn& fn, double lo, double hi, double tol = 1e-10);

/// Adaptive Gauss-Kronrod on [a, b]; infinite limits are mapped internally.
double quadrature(const RealFn& fn, double a, double b, double rel_tol = 1e-10);
cplx quadrature_complex(const std::function<cplx(double)>& fn, double a, double b,
                        double rel_tol = 1e-10);

/// Gauss-Kronrod bisected until each piece's error estimate is below its share of abs_tol;
/// suited to tails whose value is small next to an already accumulated total.
double quadrature_abs(const RealFn& fn, double a, double b, double abs_tol, int max_depth = 12);

/// Central difference derivative of order 1 or 2 with Richardson (Ridders) extrapolation.
double finite_diff(const RealFn& fn, double u, int order = 1, double h0 = 1e-2);

}  // namespace randheston
