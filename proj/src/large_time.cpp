#include "randheston/large_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace randheston {

namespace {

double discriminant(const ModelParams& p, double u) {
    const double b = p.kappa - p.rho * p.xi * u;
    return b * b + p.xi * p.xi * u * (1.0 - u);
}

void require_admissible(const ModelParams& p, const Randomiser& r) {
    if (!check_admissible(p, r).admissible)
        throw Error(ErrorKind::NotAdmissible, "mgf endpoint too small for the large-time limit");
}

}  // namespace

double LargeTimeCgf::value(double u) const {
    if (u < u_minus || u > u_plus) return std::numeric_limits<double>::infinity();
    const ModelParams& p = params;
    const double b = p.kappa - p.rho * p.xi * u;
    const double d = std::sqrt(std::max(0.0, discriminant(p, u)));
    // b - d = -xi^2 u (1 - u) / (b + d) avoids the cancellation that the square roots downstream amplify.
    if (b >= 0.0 && b + d > 0.0) return -p.kappa * p.theta * u * (1.0 - u) / (b + d);
    return p.kappa * p.theta / (p.xi * p.xi) * (b - d);
}

double LargeTimeCgf::derivative(double u) const {
    const ModelParams& p = params;
    const double d = std::sqrt(std::max(0.0, discriminant(p, u)));
    const double dd = (-2.0 * p.rho * p.xi * (p.kappa - p.rho * p.xi * u) + p.xi * p.xi * (1.0 - 2.0 * u)) /
                      (2.0 * d);
    return p.kappa * p.theta / (p.xi * p.xi) * (-p.rho * p.xi - dd);
}

LargeTimeCgf large_time_cgf(const ModelParams& p) {
    validate(p);
    if (!(std::abs(p.rho) < 1.0))
        throw Error(ErrorKind::InvalidArgument, "large-time limit needs |rho| < 1");
    if (!(p.kappa > p.rho * p.xi))
        throw Error(ErrorKind::LeverageViolation, "large-time limit needs kappa > rho xi");
    const double rb2 = 1.0 - p.rho * p.rho;
    const double a = p.xi - 2.0 * p.kappa * p.rho;
    const double root = std::sqrt(a * a + 4.0 * p.kappa * p.kappa * rb2);
    const double scale = 1.0 / (2.0 * rb2 * p.xi);
    return {p, scale * (a - root), scale * (a + root), p.kappa * p.theta / (p.kappa - p.rho * p.xi)};
}

LegendreResult large_time_rate(const ModelParams& p, double x) {
    const LargeTimeCgf cgf = large_time_cgf(p);
    ConvexFn fn;
    fn.lo = cgf.u_minus;
    fn.hi = cgf.u_plus;
    fn.value = [cgf](double u) { return cgf.value(u); };
    fn.derivative = [cgf](double u) { return cgf.derivative(u); };
    return legendre(fn, x);
}

Admissibility check_admissible(const ModelParams& p, const Randomiser& r) {
    const LargeTimeCgf cgf = large_time_cgf(p);
    const double need = std::max(cgf.u_minus * (cgf.u_minus - 1.0), cgf.u_plus * (cgf.u_plus - 1.0));
    const double m = mgf_endpoint(r);
    if (!std::isfinite(m)) return {true, std::numeric_limits<double>::infinity()};
    const double margin = m * p.xi * p.xi - need;
    return {margin > 0.0, margin};
}

double large_time_smile(const ModelParams& p, const Randomiser& r, double x) {
    require_admissible(p, r);
    const LargeTimeCgf cgf = large_time_cgf(p);
    const double left = -0.5 * p.theta;
    const double right = 0.5 * cgf.theta_bar;
    if (x == right) return cgf.theta_bar;
    if (x == left) return p.theta;
    const double ls = large_time_rate(p, x).f_star;
    const double root = 2.0 * std::sqrt(std::max(0.0, ls * (ls - x)));
    const bool inner = x > left && x < right;
    return 2.0 * (2.0 * ls - x + (inner ? root : -root));
}

double fixed_strike_limit(const ModelParams& p, const Randomiser& r) {
    require_admissible(p, r);
    const double k = p.kappa, th = p.theta, xi = p.xi, rho = p.rho;
    // Rationalised form of (4 k th / (xi^2 (1 - rho^2))) (-2k + rho xi + sqrt(xi^2 + 4k^2 - 4 k rho xi)).
    return 4.0 * k * th / (std::sqrt(xi * xi + 4.0 * k * k - 4.0 * k * rho * xi) + 2.0 * k - rho * xi);
}

}  // namespace randheston
