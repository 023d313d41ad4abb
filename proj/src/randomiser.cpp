#include "randheston/randomiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "randheston/numerics.hpp"
#include "randheston/special.hpp"

namespace randheston {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

// (1 - exp(-w)) / w, continuous at w = 0.
cplx one_minus_exp_over(cplx w) {
    if (std::abs(w) < 0.1) {
        cplx term = 1.0, sum = 1.0;
        for (int n = 2; n < 14; ++n) {
            term *= -w / static_cast<double>(n);
            sum += term;
        }
        return sum;
    }
    return (1.0 - std::exp(-w)) / w;
}

cplx uniform_log_mgf(const Uniform& u, cplx z) {
    const double width = u.hi - u.lo;
    if (z.real() >= 0.0) return u.hi * z + std::log(one_minus_exp_over(width * z));
    return u.lo * z + std::log(one_minus_exp_over(-width * z));
}

double uniform_ratio(const Uniform& u, double z) {
    const double width = u.hi - u.lo;
    const double w = width * z;
    if (std::abs(w) < 1e-4) return 0.5 * (u.lo + u.hi) + width * width * z / 12.0;
    if (z > 0.0) {
        const double e = std::exp(-w);
        return (u.hi - u.lo * e) / (1.0 - e) - 1.0 / z;
    }
    const double e = std::exp(w);
    return (u.lo - u.hi * e) / (1.0 - e) - 1.0 / z;
}

// Weibull integrals after v = s y: int k y^(k-1) exp(w y - y^k) y^power dy, scaled by exp(-shift).
struct WeibullIntegral {
    cplx value;
    double shift;
};

WeibullIntegral weibull_integral(const Weibull& wb, cplx w, int power) {
    const double k = wb.shape;
    const double km1 = k - 1.0 + power;
    auto psi = [&](double y) { return w.real() * y - std::pow(y, k) + km1 * std::log(y); };
    auto dpsi = [&](double y) { return w.real() + km1 / y - k * std::pow(y, k - 1.0); };

    double hi = 1.0;
    while (dpsi(hi) > 0.0) hi *= 2.0;
    double lo = 1.0;
    while (dpsi(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
    const double peak = root_find(dpsi, lo, hi, 1e-14 * hi);
    const double top = psi(peak);
    constexpr double kDrop = 50.0;

    // Exponent relative to the peak in d = y - peak; forming psi(y) - top directly cancels at large w.
    const double pk = std::pow(peak, k);
    auto rel = [&](double d) {
        const double l = std::log1p(d / peak);
        return w.real() * d - pk * std::expm1(k * l) + km1 * l;
    };
    double right = peak + 1.0;
    while (rel(right) > -kDrop) right *= 2.0;
    right = root_find([&](double d) { return rel(d) + kDrop; }, 0.0, right, 1e-12 * right);
    double left = -peak;
    if (km1 > 0.0 && rel(-peak * (1.0 - 1e-12)) < -kDrop)
        left = root_find([&](double d) { return rel(d) + kDrop; }, -peak * (1.0 - 1e-12), 0.0, 1e-12 * peak);

    auto integrand = [&](double d) -> cplx {
        if (d <= -peak) return 0.0;
        return k * std::exp(cplx(rel(d), w.imag() * (peak + d)));
    };
    // Fixed Gauss-Legendre panels, each short enough to hold under one oscillation.
    const double span = right - left;
    const int panels =
        std::clamp(static_cast<int>(std::ceil(std::abs(w.imag()) * span / std::numbers::pi)) + 6, 6, 4000);
    cplx total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = left + span * i / panels;
        const double b = left + span * (i + 1) / panels;
        total += boost::math::quadrature::gauss<double, 30>::integrate(integrand, a, b);
    }
    return {total, top};
}

cplx weibull_log_mgf(const Weibull& wb, cplx z) {
    const auto r = weibull_integral(wb, z * wb.scale, 0);
    return r.shift + std::log(r.value);
}

double lgamma_ratio_sqrt(double a) {
    // Gamma(a + 1/2) / Gamma(a)
    return std::exp(std::lgamma(a + 0.5) - std::lgamma(a));
}

double ncx2_mean_sqrt(const ScaledNCX2& n) {
    const double mu = 0.5 * n.noncentrality;
    const int jmax = static_cast<int>(mu + 40.0 * std::sqrt(mu) + 60.0);
    double sum = 0.0;
    for (int j = 0; j <= jmax; ++j) {
        const double logw = -mu + (j > 0 ? j * std::log(mu) : 0.0) - std::lgamma(j + 1.0);
        const double half_dof = 0.5 * n.dof + j;
        sum += std::exp(logw) * std::numbers::sqrt2 * lgamma_ratio_sqrt(half_dof);
    }
    return std::sqrt(n.scale) * sum;
}

bool weibull_is_exponential(const Weibull& w) { return w.shape == 1.0; }

void check_domain(const Randomiser& r, double re_z) {
    if (!(re_z < mgf_endpoint(r)))
        throw Error(ErrorKind::OutsideDomain, "mgf argument beyond the endpoint of " + name(r));
}

}  // namespace

void validate(const Randomiser& r) {
    std::visit(overloaded{
                   [](const Dirac& d) { require(d.v0 > 0.0, "Dirac needs v0 > 0"); },
                   [](const Uniform& u) {
                       require(u.lo >= 0.0 && u.hi > u.lo, "Uniform needs 0 <= lo < hi");
                   },
                   [](const Exponential& e) { require(e.rate > 0.0, "Exponential needs rate > 0"); },
                   [](const Gamma& g) { require(g.shape > 0.0 && g.rate > 0.0, "Gamma needs shape, rate > 0"); },
                   [](const ScaledNCX2& n) {
                       require(n.scale > 0.0 && n.dof > 0.0 && n.noncentrality > 0.0,
                               "ScaledNCX2 needs scale, dof, noncentrality > 0");
                   },
                   [](const FoldedGaussian& f) { require(f.l1 > 0.0, "FoldedGaussian needs l1 > 0"); },
                   [](const Weibull& w) {
                       require(w.scale > 0.0 && w.shape >= 1.0, "Weibull needs scale > 0 and shape >= 1");
                   },
               },
               r);
}

std::string name(const Randomiser& r) {
    return std::visit(overloaded{
                          [](const Dirac&) { return std::string("dirac"); },
                          [](const Uniform&) { return std::string("uniform"); },
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const Gamma&) { return std::string("gamma"); },
                          [](const ScaledNCX2&) { return std::string("ncx2"); },
                          [](const FoldedGaussian&) { return std::string("folded_gaussian"); },
                          [](const Weibull&) { return std::string("weibull"); },
                      },
                      r);
}

double mgf_endpoint(const Randomiser& r) {
    return std::visit(overloaded{
                          [](const Exponential& e) { return e.rate; },
                          [](const Gamma& g) { return g.rate; },
                          [](const ScaledNCX2& n) { return 0.5 / n.scale; },
                          [](const Weibull& w) { return weibull_is_exponential(w) ? 1.0 / w.scale : kInf; },
                          [](const auto&) { return kInf; },
                      },
                      r);
}

cplx log_mgf(const Randomiser& r, cplx z) {
    check_domain(r, z.real());
    return std::visit(
        overloaded{
            [&](const Dirac& d) -> cplx { return d.v0 * z; },
            [&](const Uniform& u) -> cplx { return uniform_log_mgf(u, z); },
            [&](const Exponential& e) -> cplx { return -std::log(1.0 - z / e.rate); },
            [&](const Gamma& g) -> cplx { return -g.shape * std::log(1.0 - z / g.rate); },
            [&](const ScaledNCX2& n) -> cplx {
                const cplx q = 1.0 - 2.0 * n.scale * z;
                return -0.5 * n.dof * std::log(q) + n.scale * n.noncentrality * z / q;
            },
            [&](const FoldedGaussian& f) -> cplx {
                if (z == cplx(0.0)) return 0.0;
                const cplx y = z / (2.0 * std::sqrt(f.l1));
                return special::log_faddeeva(cplx(y.imag(), -y.real()));
            },
            [&](const Weibull& w) -> cplx {
                if (weibull_is_exponential(w)) return -std::log(1.0 - z * w.scale);
                if (z == cplx(0.0)) return 0.0;
                return weibull_log_mgf(w, z);
            },
        },
        r);
}

double log_mgf(const Randomiser& r, double z) { return log_mgf(r, cplx(z, 0.0)).real(); }

double mgf_derivative_ratio(const Randomiser& r, double z) {
    check_domain(r, z);
    return std::visit(overloaded{
                          [&](const Dirac& d) { return d.v0; },
                          [&](const Uniform& u) { return uniform_ratio(u, z); },
                          [&](const Exponential& e) { return 1.0 / (e.rate - z); },
                          [&](const Gamma& g) { return g.shape / (g.rate - z); },
                          [&](const ScaledNCX2& n) {
                              const double q = 1.0 - 2.0 * n.scale * z;
                              return n.dof * n.scale / q + n.scale * n.noncentrality / (q * q);
                          },
                          [&](const FoldedGaussian& f) {
                              const double s = std::sqrt(f.l1);
                              const double y = z / (2.0 * s);
                              const double m = special::erfcx(-y);
                              return (y + 1.0 / (std::sqrt(std::numbers::pi) * m)) / s;
                          },
                          [&](const Weibull& w) {
                              if (weibull_is_exponential(w)) return w.scale / (1.0 - z * w.scale);
                              const auto num = weibull_integral(w, z * w.scale, 1);
                              const auto den = weibull_integral(w, z * w.scale, 0);
                              return w.scale * std::exp(num.shift - den.shift) * num.value.real() /
                                     den.value.real();
                          },
                      },
                      r);
}

TailClass tail_class(const Randomiser& r) {
    return std::visit(overloaded{
                          [](const Dirac& d) -> TailClass { return Bounded{d.v0}; },
                          [](const Uniform& u) -> TailClass { return Bounded{u.hi}; },
                          [](const Exponential& e) -> TailClass {
                              return Fat{e.rate, -1.0, std::log(e.rate), std::nullopt, 1};
                          },
                          [](const Gamma& g) -> TailClass {
                              return Fat{g.rate, -g.shape, g.shape * std::log(g.rate), std::nullopt, 1};
                          },
                          [](const ScaledNCX2& n) -> TailClass {
                              const double a = n.scale, q = n.dof, l = n.noncentrality;
                              return Fat{0.5 / a, l / (4.0 * a), -2.0 * q * a / l,
                                         -2.0 * a * (1.0 + (q / l) * std::log(2.0 * a)), 2};
                          },
                          [](const FoldedGaussian& f) -> TailClass { return Thin{f.l1, 2.0}; },
                          [](const Weibull& w) -> TailClass {
                              if (weibull_is_exponential(w)) {
                                  const double m = 1.0 / w.scale;
                                  return Fat{m, -1.0, std::log(m), std::nullopt, 1};
                              }
                              return Thin{std::pow(w.scale, -w.shape), w.shape};
                          },
                      },
                      r);
}

Moments moments(const Randomiser& r) {
    constexpr double pi = std::numbers::pi;
    return std::visit(
        overloaded{
            [](const Dirac& d) { return Moments{d.v0, 0.0, std::sqrt(d.v0)}; },
            [](const Uniform& u) {
                const double w = u.hi - u.lo;
                const double ms = (2.0 / 3.0) * (std::pow(u.hi, 1.5) - std::pow(u.lo, 1.5)) / w;
                return Moments{0.5 * (u.lo + u.hi), w * w / 12.0, ms};
            },
            [](const Exponential& e) {
                return Moments{1.0 / e.rate, 1.0 / (e.rate * e.rate), 0.5 * std::sqrt(pi / e.rate)};
            },
            [](const Gamma& g) {
                return Moments{g.shape / g.rate, g.shape / (g.rate * g.rate),
                               lgamma_ratio_sqrt(g.shape) / std::sqrt(g.rate)};
            },
            [](const ScaledNCX2& n) {
                const double a = n.scale;
                return Moments{a * (n.dof + n.noncentrality), 2.0 * a * a * (n.dof + 2.0 * n.noncentrality),
                               ncx2_mean_sqrt(n)};
            },
            [](const FoldedGaussian& f) {
                return Moments{1.0 / std::sqrt(pi * f.l1), 0.5 / f.l1 - 1.0 / (pi * f.l1),
                               std::tgamma(0.75) / (std::sqrt(pi) * std::pow(f.l1, 0.25))};
            },
            [](const Weibull& w) {
                const double g1 = std::tgamma(1.0 + 1.0 / w.shape);
                const double g2 = std::tgamma(1.0 + 2.0 / w.shape);
                return Moments{w.scale * g1, w.scale * w.scale * (g2 - g1 * g1),
                               std::sqrt(w.scale) * std::tgamma(1.0 + 0.5 / w.shape)};
            },
        },
        r);
}

Randomiser calibrate_to_spot(const Randomiser& tmpl, double v0) {
    if (!(v0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "v0 must be positive");
    if (std::holds_alternative<Dirac>(tmpl)) return Dirac{v0};

    auto with = [&tmpl](double p) -> Randomiser {
        return std::visit(overloaded{
                              [p](const Dirac&) -> Randomiser { return Dirac{p}; },
                              [p](const Uniform& u) -> Randomiser { return Uniform{u.lo, p}; },
                              [p](const Exponential&) -> Randomiser { return Exponential{p}; },
                              [p](const Gamma& g) -> Randomiser { return Gamma{g.shape, p}; },
                              [p](const ScaledNCX2& n) -> Randomiser {
                                  return ScaledNCX2{p, n.dof, n.noncentrality};
                              },
                              [p](const FoldedGaussian&) -> Randomiser { return FoldedGaussian{p}; },
                              [p](const Weibull& w) -> Randomiser { return Weibull{p, w.shape}; },
                          },
                          tmpl);
    };
    double lo = std::log(1e-8), hi = std::log(1e8);
    if (const auto* u = std::get_if<Uniform>(&tmpl)) lo = std::log(u->lo + 1e-8 + 1e-12 * u->lo);
    const double target = std::sqrt(v0);
    auto gap = [&](double y) {
        const Randomiser cand = with(std::exp(y));
        return moments(cand).mean_sqrt - target;
    };
    try {
        const double y = root_find(gap, lo, hi, 1e-13);
        const Randomiser out = with(std::exp(y));
        validate(out);
        return out;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NoBracket || e.kind() == ErrorKind::MaxIterations)
            throw Error(ErrorKind::CalibrationFailure, "no calibration bracket for " + name(tmpl));
        throw;
    }
}

double thin_log_mgf_asymptote(const Thin& tail, double z) {
    const double l = tail.l2;
    return ((l - 1.0) / l) * std::pow(std::pow(z, l) / (tail.l1 * l), 1.0 / (l - 1.0));
}

std::vector<std::pair<std::string, Randomiser>> catalog() {
    return {
        {"dirac", Dirac{0.06}},
        {"uniform", Uniform{0.0, 0.135}},
        {"exponential", Exponential{13.1}},
        {"gamma", Gamma{0.4, 3.868}},
        {"ncx2", ScaledNCX2{0.07, 0.23, 1.25}},
        {"folded_gaussian", FoldedGaussian{63.46}},
        {"weibull", calibrate_to_spot(Weibull{1.0, 2.0}, 0.06)},
    };
}

}  // namespace randheston
