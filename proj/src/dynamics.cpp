#include "randheston/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "randheston/smile_asymptotics.hpp"

namespace randheston {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Gamma-type original (shape, rate): logarithmic singularity at b_star.
Fat gamma_forward(const ForwardContext& c, double decay, double shape, double rate) {
    const double bs = *c.b_star;
    const double g1 = shape * std::log(rate * (c.b - bs) / (rate + decay * c.b)) +
                      0.5 * c.dof * std::log(c.b / (c.b - bs));
    return Fat{bs, -shape, g1, std::nullopt, 1};
}

// Bounded original with upper end v_plus; the remaining constants need the full law.
Fat bounded_forward(const ForwardContext& c, double decay, double v_plus, double g0g1, double g0g2) {
    const double g0 = decay * v_plus * c.b * c.b;
    return Fat{c.b, g0, g0g1 / g0, g0g2 / g0, 2};
}

}  // namespace

ForwardContext forward_context(const ModelParams& p, const Randomiser& r, double t) {
    validate(p);
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "elapsed time must be positive");
    ForwardContext c;
    c.t = t;
    c.beta = p.xi * p.xi * (-std::expm1(-p.kappa * t)) / (4.0 * p.kappa);
    c.b = 0.5 / c.beta;
    c.dof = 4.0 * p.kappa * p.theta / (p.xi * p.xi);
    const double m = mgf_endpoint(r);
    if (std::isfinite(m)) c.b_star = m * c.b / (m + c.b * std::exp(-p.kappa * t));
    return c;
}

cplx forward_log_mgf(const ModelParams& p, const Randomiser& r, double t, cplx u) {
    const ForwardContext c = forward_context(p, r, t);
    if (!(u.real() < c.endpoint()))
        throw Error(ErrorKind::OutsideDomain, "forward mgf evaluated beyond its endpoint");
    const cplx den = 1.0 - 2.0 * c.beta * u;
    const cplx w = std::exp(-p.kappa * t) * u / den;
    return -0.5 * c.dof * std::log(den) + log_mgf(r, w);
}

double forward_log_mgf(const ModelParams& p, const Randomiser& r, double t, double u) {
    return forward_log_mgf(p, r, t, cplx(u, 0.0)).real();
}

VarianceLaw forward_law(const ModelParams& p, const Randomiser& r, double t) {
    validate(r);
    const ForwardContext c = forward_context(p, r, t);
    const double decay = std::exp(-p.kappa * t);
    auto fn = [r, beta = c.beta, dof = c.dof, decay](cplx u) {
        const cplx den = 1.0 - 2.0 * beta * u;
        return -0.5 * dof * std::log(den) + log_mgf(r, decay * u / den);
    };
    return {fn, c.endpoint(), "forward " + name(r)};
}

VarianceMoments variance_moments(const ModelParams& p, const Randomiser& r, double t) {
    validate(p);
    const Moments mo = moments(r);
    const double e = std::exp(-p.kappa * t);
    const double mean = p.theta * (1.0 - e) + e * mo.mean;
    const double var = e * e * (mo.var + p.xi * p.xi / p.kappa * std::expm1(p.kappa * t) * mo.mean) +
                       p.xi * p.xi * p.theta / (2.0 * p.kappa) * (1.0 - e) * (1.0 - e);
    return {mean, var};
}

ForwardTail forward_tail_class(const ModelParams& p, const Randomiser& r, double t) {
    const ForwardContext c = forward_context(p, r, t);
    const double decay = std::exp(-p.kappa * t);
    const double q = c.dof;
    auto from_fat = [](const Fat& f) {
        return ForwardTail{f.m, f.g0, f.omega == 1 ? 0.0 : f.omega - 1.0, f, false};
    };
    auto from_thin = [&](const Thin& th) {
        const double gh = th.l2 / (th.l2 - 1.0);
        const double ch = std::pow(2.0 * th.l1 * th.l2, 1.0 / (1.0 - th.l2));
        const double g0 = std::pow(2.0, gh - 1.0) * ch / gh * std::pow(decay * c.b * c.b, gh);
        return ForwardTail{c.b, g0, gh, std::nullopt, true};
    };
    return std::visit(
        overloaded{
            [&](const Dirac& d) {
                return from_fat(bounded_forward(c, decay, d.v0, -0.5 * q,
                                                0.5 * q * std::log(c.b) - decay * d.v0 * c.b));
            },
            [&](const Uniform& u) {
                const double g0g1 = 1.0 - 0.5 * q;
                const double g0g2 = p.kappa * t + (0.5 * q - 2.0) * std::log(c.b) - std::log(u.hi - u.lo) -
                                    decay * c.b * u.hi;
                return from_fat(bounded_forward(c, decay, u.hi, g0g1, g0g2));
            },
            [&](const Exponential& e) { return from_fat(gamma_forward(c, decay, 1.0, e.rate)); },
            [&](const Gamma& g) { return from_fat(gamma_forward(c, decay, g.shape, g.rate)); },
            [&](const ScaledNCX2& n) {
                const double bs = *c.b_star;
                const double g0 = decay * n.noncentrality * n.scale * bs * bs;
                const double g0g2 = 0.5 * (q - n.dof) * std::log(c.b / (c.b - bs)) + 0.5 * n.dof * std::log(bs) -
                                    decay * n.noncentrality * n.scale * bs;
                return from_fat(Fat{bs, g0, -0.5 * n.dof / g0, g0g2 / g0, 2});
            },
            [&](const FoldedGaussian& f) { return from_thin(Thin{f.l1, 2.0}); },
            [&](const Weibull& w) {
                const TailClass tc = tail_class(r);
                if (const auto* fat = std::get_if<Fat>(&tc)) return from_fat(gamma_forward(c, decay, 1.0, fat->m));
                return from_thin(Thin{std::pow(w.scale, -w.shape), w.shape});
            },
        },
        r);
}

double forward_smile(const ModelParams& p, const Randomiser& r, double t, double tau, double x, int order) {
    if (x == 0.0) throw Error(ErrorKind::AtmUndefined, "log-strike 0 has no out-of-the-money limit");
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "remaining maturity must be positive");
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "order must be positive");
    if (std::holds_alternative<Weibull>(r) || std::holds_alternative<Exponential>(r))
        throw Error(ErrorKind::UnsupportedForwardCase, "no forward smile expansion for " + name(r));
    const ForwardTail ft = forward_tail_class(p, r, t);
    if (ft.fat) return fat_smile(p, *ft.fat, tau, x, std::min(order, 3));
    const auto& fg = std::get<FoldedGaussian>(r);
    const double lead = std::abs(x) / (2.0 * std::sqrt(2.0 * ft.endpoint * tau));
    if (order == 1) return lead;
    return lead + 3.0 * std::pow(std::abs(x), 2.0 / 3.0) * std::exp(-2.0 * p.kappa * t / 3.0) /
                      (8.0 * std::cbrt(4.0 * fg.l1) * std::cbrt(tau));
}

}  // namespace randheston
