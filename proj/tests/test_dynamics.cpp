#include "common.hpp"
#include "randheston/blackscholes.hpp"
#include "randheston/dynamics.hpp"
#include "randheston/numerics.hpp"
#include "randheston/pricing.hpp"

using namespace randheston;
using Catch::Approx;
using testing::base_params;

TEST_CASE("forward context") {
    const auto p = base_params();
    const Gamma g{0.4, 3.868};
    const auto c = forward_context(p, g, 1.0 / 12);
    // oracle: tests/oracles/oracles.py, forward endpoints
    CHECK(c.b == Approx(2616.1218759757679693).epsilon(1e-12));
    CHECK(*c.b_star == Approx(4.5996390832417308364).epsilon(1e-12));
    CHECK(c.dof == Approx(4 * p.kappa * p.theta / (p.xi * p.xi)).epsilon(1e-15));
    CHECK(c.endpoint() == *c.b_star);
    for (const auto& [label, r] : catalog()) {
        INFO(label);
        for (double t : {1e-3, 0.1, 1.0, 5.0}) {
            const auto k = forward_context(p, r, t);
            CHECK(k.beta > 0.0);
            if (std::isfinite(mgf_endpoint(r))) {
                REQUIRE(k.b_star.has_value());
                CHECK(*k.b_star < k.b);
                CHECK(*k.b_star < mgf_endpoint(r) * std::exp(p.kappa * t));
            } else {
                CHECK_FALSE(k.b_star.has_value());
                CHECK(k.endpoint() == k.b);
            }
        }
        if (std::isfinite(mgf_endpoint(r)))
            CHECK(forward_context(p, r, 1e-9).endpoint() == Approx(mgf_endpoint(r)).epsilon(1e-6));
    }
}

TEST_CASE("forward log mgf matches quadrature over the CIR transition") {
    const auto p = base_params();
    const Gamma g{0.4, 3.868};
    // oracle: tests/oracles/oracles.py, forward gamma log mgf
    CHECK(forward_log_mgf(p, g, 1.0 / 12, 3.0) == Approx(0.44611623131739383585).epsilon(1e-12));
    CHECK(forward_log_mgf(p, g, 1.0, 20.0) == Approx(1.328860509917605196).epsilon(1e-12));
    CHECK(forward_log_mgf(p, g, 1.0, -10.0) == Approx(-0.54229499303272463341).epsilon(1e-12));
    for (const auto& [label, r] : catalog()) {
        CHECK(forward_log_mgf(p, r, 1.0, 0.0) == 0.0);
        CHECK(forward_log_mgf(p, r, 1.0, cplx(0.3, 2.0)).real() < forward_log_mgf(p, r, 1.0, 0.3) + 1e-12);
    }
    CHECK_THROWS_AS(forward_log_mgf(p, g, 1.0, forward_context(p, g, 1.0).endpoint()), Error);
    const auto law = forward_law(p, g, 1.0);
    CHECK(law.endpoint == forward_context(p, g, 1.0).endpoint());
    CHECK(law.log_mgf(cplx(2.0, 0.0)).real() == Approx(forward_log_mgf(p, g, 1.0, 2.0)).epsilon(1e-15));
}

TEST_CASE("forward moments from the mgf and from the closed forms") {
    const auto p = base_params();
    for (const auto& [label, r] : catalog()) {
        for (double t : {0.1, 1.0, 5.0}) {
            INFO(label << " t=" << t);
            const RealFn f = [&](double u) { return forward_log_mgf(p, r, t, u); };
            const auto m = variance_moments(p, r, t);
            const double h = std::min(0.5, 0.2 * forward_context(p, r, t).endpoint());
            CHECK(finite_diff(f, 0.0, 1, h) == Approx(m.mean).epsilon(1e-6));
            CHECK(finite_diff(f, 0.0, 2, h) == Approx(m.var).epsilon(1e-6));
            const double decay = std::exp(-p.kappa * t);
            CHECK(m.mean == Approx(p.theta * (1 - decay) + decay * moments(r).mean).epsilon(1e-14));
        }
        const auto m0 = variance_moments(p, r, 0.0);
        CHECK(m0.mean == Approx(moments(r).mean).epsilon(1e-14));
        CHECK(m0.var == Approx(moments(r).var).margin(1e-16));
        const auto inf = variance_moments(p, r, 200.0);
        CHECK(std::abs(inf.mean - p.theta) < 1e-10);
        CHECK(std::abs(inf.var - p.xi * p.xi * p.theta / (2 * p.kappa)) < 1e-10);
    }
    // Dirac: the Var(V) = 0 reduction.
    const double t = 0.7, v0 = 0.06, e = std::exp(-p.kappa * t);
    const double dirac_var = e * e * (p.xi * p.xi / p.kappa) * (std::exp(p.kappa * t) - 1) * v0 +
                             p.xi * p.xi * p.theta / (2 * p.kappa) * (1 - e) * (1 - e);
    CHECK(variance_moments(p, Dirac{v0}, t).var == Approx(dirac_var).epsilon(1e-13));
    // Mean as an average of conditional means over a Gamma initial law.
    const Gamma g{0.4, 3.868};
    // w = v^shape removes the v^(shape - 1) singularity at the origin.
    const double mixed = quadrature(
        [&](double w) {
            const double v = std::pow(w, 1.0 / g.shape);
            const double dens = std::exp(g.shape * std::log(g.rate) - g.rate * v - std::lgamma(g.shape + 1));
            return (p.theta * (1 - e) + e * v) * dens;
        },
        0.0, std::numeric_limits<double>::infinity());
    CHECK(variance_moments(p, g, t).mean == Approx(mixed).epsilon(1e-8));
}

TEST_CASE("forward law becomes the stationary Gamma") {
    const auto p = base_params();
    const double shape = 2 * p.kappa * p.theta / (p.xi * p.xi), rate = 2 * p.kappa / (p.xi * p.xi);
    for (const auto& [label, r] : catalog()) {
        INFO(label);
        for (double u : {-20.0, 5.0, 100.0})
            CHECK(std::abs(forward_log_mgf(p, r, 50.0, u) - log_mgf(Gamma{shape, rate}, u)) < 1e-6);
    }
}

TEST_CASE("forward mgf explodes at the declared endpoint") {
    const auto p = base_params();
    const double t = 1.0 / 12;
    for (const auto& [label, r] : catalog()) {
        INFO(label);
        const double e = forward_context(p, r, t).endpoint();
        const double near = forward_log_mgf(p, r, t, e - 1e-6);
        const double far = forward_log_mgf(p, r, t, e - 1e-2);
        const auto tail = forward_tail_class(p, r, t);
        CHECK(tail.endpoint == e);
        if (tail.exponent == 0.0)
            // Logarithmic singularity: the rise over four decades is |g0| log 1e4.
            CHECK(near - far == Approx(std::abs(tail.g0) * std::log(1e4)).epsilon(1e-3));
        else
            CHECK(near - far > 10.0);
    }
}

TEST_CASE("forward tail classification") {
    const auto p = base_params();
    const double t = 1.0 / 12;
    const auto ctx = forward_context(p, Uniform{0.0, 0.135}, t);
    const double decay = std::exp(-p.kappa * t);

    const auto ga = forward_tail_class(p, Gamma{0.4, 3.868}, t);
    REQUIRE(ga.fat.has_value());
    CHECK(ga.fat->m == *forward_context(p, Gamma{0.4, 3.868}, t).b_star);
    CHECK(ga.fat->g0 == -0.4);
    CHECK(ga.fat->omega == 1);

    // Uniform: (b - u) log M -> e^{-kappa t} b^2 v_plus.
    const auto un = forward_tail_class(p, Uniform{0.0, 0.135}, t);
    REQUIRE(un.fat.has_value());
    CHECK(un.fat->omega == 2);
    CHECK(un.g0 == Approx(decay * ctx.b * ctx.b * 0.135).epsilon(1e-12));
    for (double s : {1e-2, 1e-4, 1e-6}) {
        const double fit = s * forward_log_mgf(p, Uniform{0.0, 0.135}, t, ctx.b - s);
        CHECK(fit == Approx(un.g0).epsilon(1e-6 + 1e-3 * s * ctx.b));
    }

    const ScaledNCX2 nc{0.07, 0.23, 1.25};
    const auto ncx = forward_tail_class(p, nc, t);
    const double bs = *forward_context(p, nc, t).b_star;
    // e^{-kappa t} lambda b*^2 / (2m) with m = 1 / (2 scale).
    CHECK(ncx.g0 == Approx(decay * 1.25 * 0.07 * bs * bs).epsilon(1e-12));
    CHECK(ncx.exponent == 1.0);

    const auto fg = forward_tail_class(p, FoldedGaussian{63.46}, t);
    CHECK(fg.nonpolynomial);
    CHECK(fg.exponent == Approx(2.0));
    CHECK(fg.endpoint == ctx.b);
}

TEST_CASE("forward smile displays") {
    const auto p = base_params();
    const double t = 1.0 / 12, tau = 1.0 / 52, x = 0.2;
    const double decay = std::exp(-p.kappa * t);
    const auto ctx = forward_context(p, Uniform{0.0, 0.135}, t);
    const double b = ctx.b;

    const double o1 = x / (2 * std::sqrt(2 * b * tau));
    CHECK(forward_smile(p, Uniform{0.0, 0.135}, t, tau, x, 1) == Approx(o1).epsilon(1e-10));
    CHECK(forward_smile(p, Uniform{0.0, 0.135}, t, tau, x, 2) ==
          Approx(o1 + std::sqrt(0.135 * x) * std::exp(-p.kappa * t / 2) / (2 * std::pow(2 * b * tau, 0.25)))
              .epsilon(1e-10));
    CHECK(forward_smile(p, FoldedGaussian{63.46}, t, tau, x, 2) ==
          Approx(o1 + 3 * std::pow(x, 2.0 / 3.0) * std::pow(decay, 2.0 / 3.0) /
                          (8 * std::cbrt(4 * 63.46) * std::cbrt(tau)))
              .epsilon(1e-10));
    const double bs = *forward_context(p, Gamma{0.4, 3.868}, t).b_star;
    CHECK(forward_smile(p, Gamma{0.4, 3.868}, t, tau, x, 1) == Approx(x / (2 * std::sqrt(2 * bs * tau))).epsilon(1e-10));
    CHECK(forward_smile(p, Gamma{0.4, 3.868}, t, tau, x, 1) > forward_smile(p, Uniform{0.0, 0.135}, t, tau, x, 1));

    std::vector<double> lt, ls;
    for (double tt : {1e-2, 1e-3, 1e-4, 1e-5}) {
        lt.push_back(std::log(tt));
        ls.push_back(std::log(forward_smile(p, Uniform{0.0, 0.135}, t, tt, x, 2) -
                              forward_smile(p, Uniform{0.0, 0.135}, t, tt, x, 1)));
    }
    CHECK(testing::slope(lt, ls) == Approx(-0.25).margin(1e-10));

    CHECK_THROWS_AS(forward_smile(p, Weibull{0.073, 2.0}, t, tau, x, 1), Error);
    CHECK_THROWS_AS(forward_smile(p, Exponential{13.1}, t, tau, x, 1), Error);
    try {
        forward_smile(p, Exponential{13.1}, t, tau, x, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedForwardCase);
    }
    CHECK_THROWS_AS(forward_smile(p, Gamma{0.4, 3.868}, t, tau, 0.0, 1), Error);
}

TEST_CASE("forward smile against priced forward laws") {
    const auto p = base_params();
    const double t = 1.0 / 12, tau = 1.0 / 52;
    const Gamma g{0.4, 3.868};
    const auto law = forward_law(p, g, t);
    for (double x : {-0.2, 0.2}) {
        INFO("x=" << x);
        const double lo = price_call_quadrature(p, law, tau, x).log_otm;
        const double exact = std::pow(implied_vol_from_log_otm(tau, x, lo), 2);
        const double xs[] = {x};
        const double fft = std::pow(implied_vol_from_log_otm(tau, x, std::log(price_otm_fft(p, law, tau, xs)[0])), 2);
        CHECK(fft == Approx(exact).epsilon(1e-4));
        CHECK(std::abs(forward_smile(p, g, t, tau, x, 1) / exact - 1.0) < 0.15);
    }
}
