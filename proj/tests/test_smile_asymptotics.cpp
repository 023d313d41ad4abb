#include <numbers>

#include "common.hpp"
#include "randheston/blackscholes.hpp"
#include "randheston/pricing.hpp"
#include "randheston/smile_asymptotics.hpp"

using namespace randheston;
using Catch::Approx;
using testing::base_params;

namespace {

const Fat& as_fat(const TailClass& c) { return std::get<Fat>(c); }

// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) { return testing::slope(xs, ys); }

}  // namespace

TEST_CASE("bounded rate matches extended precision") {
    const auto p = base_params();
    // oracle: tests/oracles/oracles.py, smile_asymptotics
    const auto r = bounded_rate(p, 0.135, 0.1);
    CHECK(r.f_star == Approx(0.037871823930207229056).epsilon(1e-10));
    CHECK(r.u_star == Approx(0.76589862761300991882).epsilon(1e-8));
    CHECK(bounded_rate(p, 0.135, -0.2).f_star == Approx(0.14176252936697554415).epsilon(1e-10));
    CHECK(bounded_smile(p, 0.135, 0.1) == Approx(0.01 / (2 * 0.037871823930207229056)).epsilon(1e-10));
}

TEST_CASE("bounded smile near the money and under zero correlation") {
    const auto p = base_params();
    CHECK(bounded_smile(p, 0.06, 1e-4) == Approx(0.06).epsilon(1e-3));
    CHECK_THROWS_AS(bounded_smile(p, 0.06, 0.0), Error);
    const auto p0 = ModelParams::make(2.1, 0.05, 0.1, 0.0);
    for (double x : {0.05, 0.2, 0.5}) CHECK(std::abs(bounded_smile(p0, 0.135, x) - bounded_smile(p0, 0.135, -x)) < 1e-10);
}

TEST_CASE("bounded rate scales with the support edge") {
    const auto p = base_params();
    const auto [lo, hi] = lambda_domain(p);
    const int n = 100000;
    for (double x : {-0.3, 0.1, 0.4}) {
        double brute = -std::numeric_limits<double>::infinity();
        for (int i = 1; i < n; ++i) {
            const double u = lo + (hi - lo) * i / n;
            brute = std::max(brute, u * x - 2.0 * 0.135 * lambda_limit(p, u));
        }
        CHECK(bounded_rate(p, 0.27, x).f_star == Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("uniform prefactor U tends to one at the money") {
    const auto p = base_params();
    double prev = 1.0;
    for (double x : {0.1, 0.01, 1e-3, 1e-4}) {
        const double gap = std::abs(uniform_U(p, 0.135, x) - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
    CHECK(std::abs(uniform_U(p, 0.135, -1e-4) - 1.0) < 1e-3);
}

TEST_CASE("uniform call expansion tracks the exact time value") {
    const auto p = base_params();
    const Uniform law{0.0, 0.135};
    const auto vl = law_of(law);
    const double x = 0.1;
    double prev = 1.0;
    for (double t : {4e-3, 2e-3, 1e-3}) {
        INFO("t=" << t);
        const auto e = uniform_call_expansion(p, law, t, x);
        const double exact = price_call_quadrature(p, vl, t, x).log_otm;
        CHECK(e.rate == Approx(0.037871823930207229056).epsilon(1e-9));
        const double gap = std::abs(e.log_time_value / exact - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.01);
    CHECK_THROWS_AS(uniform_call_expansion(p, law, 1e-3, 0.0), Error);
}

TEST_CASE("thin-tail smile") {
    // Folded Gaussian l1 = 1/2: t^(1/3) sigma^2 = (2x)^(2/3) / 3.
    const Thin half{0.5, 2.0};
    for (double x : {-0.3, 0.1, 0.2})
        CHECK(std::cbrt(0.01) * thin_smile(half, 0.01, x) == Approx(std::pow(2.0 * std::abs(x), 2.0 / 3.0) / 3.0).epsilon(1e-12));
    // oracle: tests/oracles/oracles.py, thin t^(1/3) sigma^2(0.2), l1 = 63.46
    CHECK(std::cbrt(1e-3) * thin_smile(Thin{63.46, 2.0}, 1e-3, 0.2) == Approx(0.036008805778118224707).epsilon(1e-12));
    CHECK_THROWS_AS(thin_smile(half, 0.01, 0.0), Error);

    for (double k : {1.5, 2.0, 3.0}) {
        const Thin wb{2.0, k};
        CHECK(thin_smile(wb, 0.005, 0.1) / thin_smile(wb, 0.01, 0.1) == Approx(std::pow(2.0, 1.0 / (1.0 + k))).epsilon(1e-12));
        CHECK(thin_smile(wb, 0.01, 0.2) / thin_smile(wb, 0.01, 0.1) == Approx(std::pow(4.0, 1.0 / (1.0 + k))).epsilon(1e-12));
    }
    const auto rates = thin_rates(half);
    CHECK(rates.gamma_lo == Approx(2.0 / 3.0));
    CHECK(rates.gamma_hi == Approx(2.0));
}

TEST_CASE("thin-tail rate is the conjugate of the limit cgf") {
    for (const Thin tail : {Thin{0.5, 2.0}, Thin{63.46, 2.0}, Thin{8.0, 3.0}}) {
        const ConvexFn f{[&](double u) { return thin_limit_cgf(tail, u); }, -std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), std::nullopt};
        for (double x : {0.05, 0.1, 0.3}) {
            INFO("l1=" << tail.l1 << " l2=" << tail.l2 << " x=" << x);
            CHECK(std::abs(legendre(f, x).f_star - thin_rate(tail, x)) < 1e-8);
        }
    }
}

TEST_CASE("moderately out-of-the-money strikes") {
    const Thin half{0.5, 2.0};
    CHECK(motm_exponent(half, 0.25) == Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(motm_exponent(half, 0.0) == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(motm_exponent(half, -0.5) == Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(motm_smile(half, 0.01, 0.2, 0.0) == Approx(thin_smile(half, 0.01, 0.2)).epsilon(1e-14));
    CHECK(motm_smile(half, 0.005, 0.2, 0.25) / motm_smile(half, 0.01, 0.2, 0.25) ==
          Approx(std::pow(2.0, 1.0 / 6.0)).epsilon(1e-12));
    CHECK_THROWS_AS(motm_smile(half, 0.01, 0.2, 0.5), Error);
    CHECK_THROWS_AS(motm_smile(half, 0.01, 0.2, -1.0), Error);
    CHECK(motm_exponent(half, 0.5 - 1e-12) < 1e-11);
}

TEST_CASE("moderate-deviation rates") {
    const auto p = base_params();
    const TailClass bounded = Bounded{0.135};
    CHECK(moddev_rate(p, bounded, 0.5, 0.0) == 0.0);
    CHECK(moddev_rate(p, bounded, 0.5, 0.1) == Approx(0.01 / 0.27).epsilon(1e-14));
    CHECK(moddev_rate(p, bounded, 0.5, 0.1) == Approx(0.037037).epsilon(1e-5));
    CHECK_THROWS_AS(moddev_rate(p, bounded, 1.0, 0.1), Error);

    const TailClass thin = Thin{63.46, 2.0};
    CHECK(moddev_rate(p, thin, 2.0, 0.0) == 0.0);
    CHECK(moddev_rate(p, thin, 1.0, 0.1) == Approx(thin_rate(Thin{63.46, 2.0}, 0.1)).epsilon(1e-12));
    double prev_x = -0.4, prev = moddev_rate(p, thin, 2.0, prev_x);
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (double x = -0.35; x <= 0.4; x += 0.05) {
        const double v = moddev_rate(p, thin, 2.0, x);
        CHECK(v >= 0.0);
        const double s = (v - prev) / (x - prev_x);
        CHECK(s >= prev_slope - 1e-9);
        prev_slope = s;
        prev = v;
        prev_x = x;
    }
    CHECK_THROWS_AS(moddev_rate(p, thin, 2.5, 0.1), Error);
}

TEST_CASE("fat-tail constants for an exponential law") {
    const auto p = base_params();
    const Fat f = as_fat(tail_class(Exponential{13.1}));
    // oracle: tests/oracles/oracles.py, exponential h1, h2
    const auto c = fat_tail_constants(p, f, 1e-3, 0.15);
    CHECK(c.rate == Approx(std::sqrt(2 * 13.1) * 0.15).epsilon(1e-14));
    CHECK(c.h1 == Approx(0.020504618010180678203).epsilon(1e-12));
    CHECK(c.h2 == Approx(-0.0047709923664122137405).epsilon(1e-12));
    CHECK(c.h2 == Approx(-1.0 / (16.0 * 13.1)).epsilon(1e-14));
    CHECK(fat_tail_constants(p, f, 1e-3, -0.15).h1 == Approx(0.022754618010180678203).epsilon(1e-12));
    // h2 carries the sign of 1/2 - |gamma0|.
    const Fat g = as_fat(tail_class(Gamma{0.4, 3.868}));
    CHECK(fat_tail_constants(p, g, 1e-3, 0.15).h2 > 0.0);
}

TEST_CASE("fat-tail constants for a non-central chi-square law") {
    const auto p = base_params();
    const Fat f = as_fat(tail_class(ScaledNCX2{0.07, 0.23, 1.25}));
    // oracle: tests/oracles/oracles.py, ncx2 c1 and h terms
    const auto c = fat_tail_constants(p, f, 1e-3, 0.15);
    CHECK(c.c1 == Approx(0.84183334864585939081).epsilon(1e-8));
    CHECK(c.h1 == Approx(0.053180473186869587478).epsilon(1e-7));
    CHECK(c.h2 == Approx(0.00336875).epsilon(1e-7));
    for (double x : {-0.3, -0.05, 0.05, 0.3}) {
        const auto k = fat_tail_constants(p, f, 1e-3, x);
        CHECK(k.c1 > 0.0);
        CHECK(k.zeta > 0.0);
        CHECK(k.b1 * (x > 0 ? 1.0 : -1.0) < 0.0);
    }
    Fat bad = f;
    bad.omega = 3;
    CHECK_THROWS_AS(fat_tail_constants(p, bad, 1e-3, 0.1), Error);
    CHECK_THROWS_AS(fat_smile(p, bad, 1e-3, 0.1, 1), Error);
}

TEST_CASE("fat-tail smile displays") {
    const auto p = base_params();
    // Unit scale: m = 1/2, orders 1-2 read |x|/2 t^(-1/2) + sqrt(lambda |x|)/2 t^(-1/4).
    const double lam = 1.7;
    const Fat chi = as_fat(tail_class(ScaledNCX2{1.0, 0.8, lam}));
    for (double x : {-0.2, 0.1}) {
        for (double t : {1e-2, 1e-4}) {
            const double o1 = std::abs(x) / 2 / std::sqrt(t);
            CHECK(fat_smile(p, chi, t, x, 1) == Approx(o1).epsilon(1e-12));
            CHECK(fat_smile(p, chi, t, x, 2) == Approx(o1 + std::sqrt(lam * std::abs(x)) / 2 / std::pow(t, 0.25)).epsilon(1e-12));
        }
    }
    // Stationary CIR law Gamma(2 kappa theta / xi^2, 2 kappa / xi^2): order 1 is xi |x| / (4 sqrt(kappa t)).
    const double rate = 2 * p.kappa / (p.xi * p.xi);
    const Fat erg = as_fat(tail_class(Gamma{rate * p.theta, rate}));
    CHECK(fat_smile(p, erg, 0.01, 0.2, 1) == Approx(p.xi * 0.2 / (4 * std::sqrt(p.kappa * 0.01))).epsilon(1e-12));
    // Exponential: order 2 equals order 3 and both add h1 + h2 log t.
    const Fat ex = as_fat(tail_class(Exponential{13.1}));
    const auto c = fat_tail_constants(p, ex, 1e-3, 0.15);
    CHECK(fat_smile(p, ex, 1e-3, 0.15, 2) == Approx(fat_smile(p, ex, 1e-3, 0.15, 1) + c.h1 + c.h2 * std::log(1e-3)).epsilon(1e-13));
    CHECK(fat_smile(p, ex, 1e-3, 0.15, 3) == fat_smile(p, ex, 1e-3, 0.15, 2));
    CHECK_THROWS_AS(fat_smile(p, ex, 1e-3, 0.0, 1), Error);
}

TEST_CASE("fat-tail smile asymmetry comes from h1 alone") {
    const auto p = base_params();
    for (const Randomiser r : {Randomiser{Exponential{13.1}}, Randomiser{Gamma{0.4, 3.868}},
                               Randomiser{ScaledNCX2{0.07, 0.23, 1.25}}}) {
        const Fat f = as_fat(tail_class(r));
        for (double x : {0.05, 0.15, 0.3}) {
            INFO(name(r) << " x=" << x);
            CHECK(fat_smile(p, f, 1e-3, x, 1) == fat_smile(p, f, 1e-3, -x, 1));
            const double odd = p.rho * p.xi * x / 8.0;
            CHECK(fat_smile(p, f, 1e-3, x, 3) - fat_smile(p, f, 1e-3, -x, 3) == Approx(2.0 * odd).margin(1e-12));
        }
    }
}

TEST_CASE("gamma-density route reproduces the omega = 1 call expansion") {
    const auto p = base_params();
    for (const Randomiser r : {Randomiser{Exponential{13.1}}, Randomiser{Gamma{0.4, 3.868}}, Randomiser{Gamma{2.5, 40.0}}}) {
        const Fat f = as_fat(tail_class(r));
        for (double t : {1e-2, 1e-3, 1e-4})
            for (double x : {-0.3, -0.1, 0.05, 0.2}) {
                const auto a = fat_call_expansion(p, f, t, x);
                const auto b = fat_call_expansion_gamma_route(p, f, t, x);
                CHECK(a.log_time_value == Approx(b.log_time_value).epsilon(1e-12));
            }
    }
}

TEST_CASE("fat-tail exponent against exact prices") {
    const auto p = base_params();
    const Exponential ex{13.1};
    const Fat f = as_fat(tail_class(ex));
    const auto law = law_of(ex);
    for (double x : {-0.15, 0.15}) {
        INFO("x=" << x);
        const double target = std::sqrt(2 * 13.1) * std::abs(x);
        double prev = 1.0;
        // The t^(1/2) log C_t correction is still a fifth of the exponent at t = 1e-3.
        for (double t : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const double lo = price_call_quadrature(p, law, t, x).log_otm;
            const double gap = std::abs(-std::sqrt(t) * lo / target - 1.0);
            CHECK(gap < prev);
            prev = gap;
            CHECK(fat_call_expansion(p, f, t, x).log_time_value / lo == Approx(1.0).epsilon(5e-3));
        }
        CHECK(prev < 0.03);
    }
}

TEST_CASE("omega = 2 sub-exponential factor") {
    const auto p = base_params();
    const ScaledNCX2 nc{0.07, 0.23, 1.25};
    const Fat f = as_fat(tail_class(nc));
    const auto law = law_of(nc);
    for (double x : {-0.15, 0.15, 0.3}) {
        INFO("x=" << x);
        const double rate = std::sqrt(2 * f.m) * std::abs(x);
        std::vector<double> s, y;
        double prev_diff = 0.0, prev_step = 1.0;
        for (int k = 16; k <= 32; k += 4) {
            const double t = std::pow(2.0, -k);
            const auto c = fat_tail_constants(p, f, t, x);
            const double lo = price_call_quadrature(p, law, t, x).log_otm;
            s.push_back(std::pow(t, -0.25));
            y.push_back(lo + rate / std::sqrt(t) - c.log_C);
            // Expansion minus exact settles to a constant at rate t^(1/4).
            const double diff = fat_call_expansion(p, f, t, x).log_time_value - lo;
            if (k > 16) {
                CHECK(std::abs(diff - prev_diff) < 0.6 * prev_step);
                prev_step = std::abs(diff - prev_diff);
            }
            CHECK(std::abs(diff) < 0.3);
            prev_diff = diff;
        }
        const double c1 = fat_tail_constants(p, f, 1e-4, x).c1;
        CHECK(fit_slope(s, y) / c1 == Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("exact saddlepoint") {
    const auto p = base_params();
    for (const auto& [label, r] : catalog()) {
        INFO(label);
        const auto law = law_of(r);
        const double t = 1e-4;
        const double u = saddlepoint_exact(p, law, t, 0.0);
        CHECK(u / (0.5 * std::sqrt(t)) == Approx(1.0).epsilon(0.02));
        CHECK(saddle_curvature(p, law, t, u) > 0.0);
    }

    const Exponential ex{13.1};
    const Fat f = as_fat(tail_class(ex));
    const double x = 0.15;
    double prev = 1.0;
    for (double t : {1e-3, 1e-4, 1e-5}) {
        const double u = saddlepoint_exact(p, law_of(ex), t, x);
        const double b1 = fat_tail_constants(p, f, t, x).b1;
        const double gap = std::abs((u - std::sqrt(2 * f.m)) / std::sqrt(t) / b1 - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.05);

    const ScaledNCX2 nc{0.07, 0.23, 1.25};
    const Fat g = as_fat(tail_class(nc));
    std::vector<double> lt, lg;
    for (int k = 16; k <= 24; ++k) {
        const double t = std::pow(2.0, -k);
        lt.push_back(std::log(t));
        lg.push_back(std::log(std::abs(saddlepoint_exact(p, law_of(nc), t, x) - std::sqrt(2 * g.m))));
    }
    CHECK(fit_slope(lt, lg) == Approx(0.25).margin(0.02));
}

TEST_CASE("at-the-money limits") {
    CHECK(atm_limit(Dirac{0.06}) == Approx(std::sqrt(0.06)).epsilon(1e-14));
    CHECK(atm_limit(Uniform{0.0, 0.135}) == Approx(2.0 / 3.0 * std::sqrt(0.135)).epsilon(1e-13));
    CHECK(atm_limit(Uniform{0.0, 0.135}) == Approx(0.24495).epsilon(1e-4));
    CHECK(atm_limit(Exponential{13.1}) == Approx(std::sqrt(std::numbers::pi) / (2 * std::sqrt(13.1))).epsilon(1e-13));
}

TEST_CASE("asymptote objects sum their terms") {
    const auto p = base_params();
    const Fat f = as_fat(tail_class(ScaledNCX2{0.07, 0.23, 1.25}));
    const auto a = fat_asymptote(p, f, 3);
    CHECK(a.engine == SmileEngine::Fat2);
    for (std::size_t i = 1; i < a.terms.size(); ++i) CHECK(a.terms[i - 1].t_power <= a.terms[i].t_power);
    CHECK(a.implied_variance(1e-3, 0.15) == Approx(fat_smile(p, f, 1e-3, 0.15, 3)).epsilon(1e-12));
    const auto b = bounded_asymptote(p, 0.135);
    CHECK(b.implied_variance(1e-3, 0.1) == Approx(bounded_smile(p, 0.135, 0.1)).epsilon(1e-12));
    const auto th = thin_asymptote(Thin{63.46, 2.0});
    CHECK(th.engine == SmileEngine::Thin);
    CHECK(th.implied_variance(1e-3, 0.2) == Approx(thin_smile(Thin{63.46, 2.0}, 1e-3, 0.2)).epsilon(1e-12));
}

TEST_CASE("boundary limit for the non-central chi-square") {
    const auto p = base_params();
    // Unit scale: lambda / (2 - rho xi).
    CHECK(ncx2_boundary_limit(p, ScaledNCX2{1.0, 0.8, 1.7}) == Approx(1.7 / (2.0 - p.rho * p.xi)).epsilon(1e-10));
    const auto pp = ModelParams::make(2.1, 0.05, 2.5, 0.9);
    CHECK(std::isinf(ncx2_boundary_limit(pp, ScaledNCX2{1.0, 0.8, 1.7})));
}
