#include "randheston/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <numbers>

// pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fftw3.h>

#include "randheston/numerics.hpp"
#include "randheston/parallel.hpp"

namespace randheston {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinN = 1 << 12;
constexpr int kMaxN = 1 << 16;

double intrinsic_call(double x) { return x < 0.0 ? -std::expm1(x) : 0.0; }

// Damped Carr-Madan integrand at frequency v.
cplx damped_integrand(const ModelParams& p, const VarianceLaw& law, double t, double alpha, double v) {
    const cplx u(alpha + 1.0, v);
    const cplx den(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
    return std::exp(mixture_log_mgf(p, law, t, u)) / den;
}

// Frequency beyond which the damped integrand carries no visible mass.
double decay_frequency(const ModelParams& p, const VarianceLaw& law, double t, double alpha) {
    const double ref = std::abs(damped_integrand(p, law, t, alpha, 0.0));
    double v = 1.0;
    while (v < 4.0 * kMaxN) {
        if (std::abs(damped_integrand(p, law, t, alpha, v)) * v < 1e-15 * ref) return v;
        v *= 1.5;
    }
    return v;
}

// Half-width in log-strike of the bulk of e^(alpha k) C(k): tilted mean and 12 tilted deviations.
double bulk_half_width(const ModelParams& p, const VarianceLaw& law, double t, double a, double dist) {
    const double h = std::min(1e-2, 0.25 * dist);
    const double f0 = mixture_log_mgf(p, law, t, cplx(a, 0.0)).real();
    const double fp = mixture_log_mgf(p, law, t, cplx(a + h, 0.0)).real();
    const double fm = mixture_log_mgf(p, law, t, cplx(a - h, 0.0)).real();
    const double m1 = (fp - fm) / (2.0 * h);
    const double m2 = (fp - 2.0 * f0 + fm) / (h * h);
    return std::abs(m1) + 12.0 * std::sqrt(std::max(m2, 0.0));
}

int next_pow2(double v) {
    int n = 1;
    while (n < v && n < kMaxN) n <<= 1;
    return n;
}

struct FftRun {
    FftGrid grid;
    std::vector<double> k;
    std::vector<double> price;
};

FftRun run_fft(const ModelParams& p, const VarianceLaw& law, double t, const FftSettings& s,
              std::span<const double> xs) {
    FftRun out;
    out.grid = fft_grid(p, law, t, s, xs);
    const int n = out.grid.n;
    const double eta = out.grid.eta, lambda = out.grid.lambda, alpha = out.grid.alpha;
    const double k0 = out.grid.k0;
    const double v_cut = 2.0 * decay_frequency(p, law, t, alpha);

    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan;
#pragma omp critical(randheston_fftw)
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);

    for (int j = 0; j < n; ++j) {
        const double v = eta * j;
        cplx val = 0.0;
        if (v <= v_cut) {
            // Simpson weights 1/3, 4/3, 2/3, 4/3, ...
            const double w = j == 0 ? 1.0 / 3.0 : (j % 2 == 1 ? 4.0 / 3.0 : 2.0 / 3.0);
            val = std::exp(cplx(0.0, -k0 * v)) * damped_integrand(p, law, t, alpha, v) * eta * w;
        }
        buf[j][0] = val.real();
        buf[j][1] = val.imag();
    }
    fftw_execute(plan);

    out.k.resize(n);
    out.price.resize(n);
    for (int u = 0; u < n; ++u) {
        const double k = k0 + lambda * u;
        out.k[u] = k;
        out.price[u] = std::exp(-alpha * k) / kPi * buf[u][0];
    }
#pragma omp critical(randheston_fftw)
    fftw_destroy_plan(plan);
    fftw_free(buf);
    return out;
}

double interpolate(const FftRun& run, double x) {
    const auto& k = run.k;
    if (x < k.front() || x > k.back())
        throw Error(ErrorKind::OutsideDomain, "log-strike outside the FFT strike grid");
    const double pos = (x - k.front()) / run.grid.lambda;
    const double node = std::round(pos);
    if (std::abs(pos - node) < 1e-7) return run.price[static_cast<std::size_t>(node)];
    const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(pos), 0,
                                                          static_cast<std::ptrdiff_t>(k.size()) - 2);
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(idx - 3, 0, static_cast<std::ptrdiff_t>(k.size()) - 8);
    std::vector<double> kx(k.begin() + lo, k.begin() + lo + 8);
    std::vector<double> py(run.price.begin() + lo, run.price.begin() + lo + 8);
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(kx), std::move(py));
    return spline(x);
}

}  // namespace

double admissible_alpha(const ModelParams& p, const VarianceLaw& law, double t, double alpha) {
    if (alpha >= -1.0 && alpha <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "damping must be positive (calls) or below -1 (puts)");
    const auto [lo, hi] = real_moment_domain(p, law, t);
    // Besides staying inside the strip, keep M(alpha + 1) moderate: at long maturities the damped
    // transform otherwise cancels down to roundoff.
    auto tame = [&](double a) { return mixture_log_mgf(p, law, t, cplx(a, 0.0)).real() <= 15.0; };
    for (int i = 0; i < 60; ++i) {
        if (alpha > 0.0 && alpha + 1.0 <= 1.0 + 0.5 * (hi - 1.0) && tame(alpha + 1.0)) return alpha;
        if (alpha < 0.0 && alpha + 1.0 >= 0.5 * lo && tame(alpha + 1.0)) return alpha;
        alpha = alpha > 0.0 ? 0.5 * alpha : -1.0 + 0.5 * (alpha + 1.0);
    }
    throw Error(ErrorKind::OutsideDomain, "no admissible damping: moments explode next to the strip");
}

FftGrid fft_grid(const ModelParams& p, const VarianceLaw& law, double t, const FftSettings& s,
                 std::span<const double> xs) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    FftGrid g{};
    g.alpha = admissible_alpha(p, law, t, s.alpha);
    if (s.n != 0 && (s.n < (1 << 10) || s.n > kMaxN || (s.n & (s.n - 1)) != 0))
        throw Error(ErrorKind::InvalidArgument, "FFT size must be a power of two in [2^10, 2^16]");
    if (s.eta < 0.0) throw Error(ErrorKind::InvalidArgument, "FFT frequency step must be positive");
    if (s.n > 0 && s.eta > 0.0) {
        g.n = s.n;
        g.eta = s.eta;
        g.lambda = 2.0 * kPi / (g.n * g.eta);
        g.k0 = -0.5 * g.n * g.lambda;
        return g;
    }
    // Simpson mixes step eta with step 2 eta; keep the 2 eta aliasing from the nearest
    // singularity (strike poles at 0 and 1, moment explosion) near e^-30.
    const auto [lo, hi] = real_moment_domain(p, law, t);
    const double a = g.alpha + 1.0;
    const double dist = std::min({std::abs(a), std::abs(a - 1.0), hi - a, a - lo});
    const double v_max = decay_frequency(p, law, t, g.alpha);
    // The strike period must also hold the bulk of the damped call, which drifts away at long maturities.
    const double eta_max =
        std::min({0.25, kPi * dist / 30.0, kPi / bulk_half_width(p, law, t, a, dist)});
    const double lambda_max = std::min(0.01, 2.0 * kPi / v_max);
    if (s.n > 0 || s.eta > 0.0) {
        g.eta = s.eta > 0.0 ? s.eta : eta_max;
        g.n = s.n > 0 ? s.n : std::max(kMinN, next_pow2(2.0 * kPi / (lambda_max * g.eta)));
        g.lambda = 2.0 * kPi / (g.n * g.eta);
        g.k0 = -0.5 * g.n * g.lambda;
        return g;
    }

    // Uniformly spaced strikes are placed on grid nodes so no interpolation is needed.
    bool uniform = !xs.empty();
    double spacing = 0.0;
    if (xs.size() >= 2) {
        spacing = xs[1] - xs[0];
        for (std::size_t i = 1; i < xs.size() && uniform; ++i)
            uniform = spacing > 0.0 && std::abs(xs[i] - xs[i - 1] - spacing) <= 1e-9 * spacing;
    }
    int per_step = 1;
    g.lambda = lambda_max;
    if (uniform && xs.size() >= 2) {
        per_step = static_cast<int>(std::ceil(spacing / lambda_max - 1e-9));
        g.lambda = spacing / per_step;
    }
    g.n = std::max(kMinN, next_pow2(2.0 * kPi / (g.lambda * eta_max)));
    if (g.n * g.lambda * eta_max < 2.0 * kPi * (1.0 - 1e-12)) {
        // Size cap reached: keep eta (strike-side aliasing) and give up frequency range instead.
        const double lambda_min = 2.0 * kPi / (g.n * eta_max);
        g.lambda = lambda_min;
        per_step = 1;
        if (uniform && xs.size() >= 2) {
            per_step = static_cast<int>(std::floor(spacing / lambda_min + 1e-9));
            if (per_step >= 1) {
                g.lambda = spacing / per_step;
            } else {
                uniform = false;
                per_step = 1;
            }
        }
    }
    g.eta = 2.0 * kPi / (g.n * g.lambda);
    const double span_nodes = xs.size() >= 2 ? static_cast<double>(xs.size() - 1) * per_step : 0.0;
    if (uniform && span_nodes < 0.5 * g.n) {
        const double first = std::round(0.5 * g.n - 0.5 * span_nodes);
        g.k0 = xs[0] - g.lambda * first;
    } else {
        g.k0 = -0.5 * g.n * g.lambda;
    }
    return g;
}

std::vector<OptionQuote> price_call_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                        std::span<const double> xs, const FftSettings& s,
                                        FftDiagnostics* diag) {
    FftSettings cs = s;
    if (cs.alpha < 0.0) cs.alpha = 1.5;
    const FftRun run = run_fft(p, law, t, cs, xs);
    std::vector<OptionQuote> out;
    out.reserve(xs.size());
    std::size_t clipped = 0;
    for (double x : xs) {
        double c = interpolate(run, x);
        const double lo = intrinsic_call(x);
        if (c < lo || c > 1.0) {
            c = std::clamp(c, lo, 1.0);
            ++clipped;
        }
        out.push_back({t, x, c});
    }
    if (diag) {
        diag->call_grid = run.grid;
        diag->clipped += clipped;
    }
    return out;
}

std::vector<double> price_put_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                  std::span<const double> xs, const FftSettings& s) {
    FftSettings ps = s;
    if (ps.alpha > -1.0) ps.alpha = -2.5;
    const FftRun run = run_fft(p, law, t, ps, xs);
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        const double lo = x > 0.0 ? std::expm1(x) : 0.0;
        out.push_back(std::clamp(interpolate(run, x), lo, std::exp(x)));
    }
    return out;
}

std::vector<double> price_otm_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                  std::span<const double> xs, FftDiagnostics* diag) {
    const bool any_put = std::any_of(xs.begin(), xs.end(), [](double x) { return x < 0.0; });
    const bool any_call = std::any_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0; });
    FftRun calls, puts;
    if (any_call) calls = run_fft(p, law, t, FftSettings{1.5}, xs);
    if (any_put) puts = run_fft(p, law, t, FftSettings{-2.5}, xs);
    std::vector<double> out;
    out.reserve(xs.size());
    std::size_t clipped = 0;
    for (double x : xs) {
        double v = x >= 0.0 ? interpolate(calls, x) : interpolate(puts, x);
        const double hi = x >= 0.0 ? 1.0 : std::exp(x);
        if (v < 0.0 || v > hi) {
            v = std::clamp(v, 0.0, hi);
            ++clipped;
        }
        out.push_back(v);
    }
    if (diag) {
        if (any_call) diag->call_grid = calls.grid;
        if (any_put) diag->put_grid = puts.grid;
        diag->clipped += clipped;
    }
    return out;
}

QuadratureQuote price_call_quadrature(const ModelParams& p, const VarianceLaw& law, double t, double x) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "maturity must be positive");
    const auto [lo, hi] = real_moment_domain(p, law, t);
    const bool call_side = x >= 0.0;
    double a_lo = call_side ? 1.0 : lo;
    double a_hi = call_side ? hi : 0.0;
    const double pad = 1e-9 * std::max(1.0, a_hi - a_lo);
    a_lo += pad;
    a_hi -= pad;

    auto h = [&](double a) {
        return mixture_log_mgf(p, law, t, a).real() + (1.0 - a) * x - std::log(a * (a - 1.0));
    };
    const double a = minimise(h, a_lo, a_hi, 1e-12).first;
    const double ha = h(a);

    const double step = 1e-3 * std::min({a - a_lo, a_hi - a, 1.0});
    double curv = (h(a + step) - 2.0 * ha + h(a - step)) / (step * step);
    if (!(curv > 0.0) || !std::isfinite(curv)) curv = 1.0;
    const double w0 = 0.5 / std::sqrt(curv);

    auto integrand = [&](double v) -> cplx {
        const cplx u(a, v);
        return std::exp(mixture_log_mgf(p, law, t, u) + (1.0 - u) * x - ha) / (u * (u - 1.0));
    };
    auto re_part = [&](double v) { return integrand(v).real(); };

    // Panels start at the saddle curvature scale and widen geometrically into the tail.
    double total = quadrature_abs(re_part, 0.0, w0, 1e-13 * w0);
    double v = w0, w = w0;
    int quiet = 0;
    for (int panel = 0; panel < 20000; ++panel) {
        const double piece = quadrature_abs(re_part, v, v + w, 1e-14 * std::abs(total));
        total += piece;
        v += w;
        if (panel >= 4) w *= 1.25;
        const double envelope = std::abs(integrand(v)) * std::max(v, w0);
        if (envelope < 1e-16 * std::abs(total) && std::abs(piece) < 1e-16 * std::abs(total)) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        if (!std::isfinite(total) || v > 1e9) break;
    }
    if (quiet < 3 || !(total > 0.0))
        throw Error(ErrorKind::NonConvergent, "contour integral did not settle");

    QuadratureQuote q;
    q.contour = a;
    q.log_otm = ha + std::log(total / kPi);
    const double otm = std::exp(q.log_otm);
    q.call_price = call_side ? otm : otm + intrinsic_call(x);
    return q;
}

std::vector<std::vector<double>> price_surface_otm(const ModelParams& p, const VarianceLaw& law,
                                                   std::span<const double> ts, std::span<const double> xs) {
    const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(ts.size());
    std::vector<std::vector<double>> rows(ts.size());
    std::vector<std::exception_ptr> errors(ts.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < nt; ++i) {
        try {
            rows[i] = price_otm_fft(p, law, ts[i], xs);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<std::vector<double>> price_surface_otm_serial(const ModelParams& p, const VarianceLaw& law,
                                                          std::span<const double> ts,
                                                          std::span<const double> xs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(ts.size());
    for (double t : ts) rows.push_back(price_otm_fft(p, law, t, xs));
    return rows;
}

}  // namespace randheston
