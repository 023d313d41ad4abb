#include "randheston/cli.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "randheston/blackscholes.hpp"
#include "randheston/dynamics.hpp"
#include "randheston/large_time.hpp"
#include "randheston/parallel.hpp"
#include "randheston/pricing.hpp"
#include "randheston/smile_asymptotics.hpp"

namespace randheston {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool skippable(ErrorKind k) {
    return k == ErrorKind::AtmUndefined || k == ErrorKind::UnsupportedOmega ||
           k == ErrorKind::UnsupportedForwardCase || k == ErrorKind::InvalidRegime;
}

double iv_from_otm(double t, double x, double otm) {
    if (!(otm > 0.0)) return kNaN;
    try {
        return implied_vol_from_log_otm(t, x, std::log(otm));
    } catch (const Error&) {
        return kNaN;
    }
}

// Implied volatility predicted by one engine, NaN when it does not apply at (t, x).
double engine_iv(const std::string& engine, const Config& cfg, const VarianceLaw& law, double t, double x) {
    const ModelParams& p = cfg.model;
    const Randomiser& r = cfg.randomiser;
    const TailClass tail = tail_class(r);
    auto root = [](double v) { return v > 0.0 ? std::sqrt(v) : kNaN; };
    try {
        if (engine == "quad") return implied_vol_from_log_otm(t, x, price_call_quadrature(p, law, t, x).log_otm);
        if (engine == "atm") return x == 0.0 ? atm_limit(r) : kNaN;
        if (engine == "largetime") return root(large_time_smile(p, r, x / t));
        if (engine == "asym" && x == 0.0) return atm_limit(r);
        if (engine == "bounded" || engine == "asym")
            if (const auto* b = std::get_if<Bounded>(&tail)) return root(bounded_smile(p, b->v_plus, x));
        if (engine == "thin" || engine == "asym")
            if (const auto* th = std::get_if<Thin>(&tail)) return root(thin_smile(*th, t, x));
        if (engine == "fat" || engine == "asym")
            if (const auto* f = std::get_if<Fat>(&tail)) return root(fat_smile(p, *f, t, x, cfg.order));
        return kNaN;
    } catch (const Error& e) {
        if (skippable(e.kind())) return kNaN;
        throw EngineFailure(engine, e);
    }
}

std::vector<double> fft_otm(const ModelParams& p, const VarianceLaw& law, double t, const std::vector<double>& xs) {
    try {
        return price_otm_fft(p, law, t, xs);
    } catch (const Error& e) {
        throw EngineFailure("fft", e);
    }
}

// Runs body(i) for each maturity in parallel and rethrows the first failure in maturity order.
template <class Body>
void for_each_maturity(std::size_t n, Body body) {
    std::vector<std::exception_ptr> errors(n);
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string join_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& blocks) {
    std::string out = csv_row(header);
    for (const auto& block : blocks)
        for (const auto& row : block) out += row;
    return out;
}

}  // namespace

const std::vector<std::string>& smile_engines() {
    static const std::vector<std::string> names{"quad", "asym", "bounded", "thin", "fat", "atm", "largetime"};
    return names;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    return out + "\r\n";
}

std::string cmd_smile(const Config& cfg) {
    std::vector<std::string> engines;
    for (const auto& e : cfg.engines) {
        if (e == "fft") continue;
        bool known = false;
        for (const auto& k : smile_engines()) known = known || k == e;
        if (!known) throw ConfigError("unknown engine '" + e + "'");
        engines.push_back(e);
    }
    std::vector<std::string> header{"t", "x", "iv_fft"};
    for (const auto& e : engines) header.push_back("iv_" + e);
    for (const auto& e : engines) header.push_back("abs_err_" + e);

    const auto ts = cfg.t.points();
    const auto xs = cfg.x.points();
    std::vector<std::vector<std::string>> blocks(ts.size());
    if (xs.empty()) return csv_row(header);
    const VarianceLaw law = law_of(cfg.randomiser);
    for_each_maturity(ts.size(), [&](std::size_t i) {
        const double t = ts[i];
        const auto otm = fft_otm(cfg.model, law, t, xs);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double ref = iv_from_otm(t, xs[j], otm[j]);
            std::vector<std::string> row{csv_number(t), csv_number(xs[j]), csv_number(ref)};
            std::vector<std::string> errs;
            for (const auto& e : engines) {
                const double iv = engine_iv(e, cfg, law, t, xs[j]);
                row.push_back(csv_number(iv));
                errs.push_back(csv_number(std::abs(iv - ref)));
            }
            row.insert(row.end(), errs.begin(), errs.end());
            blocks[i].push_back(csv_row(row));
        }
    });
    return join_rows(header, blocks);
}

std::string cmd_surface(const Config& cfg) {
    const std::vector<std::string> header{"t", "x", "otm_price", "iv_fft"};
    const auto ts = cfg.t.points();
    const auto xs = cfg.x.points();
    if (ts.empty() || xs.empty()) return csv_row(header);
    std::vector<std::vector<double>> surface;
    try {
        surface = price_surface_otm(cfg.model, law_of(cfg.randomiser), ts, xs);
    } catch (const Error& e) {
        throw EngineFailure("fft", e);
    }
    std::string out = csv_row(header);
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            out += csv_row({csv_number(ts[i]), csv_number(xs[j]), csv_number(surface[i][j]),
                            csv_number(iv_from_otm(ts[i], xs[j], surface[i][j]))});
    return out;
}

std::string cmd_forward(const Config& cfg) {
    const std::vector<std::string> header{"t", "tau", "x", "iv_fft", "iv_forward", "abs_err_forward"};
    const auto taus = cfg.t.points();
    const auto xs = cfg.x.points();
    if (taus.empty() || xs.empty()) return csv_row(header);
    VarianceLaw law;
    try {
        law = forward_law(cfg.model, cfg.randomiser, cfg.elapsed);
    } catch (const Error& e) {
        throw EngineFailure("forward", e);
    }
    std::vector<std::vector<std::string>> blocks(taus.size());
    for_each_maturity(taus.size(), [&](std::size_t i) {
        const double tau = taus[i];
        const auto otm = fft_otm(cfg.model, law, tau, xs);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double ref = iv_from_otm(tau, xs[j], otm[j]);
            double iv = kNaN;
            try {
                const double v = forward_smile(cfg.model, cfg.randomiser, cfg.elapsed, tau, xs[j], cfg.order);
                iv = v > 0.0 ? std::sqrt(v) : kNaN;
            } catch (const Error& e) {
                if (!skippable(e.kind())) throw EngineFailure("forward", e);
            }
            blocks[i].push_back(csv_row({csv_number(cfg.elapsed), csv_number(tau), csv_number(xs[j]),
                                         csv_number(ref), csv_number(iv), csv_number(std::abs(iv - ref))}));
        }
    });
    return join_rows(header, blocks);
}

std::string cmd_largetime(const Config& cfg) {
    const ModelParams& p = cfg.model;
    try {
        const LargeTimeCgf cgf = large_time_cgf(p);
        std::string out = csv_row({"label", "x", "sigma2"});
        out += csv_row({"anchor_left", csv_number(-0.5 * p.theta), csv_number(large_time_smile(p, cfg.randomiser, -0.5 * p.theta))});
        out += csv_row({"fixed_strike", "0", csv_number(fixed_strike_limit(p, cfg.randomiser))});
        out += csv_row({"anchor_right", csv_number(0.5 * cgf.theta_bar),
                        csv_number(large_time_smile(p, cfg.randomiser, 0.5 * cgf.theta_bar))});
        for (double x : cfg.x.points())
            out += csv_row({"smile", csv_number(x), csv_number(large_time_smile(p, cfg.randomiser, x))});
        return out;
    } catch (const Error& e) {
        throw EngineFailure("largetime", e);
    }
}

std::string cmd_calibrate(const Config& cfg, std::optional<double> v0) {
    try {
        return randomiser_block(calibrate_to_spot(cfg.randomiser, v0.value_or(cfg.v0)));
    } catch (const Error& e) {
        throw EngineFailure("calibrate", e);
    }
}

}  // namespace randheston
