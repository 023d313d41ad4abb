#pragma once

#include <optional>
#include <string>
#include <vector>

#include "randheston/config.hpp"
#include "randheston/types.hpp"

namespace randheston {

/// A numerical failure inside one engine column; the CLI maps it to exit code 3.
class EngineFailure : public std::runtime_error {
public:
    EngineFailure(std::string engine, const Error& cause)
        : std::runtime_error("engine " + engine + ": " + cause.what()), engine_(std::move(engine)),
          kind_(cause.kind()) {}

    const std::string& engine() const noexcept { return engine_; }
    ErrorKind kind() const noexcept { return kind_; }

private:
    std::string engine_;
    ErrorKind kind_;
};

/// Engines accepted by the smile command, besides the fft reference column.
const std::vector<std::string>& smile_engines();

/// 12 significant digits, locale independent; NaN prints as an empty field.
std::string csv_number(double v);
/// RFC 4180 quoting when the field holds a comma, quote or line break.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

/// Columns t,x,iv_fft,iv_<engine>...,abs_err_<engine>...
std::string cmd_smile(const Config& cfg);
/// Columns t,x,otm_price,iv_fft over the full (t, x) grid.
std::string cmd_surface(const Config& cfg);
/// Columns t,tau,x,iv_fft,iv_forward,abs_err_forward; t is the elapsed time, tau runs over the t grid.
std::string cmd_forward(const Config& cfg);
/// Columns label,x,sigma2: the regime anchors, the fixed-strike limit and the limit smile on the x grid.
std::string cmd_largetime(const Config& cfg);
/// randomiser section recalibrated so that E[sqrt V] = sqrt(v0).
std::string cmd_calibrate(const Config& cfg, std::optional<double> v0 = std::nullopt);

}  // namespace randheston
