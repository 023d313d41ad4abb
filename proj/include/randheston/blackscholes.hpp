#pragma once

#include <optional>

namespace randheston {

/// Call on unit spot with log-strike x, zero rates.
double bs_call(double t, double x, double sigma);
double bs_put(double t, double x, double sigma);
/// dC/dsigma.
double bs_vega(double t, double x, double sigma);

/// log of the out-of-the-money time value: call for x >= 0, put for x < 0.
double log_bs_otm(double t, double x, double sigma);

/// Inverts bs_call; throws NoArbitrageViolation outside (intrinsic, 1).
double implied_vol(double t, double x, double call_price);
/// Same inversion from the log of the OTM time value, which keeps accuracy for tiny prices.
double implied_vol_from_log_otm(double t, double x, double log_otm);

/// sqrt(v t / (2 pi)) + b t^(3/2); b is supplied by the caller when known.
double bs_atm_expansion(double t, double v, std::optional<double> b = std::nullopt);

}  // namespace randheston
