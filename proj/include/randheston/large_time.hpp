#pragma once

#include "randheston/heston.hpp"
#include "randheston/numerics.hpp"
#include "randheston/randomiser.hpp"

namespace randheston {

/// Limit of log M(t, u) / t as t grows, finite on [u_minus, u_plus].
struct LargeTimeCgf {
    ModelParams params;
    double u_minus;
    double u_plus;
    /// kappa theta / (kappa - rho xi).
    double theta_bar;

    double value(double u) const;
    double derivative(double u) const;
};

/// Throws LeverageViolation unless kappa > rho xi, InvalidArgument when |rho| = 1.
LargeTimeCgf large_time_cgf(const ModelParams& p);
LegendreResult large_time_rate(const ModelParams& p, double x);

struct Admissibility {
    bool admissible;
    /// m xi^2 - max{u-(u- - 1), u+(u+ - 1)}; +inf for entire mgfs.
    double margin;
};
Admissibility check_admissible(const ModelParams& p, const Randomiser& r);

/// Limit of the implied variance at log-strike x t as t grows; throws NotAdmissible.
double large_time_smile(const ModelParams& p, const Randomiser& r, double x);
/// Limit of the implied variance at a fixed strike.
double fixed_strike_limit(const ModelParams& p, const Randomiser& r);

}  // namespace randheston
