#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "randheston/types.hpp"

namespace randheston {

struct Dirac {
    double v0;
    bool operator==(const Dirac&) const = default;
};
struct Uniform {
    double lo, hi;
    bool operator==(const Uniform&) const = default;
};
struct Exponential {
    double rate;
    bool operator==(const Exponential&) const = default;
};
struct Gamma {
    double shape, rate;
    bool operator==(const Gamma&) const = default;
};
/// scale * chi^2(dof, noncentrality).
struct ScaledNCX2 {
    double scale, dof, noncentrality;
    bool operator==(const ScaledNCX2&) const = default;
};
/// Density 2 sqrt(l1/pi) exp(-l1 v^2) on v > 0.
struct FoldedGaussian {
    double l1;
    bool operator==(const FoldedGaussian&) const = default;
};
struct Weibull {
    double scale, shape;
    bool operator==(const Weibull&) const = default;
};

using Randomiser = std::variant<Dirac, Uniform, Exponential, Gamma, ScaledNCX2, FoldedGaussian, Weibull>;

struct Bounded {
    double v_plus;
};
/// log density ~ -l1 v^l2 for large v.
struct Thin {
    double l1, l2;
};
/// log M(m - s) ~ g0 log s + g1 (omega = 1) or g0/s^(omega-1) {1 + g1 s log s + g2 s} (omega >= 2).
struct Fat {
    double m;
    double g0;
    double g1;
    std::optional<double> g2;
    int omega;
};
using TailClass = std::variant<Bounded, Thin, Fat>;

struct Moments {
    double mean;
    double var;
    double mean_sqrt;
};

/// Throws InvalidArgument on non-positive or inconsistent parameters.
void validate(const Randomiser& r);
std::string name(const Randomiser& r);

/// Upper end of the real domain of the mgf; +inf when entire.
double mgf_endpoint(const Randomiser& r);

/// log E[exp(z V)]; requires Re z < mgf_endpoint.
cplx log_mgf(const Randomiser& r, cplx z);
double log_mgf(const Randomiser& r, double z);

/// M'(z) / M(z) for real z below the endpoint.
double mgf_derivative_ratio(const Randomiser& r, double z);

TailClass tail_class(const Randomiser& r);
Moments moments(const Randomiser& r);

/// Replaces the free scale parameter so that E[sqrt V] = sqrt(v0).
/// Dirac: v0; Uniform: upper end; Exponential, Gamma: rate; ScaledNCX2: scale;
/// FoldedGaussian: l1; Weibull: scale. Other parameters are kept.
Randomiser calibrate_to_spot(const Randomiser& tmpl, double v0);

/// Leading behaviour of log M for large real z under log f(v) ~ -l1 v^l2.
double thin_log_mgf_asymptote(const Thin& tail, double z);

/// The seven reference laws matched to v0 = 0.06, with the non-central chi-square left uncalibrated.
std::vector<std::pair<std::string, Randomiser>> catalog();

}  // namespace randheston
