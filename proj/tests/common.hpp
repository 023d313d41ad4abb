#pragma once

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "randheston/heston.hpp"

namespace testing {

inline randheston::ModelParams base_params() { return randheston::ModelParams::make(2.1, 0.05, 0.1, -0.6); }

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

/// Least-squares slope of ys against xs.
inline double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
