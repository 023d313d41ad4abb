#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "randheston/mixture.hpp"

namespace randheston {

struct OptionQuote {
    double t;
    double x;
    double call_price;
};

struct FftSettings {
    /// Carr-Madan damping; values below -1 price puts (the put engines default to -2.5).
    double alpha = 1.5;
    /// Grid size and frequency step; zero selects them from the decay of the transform.
    int n = 0;
    double eta = 0.0;
};

struct FftGrid {
    double alpha;
    double eta;
    /// Log-strike spacing; eta * lambda = 2 pi / n.
    double lambda;
    /// Log-strike of the first node.
    double k0;
    int n;
};

struct FftDiagnostics {
    FftGrid call_grid{};
    FftGrid put_grid{};
    /// Prices moved back inside the no-arbitrage bounds.
    std::size_t clipped = 0;
};

/// Damping actually used for a requested alpha at maturity t, halved towards the admissible range.
double admissible_alpha(const ModelParams& p, const VarianceLaw& law, double t, double alpha);
/// Grid for maturity t; when xs is uniformly spaced the strikes land on nodes.
FftGrid fft_grid(const ModelParams& p, const VarianceLaw& law, double t, const FftSettings& s,
                 std::span<const double> xs = {});

/// Call prices on arbitrary log-strikes (monotone cubic interpolation off the FFT grid).
std::vector<OptionQuote> price_call_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                        std::span<const double> xs, const FftSettings& s = {},
                                        FftDiagnostics* diag = nullptr);
/// Put prices from the same transform with damping below -1.
std::vector<double> price_put_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                  std::span<const double> xs, const FftSettings& s = {});
/// Out-of-the-money values (put for x < 0, call otherwise), each from its own damped transform.
std::vector<double> price_otm_fft(const ModelParams& p, const VarianceLaw& law, double t,
                                  std::span<const double> xs, FftDiagnostics* diag = nullptr);

struct QuadratureQuote {
    double call_price;
    /// log of the out-of-the-money value, accurate even when the price underflows.
    double log_otm;
    /// Real part of the contour.
    double contour;
};

/// Single-strike inversion along the saddle contour; the reference engine for the FFT.
QuadratureQuote price_call_quadrature(const ModelParams& p, const VarianceLaw& law, double t, double x);

/// OTM values on a (maturity x strike) grid, rows by maturity. Parallel over maturities.
std::vector<std::vector<double>> price_surface_otm(const ModelParams& p, const VarianceLaw& law,
                                                   std::span<const double> ts, std::span<const double> xs);
/// Same surface evaluated serially; kept as the reference for the parallel kernel.
std::vector<std::vector<double>> price_surface_otm_serial(const ModelParams& p, const VarianceLaw& law,
                                                          std::span<const double> ts,
                                                          std::span<const double> xs);

}  // namespace randheston
