#pragma once

#include <utility>

#include "randheston/types.hpp"

namespace randheston {

/// Heston dynamics (kappa, theta, xi, rho) for the variance and the log-price.
struct ModelParams {
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double rho = 0.0;

    /// Throws InvalidArgument unless kappa, theta, xi > 0 and |rho| <= 1.
    static ModelParams make(double kappa, double theta, double xi, double rho);

    double rho_bar() const;
    /// |rho| < 1 and kappa > rho * xi.
    bool large_time_ok() const;
};

void validate(const ModelParams& p);

cplx d(const ModelParams& p, cplx u);
cplx g(const ModelParams& p, cplx u);

struct AffinePair {
    cplx C;
    cplx D;
};

/// C(t, u) and D(t, u) such that E[exp(u X_t) | V_0 = v] = exp(C + D v).
AffinePair affine(const ModelParams& p, double t, cplx u);
cplx heston_C(const ModelParams& p, double t, cplx u);
cplx heston_D(const ModelParams& p, double t, cplx u);

/// Argument of the logarithm inside C; continuous in u on the right branch.
cplx c_log_argument(const ModelParams& p, double t, cplx u);

/// Unwraps arg(.) along a path; a step above pi/2 between neighbours is treated as unresolvable.
class BranchTracker {
public:
    void reset() { started_ = false; }
    /// Throws BranchFailure on a jump; returns the unwrapped argument.
    double observe(cplx value);

private:
    bool started_ = false;
    double last_arg_ = 0.0;
    double unwrapped_ = 0.0;
};

/// Small-time limit Lambda(u) of t log M(t, u/t) per unit initial variance.
double lambda_limit(const ModelParams& p, double u);
double lambda_derivative(const ModelParams& p, double u);
double lambda_second(const ModelParams& p, double u);
/// Open interval (u_minus, u_plus) on which lambda_limit is finite.
std::pair<double, double> lambda_domain(const ModelParams& p);

/// Coefficients of d(u/t) and g(u/t) for t -> 0; they depend on u through sgn(u) (and d2 on u).
struct AffineCoeffs {
    cplx d0, d1, g0, g1, d2, g2;
};
AffineCoeffs affine_coeffs(const ModelParams& p, double u);

/// Second-order terms of D(t, u / (t + beta t^2)) and C(t, u / t) as t -> 0.
cplx D0_beta_complex(const ModelParams& p, double beta, double u);
cplx C0_complex(const ModelParams& p, double u);
double D0_beta(const ModelParams& p, double beta, double u);
double C0(const ModelParams& p, double u);

/// Real interval of u where D(t, u) stays finite (no moment explosion before t).
std::pair<double, double> explosion_bounds(const ModelParams& p, double t);

}  // namespace randheston
