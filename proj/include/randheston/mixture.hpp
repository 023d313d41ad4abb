#pragma once

#include <functional>
#include <string>
#include <utility>

#include "randheston/heston.hpp"
#include "randheston/randomiser.hpp"

namespace randheston {

/// Law of the initial variance seen through its complex log-mgf and real mgf endpoint.
struct VarianceLaw {
    std::function<cplx(cplx)> log_mgf;
    double endpoint;
    std::string label;
};

VarianceLaw law_of(const Randomiser& r);

/// log E[exp(u X_t)] = C(t, u) + log M_V(D(t, u)); throws OutsideDomain once Re D reaches the endpoint.
cplx mixture_log_mgf(const ModelParams& p, const VarianceLaw& law, double t, cplx u);
cplx mixture_log_mgf(const ModelParams& p, const Randomiser& r, double t, cplx u);

/// Open real interval of u on which the mixture mgf at maturity t is finite.
std::pair<double, double> real_moment_domain(const ModelParams& p, const VarianceLaw& law, double t);

}  // namespace randheston
