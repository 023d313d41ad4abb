#include "randheston/mixture.hpp"

#include <cmath>

#include "randheston/numerics.hpp"

namespace randheston {

VarianceLaw law_of(const Randomiser& r) {
    validate(r);
    return {[r](cplx z) { return log_mgf(r, z); }, mgf_endpoint(r), name(r)};
}

cplx mixture_log_mgf(const ModelParams& p, const VarianceLaw& law, double t, cplx u) {
    const AffinePair cd = affine(p, t, u);
    if (!(cd.D.real() < law.endpoint) || !std::isfinite(cd.D.real()))
        throw Error(ErrorKind::OutsideDomain, "moment explosion: Re D(t, u) beyond the mgf endpoint");
    return cd.C + law.log_mgf(cd.D);
}

cplx mixture_log_mgf(const ModelParams& p, const Randomiser& r, double t, cplx u) {
    return mixture_log_mgf(p, law_of(r), t, u);
}

std::pair<double, double> real_moment_domain(const ModelParams& p, const VarianceLaw& law, double t) {
    auto [lo, hi] = explosion_bounds(p, t);
    if (!std::isfinite(law.endpoint)) return {lo, hi};
    // D(t, .) is negative on (0, 1) and increases monotonically to +inf towards each explosion edge.
    auto excess = [&](double u) {
        const double dv = heston_D(p, t, u).real();
        return std::isfinite(dv) ? dv - law.endpoint : 1.0;
    };
    auto edge = [&](double inner, double outer) {
        double hi_edge = outer - 1e-12 * std::max(1.0, std::abs(outer)) * (outer > inner ? 1.0 : -1.0);
        if (excess(hi_edge) < 0.0) return outer;
        return root_find(excess, inner, hi_edge, 1e-13 * std::max(1.0, std::abs(outer)));
    };
    return {edge(0.0, lo), edge(1.0, hi)};
}

}  // namespace randheston
