#pragma once

#include <cstdint>

#include "mvc/dmc.hpp"
#include "mvc/multiview.hpp"

// Normal-approximation rate bounds for multi-view channels, with exact
// mutual information and dispersion substituted. Non-singularity of the
// channel is an assumption of the underlying expansion and is surfaced in
// the result, not checked.
namespace mvc {

// Phi(t), standard normal CDF
double gaussian_cdf(double t);

// Phi^{-1}(q) for q in (0,1); |Phi(Phi^{-1}(q)) - q| <= 1e-12 over
// [1e-10, 1 - 1e-10]
double inverse_gaussian_cdf(double q);

struct FblQuery {
    std::int64_t n = 1;     // channel uses
    double epsilon = 0.01;  // target error, in (0,1)
    int d = 1;              // views
};

struct FblResult {
    double rate = 0.0;            // nats per channel use, normal approximation
    double mutual_info = 0.0;     // exact I^(d)
    double dispersion = 0.0;      // exact V^(d)
    double gap_to_entropy = 0.0;  // H(X) - rate
    // the expansion this is built on assumes a non-singular channel
    bool assumes_non_singular = true;
};

// I^(d) + Phi^{-1}(eps) sqrt(V^(d)/n) + log(n)/(2n). Degenerate dispersion
// (V^(d) = 0) is reported as a distinct error, never silently.
FblResult normal_approx_rate(const Dmc& channel, const FiniteDistribution& input,
                             const FblQuery& query, const MultiViewOptions& opt = {});

}  // namespace mvc
