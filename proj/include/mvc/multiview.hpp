#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mvc/dmc.hpp"
#include "mvc/prob.hpp"

// Exact multi-view quantities for a DMC: everything the d-view output
// carries about the input is its empirical type, so sums over Y^d collapse
// to sums over compositions of d into |Y| parts.
namespace mvc {

struct TypeClass {
    std::vector<int> counts;  // (t_y), sums to d
    LogReal log_multinomial;  // d! / prod t_y!
};

// number of compositions of d into `parts` nonnegative parts
double count_type_classes(int d, int parts);

// Visits every composition of d into `parts` parts exactly once, in a fixed
// order, with its log-multinomial weight.
template <class F>
void for_each_type_class(int d, int parts, F&& visit) {
    std::vector<double> log_fact(static_cast<std::size_t>(d) + 1);
    for (int i = 1; i <= d; ++i)
        log_fact[static_cast<std::size_t>(i)] =
            log_fact[static_cast<std::size_t>(i) - 1] + std::log(static_cast<double>(i));

    std::vector<int> t(static_cast<std::size_t>(parts), 0);
    const double lf_d = log_fact[static_cast<std::size_t>(d)];
    auto rec = [&](auto&& self, int idx, int remaining, double lf_used) -> void {
        if (idx == parts - 1) {
            t[static_cast<std::size_t>(idx)] = remaining;
            const double lw = lf_d - lf_used - log_fact[static_cast<std::size_t>(remaining)];
            visit(static_cast<const std::vector<int>&>(t), lw);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            t[static_cast<std::size_t>(idx)] = v;
            self(self, idx + 1, remaining - v, lf_used + log_fact[static_cast<std::size_t>(v)]);
        }
    };
    rec(rec, 0, d, 0.0);
}

// materialized stream, budget-checked
std::vector<TypeClass> enumerate_type_classes(int d, int output_size,
                                              std::size_t max_type_classes = 10'000'000);

struct MultiViewReport {
    int d = 0;
    double cond_entropy = 0.0;       // H(X|Y^d), nats
    double mutual_info = 0.0;        // I(X;Y^d) = H(X) - H(X|Y^d)
    double dispersion = 0.0;         // V^(d) from the defining expectation
    double cross_term = 0.0;         // theta_d
    double dispersion_decomp = 0.0;  // V^(d) from the varentropy decomposition
};

struct MultiViewOptions {
    std::size_t max_type_classes = 10'000'000;
    // tolerance for the two dispersion routes; exceeding it raises
    // InvariantViolation
    double decomposition_tol = 1e-9;
};

MultiViewReport multi_view_report(const Dmc& channel, const FiniteDistribution& input,
                                  int d, const MultiViewOptions& opt = {});

enum class RateTarget { EntropyGap, DispersionGap };

struct ExponentReport {
    int d_min = 0;
    int d_max = 0;
    double fitted_rate = 0.0;     // coefficient of -d in the windowed fit
    double predicted_rate = 0.0;  // min-pair Chernoff over the input support
    double relative_gap = 0.0;    // (fitted - predicted) / predicted
};

// Regresses log(gap_d) on (1, d, log d) over [d_min, d_max]; the log d
// regressor absorbs the subexponential factor. Gaps must stay above
// 1e-290 across the window.
ExponentReport fit_convergence_rate(const Dmc& channel, const FiniteDistribution& input,
                                    int d_min, int d_max, RateTarget target,
                                    const MultiViewOptions& opt = {});

// Default window: the largest 20 consecutive d whose gap stays above
// 1e-290, bounded by the enumeration budget.
std::pair<int, int> default_rate_window(const Dmc& channel, const FiniteDistribution& input,
                                        RateTarget target, const MultiViewOptions& opt = {});

// p_x(t) = P[-log P(x|Y^d) >= t | X = x], exact over type classes
double posterior_tail(const Dmc& channel, const FiniteDistribution& input, int x,
                      int d, double t, const MultiViewOptions& opt = {});

}  // namespace mvc
