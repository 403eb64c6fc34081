#pragma once

#include <vector>

#include "mvc/dmc.hpp"
#include "mvc/multiview.hpp"
#include "mvc/prob.hpp"

// Sanov/Chernoff exponent machinery: log-likelihood-ratio profiles, the
// tilted family and its partition function, the exponent E(v), a primal
// grid oracle for the dual-primal equality, and exact tail probabilities
// of the weighted likelihood-ratio event.
namespace mvc {

struct LlrProfile {
    FiniteDistribution base;  // P_{Y|x}
    FiniteDistribution alt;   // P_{Y|x_tilde}
    std::vector<double> llr;  // log(base/alt) per letter, +-inf one-sided

    static LlrProfile make(FiniteDistribution base, FiniteDistribution alt);
    static LlrProfile from_rows(const Dmc& channel, int x, int x_tilde);

    // E_base[llr] = D(base||alt); +inf when alt misses base's support
    double mean_llr() const;
    // smallest llr over base's support (+inf when the supports are disjoint)
    double min_llr() const;
};

// Exponentially tilted family Q*(lambda) proportional to base * exp(-lambda llr).
class TiltedFamily {
  public:
    explicit TiltedFamily(LlrProfile profile);
    const LlrProfile& profile() const { return profile_; }

    // log Z(lambda), Z(lambda) = sum_y base(y) exp(-lambda llr(y)); Z(0) = 1.
    // One-sided letters leave the family for lambda > 0.
    double log_partition(double lambda) const;
    // normalized tilted distribution at lambda
    FiniteDistribution tilted(double lambda) const;
    // E_{Q*(lambda)}[llr], the constraint-saturation path
    double tilted_mean_llr(double lambda) const;

  private:
    LlrProfile profile_;
    std::vector<int> common_;          // letters with base > 0 and alt > 0
    std::vector<double> log_base_;     // over common support
    std::vector<double> neg_llr_;      // over common support
};

// E(v) = max_{lambda >= 0} [-log Z(lambda) - lambda v]; +inf for
// v < min llr over the base support, 0 for v >= D(base||alt)
double exponent(const LlrProfile& profile, double v);

// the same maximum restricted to lambda in [0,1]
double exponent_restricted(const LlrProfile& profile, double v);

// min D(Q||base) over {Q : E_Q[llr] <= v} by simplex-grid enumeration with
// a projected-gradient refinement; alphabet size at most 4. Independent of
// the dual path above; documented accuracy ~1e-3 at resolution 2000.
double primal_sanov_oracle(const LlrProfile& profile, double v, int grid_resolution = 2000);

// Gamma_{x,x~}(z) = P[ P(x)P(Y^d|x) / (P(x~)P(Y^d|x~)) <= c e^{-z}/(1-e^{-z}) | X=x ],
// exact over type classes (the log-likelihood ratio is linear in the type)
double gamma_probability(const Dmc& channel, const FiniteDistribution& input, int x,
                         int x_tilde, int d, double z, double c,
                         const MultiViewOptions& opt = {});

}  // namespace mvc
