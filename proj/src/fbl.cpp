#include "mvc/fbl.hpp"

#include <cmath>

#include "mvc/errors.hpp"
#include "mvc/prob.hpp"

namespace mvc {

double gaussian_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation for the probit, then one Halley step
// against erfc brings the round trip below 1e-12.
double probit_estimate(double q) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (q < p_low) {
        const double r = std::sqrt(-2.0 * std::log(q));
        return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
               ((((dd[0] * r + dd[1]) * r + dd[2]) * r + dd[3]) * r + 1.0);
    }
    if (q > 1.0 - p_low) {
        const double r = std::sqrt(-2.0 * std::log(1.0 - q));
        return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
               ((((dd[0] * r + dd[1]) * r + dd[2]) * r + dd[3]) * r + 1.0);
    }
    const double r = q - 0.5;
    const double s = r * r;
    return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
           (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

}  // namespace

double inverse_gaussian_cdf(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw InvalidInput("inverse_gaussian_cdf: argument must be in (0,1)");
    double x = probit_estimate(q);
    for (int i = 0; i < 2; ++i) {
        const double e = gaussian_cdf(x) - q;
        const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

FblResult normal_approx_rate(const Dmc& channel, const FiniteDistribution& input,
                             const FblQuery& query, const MultiViewOptions& opt) {
    if (query.n < 1) throw InvalidInput("normal_approx_rate: n must be positive");
    if (!(query.epsilon > 0.0 && query.epsilon < 1.0))
        throw InvalidInput("normal_approx_rate: epsilon must be in (0,1)");
    if (query.d < 1) throw InvalidInput("normal_approx_rate: d must be positive");

    const MultiViewReport r = multi_view_report(channel, input, query.d, opt);
    if (!(r.dispersion > 0.0))
        throw InvalidInput("normal_approx_rate: dispersion V^(d) is zero; the normal "
                           "approximation is degenerate for this channel/input/d");
    const double n = static_cast<double>(query.n);
    FblResult out;
    out.mutual_info = r.mutual_info;
    out.dispersion = r.dispersion;
    out.rate = r.mutual_info +
               inverse_gaussian_cdf(query.epsilon) * std::sqrt(r.dispersion / n) +
               std::log(n) / (2.0 * n);
    out.gap_to_entropy = entropy(input) - out.rate;
    return out;
}

}  // namespace mvc
