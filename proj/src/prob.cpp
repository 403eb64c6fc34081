#include "mvc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

double log_gamma(double x) {
#ifdef __GLIBC__
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log_binomial_coeff(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return kNegInf;
    return log_gamma(static_cast<double>(n) + 1.0) -
           log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(static_cast<double>(n - k) + 1.0);
}

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double LogReal::value() const {
    if (zero_) return 0.0;
    return std::exp(log_value_);
}

LogReal LogReal::from_value(double v) {
    if (v < 0.0) throw InvalidInput("LogReal: negative value");
    if (v == 0.0) return zero();
    return from_log(std::log(v));
}

FiniteDistribution FiniteDistribution::from_probs(std::vector<double> probs) {
    if (probs.empty()) throw InvalidInput("distribution: empty alphabet");
    kern::Accumulator total;
    for (double p : probs) {
        if (!(p >= 0.0)) throw InvalidInput("distribution: negative or NaN entry");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw InvalidInput("distribution: entries do not sum to 1 within 1e-12");
    FiniteDistribution d;
    d.log_probs_.reserve(probs.size());
    for (double p : probs) d.log_probs_.push_back(p > 0.0 ? std::log(p) : kNegInf);
    d.probs_ = std::move(probs);
    return d;
}

FiniteDistribution FiniteDistribution::uniform(int alphabet_size) {
    if (alphabet_size <= 0) throw InvalidInput("uniform: alphabet size must be positive");
    std::vector<double> p(static_cast<std::size_t>(alphabet_size),
                          1.0 / alphabet_size);
    return from_probs(std::move(p));
}

FiniteDistribution FiniteDistribution::point_mass(int alphabet_size, int at) {
    if (at < 0 || at >= alphabet_size) throw InvalidInput("point_mass: index out of range");
    std::vector<double> p(static_cast<std::size_t>(alphabet_size), 0.0);
    p[static_cast<std::size_t>(at)] = 1.0;
    return from_probs(std::move(p));
}

double entropy(const FiniteDistribution& p) {
    kern::Accumulator acc;
    for (int i = 0; i < p.size(); ++i)
        if (p.prob(i) > 0.0) acc.add(-p.prob(i) * p.log_prob(i));
    return std::max(0.0, acc.value());
}

double varentropy(const FiniteDistribution& p) {
    const double h = entropy(p);
    kern::Accumulator acc;
    for (int i = 0; i < p.size(); ++i) {
        if (p.prob(i) <= 0.0) continue;
        const double dev = -p.log_prob(i) - h;
        acc.add(p.prob(i) * dev * dev);
    }
    return std::max(0.0, acc.value());
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q) {
    if (p.size() != q.size()) throw InvalidInput("kl_divergence: alphabet mismatch");
    kern::Accumulator acc;
    for (int i = 0; i < p.size(); ++i) {
        if (p.prob(i) <= 0.0) continue;
        if (q.prob(i) <= 0.0) return kPosInf;
        acc.add(p.prob(i) * (p.log_prob(i) - q.log_prob(i)));
    }
    return std::max(0.0, acc.value());
}

ChernoffResult chernoff_information_detail(const FiniteDistribution& p,
                                           const FiniteDistribution& q) {
    if (p.size() != q.size()) throw InvalidInput("chernoff: alphabet mismatch");
    // common support only; letters missing on either side never enter the
    // interior-lambda sum
    std::vector<double> a, b;
    for (int i = 0; i < p.size(); ++i) {
        if (p.prob(i) > 0.0 && q.prob(i) > 0.0) {
            a.push_back(p.log_prob(i));
            b.push_back(q.log_prob(i) - p.log_prob(i));
        }
    }
    if (a.empty()) return {kPosInf, 0.5};

    auto g = [&](double lam) { return kern::log_sum_exp_affine(a, b, lam); };
    // g is convex (log-sum of log-linear terms); ternary search to 1e-12
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (g(m1) <= g(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double lam = 0.5 * (lo + hi);
    return {std::max(0.0, -g(lam)), lam};
}

double chernoff_information(const FiniteDistribution& p,
                            const FiniteDistribution& q) {
    return chernoff_information_detail(p, q).value;
}

double bhattacharyya(const FiniteDistribution& p, const FiniteDistribution& q) {
    if (p.size() != q.size()) throw InvalidInput("bhattacharyya: alphabet mismatch");
    return kern::sqrt_dot(p.probs(), q.probs());
}

LogReal binomial_pmf(std::int64_t n, std::int64_t k, double a) {
    if (n < 0 || k < 0) throw InvalidInput("binomial_pmf: negative argument");
    if (k > n) throw InvalidInput("binomial_pmf: k > n");
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("binomial_pmf: a outside [0,1]");
    if (a == 0.0) return k == 0 ? LogReal::one() : LogReal::zero();
    if (a == 1.0) return k == n ? LogReal::one() : LogReal::zero();
    const double log_mass = log_binomial_coeff(n, k) +
                            static_cast<double>(k) * std::log(a) +
                            static_cast<double>(n - k) * std::log1p(-a);
    return LogReal::from_log(log_mass);
}

LogReal poisson_pmf(std::int64_t k, double mean) {
    if (k < 0) throw InvalidInput("poisson_pmf: negative k");
    if (mean < 0.0) throw InvalidInput("poisson_pmf: negative mean");
    if (mean == 0.0) return k == 0 ? LogReal::one() : LogReal::zero();
    const double kd = static_cast<double>(k);
    return LogReal::from_log(-mean + kd * std::log(mean) - log_gamma(kd + 1.0));
}

double binomial_fractional_moment(std::int64_t n, double a, double lam) {
    if (lam == 0.0) return 1.0;  // zeroth moment, 0^0 = 1
    kern::Accumulator acc;
    for (std::int64_t k = 1; k <= n; ++k) {
        const LogReal mass = binomial_pmf(n, k, a);
        if (mass.is_zero()) continue;
        acc.add(std::exp(mass.log() + lam * std::log(static_cast<double>(k))));
    }
    return acc.value();
}

std::int64_t poisson_truncation(double mean, double tail_tol) {
    if (!(mean >= 0.0)) throw InvalidInput("poisson_truncation: negative mean");
    if (!(tail_tol > 0.0)) throw InvalidInput("poisson_truncation: tolerance must be positive");
    if (mean == 0.0) return 0;

    // Chernoff bound P[N >= K] <= exp(K - mean - K log(K/mean)) for K > mean;
    // double K until the bound is far below tolerance, then sum the exact
    // tail downward.
    auto chernoff_log_tail = [&](double K) {
        return K - mean - K * std::log(K / mean);
    };
    double far = std::max(4.0, 2.0 * mean);
    while (chernoff_log_tail(far) > std::log(tail_tol) - 3.0 * std::log(10.0))
        far *= 2.0;
    const std::int64_t k_far = static_cast<std::int64_t>(std::ceil(far));

    // exact tail mass accumulated from the far end
    kern::Accumulator tail;
    tail.add(std::exp(chernoff_log_tail(static_cast<double>(k_far + 1))));  // remainder bound
    std::int64_t k = k_far;
    while (k >= 1) {
        tail.add(poisson_pmf(k, mean).value());
        if (tail.value() >= tail_tol) break;
        --k;
    }
    // tail(K) = P[N > K] first drops below tol at K = k
    return k;
}

}  // namespace mvc
