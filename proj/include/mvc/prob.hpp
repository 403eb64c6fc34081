#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

// Foundational probability objects and divergences. Everything internal is
// natural-log domain; public results are in nats.
namespace mvc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// thread-safe log-gamma
double log_gamma(double x);
// log of the binomial coefficient C(n, k), via log-gamma
double log_binomial_coeff(std::int64_t n, std::int64_t k);

// Nonnegative real carried on the natural-log scale, with exact zeros kept
// distinct from merely tiny values.
class LogReal {
  public:
    LogReal() = default;
    static LogReal zero() { return LogReal(); }
    static LogReal one() { return from_log(0.0); }
    static LogReal from_log(double log_value) {
        LogReal r;
        r.log_value_ = log_value;
        r.zero_ = false;
        return r;
    }
    static LogReal from_value(double v);

    bool is_zero() const { return zero_; }
    double log() const { return zero_ ? kNegInf : log_value_; }
    double value() const;

    LogReal operator*(LogReal o) const {
        if (zero_ || o.zero_) return zero();
        return from_log(log_value_ + o.log_value_);
    }

  private:
    double log_value_ = kNegInf;
    bool zero_ = true;
};

// Probability vector over a finite alphabet with cached log-probabilities.
class FiniteDistribution {
  public:
    static FiniteDistribution from_probs(std::vector<double> probs);
    static FiniteDistribution uniform(int alphabet_size);
    static FiniteDistribution point_mass(int alphabet_size, int at);

    int size() const { return static_cast<int>(probs_.size()); }
    double prob(int i) const { return probs_[static_cast<std::size_t>(i)]; }
    double log_prob(int i) const { return log_probs_[static_cast<std::size_t>(i)]; }
    std::span<const double> probs() const { return probs_; }
    std::span<const double> log_probs() const { return log_probs_; }

    bool operator==(const FiniteDistribution& o) const { return probs_ == o.probs_; }

  private:
    std::vector<double> probs_;
    std::vector<double> log_probs_;
};

// H(P) = E[-log P(X)], in [0, log |alphabet|]
double entropy(const FiniteDistribution& p);

// V(P) = E[(-log P(X) - H(P))^2]
double varentropy(const FiniteDistribution& p);

// D(P||Q); +inf iff support(P) is not contained in support(Q)
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);

struct ChernoffResult {
    double value;        // nats, +inf iff supports disjoint
    double lambda_star;  // argmin of the inner objective on [0,1]
};

// C(P,Q) = -min_{lambda in [0,1]} log sum_x P(x)^{1-lambda} Q(x)^lambda.
// The inner sum runs over the common support; the endpoints contribute
// objective value 0.
ChernoffResult chernoff_information_detail(const FiniteDistribution& p,
                                           const FiniteDistribution& q);
double chernoff_information(const FiniteDistribution& p,
                            const FiniteDistribution& q);

// Z(P,Q) = sum_x sqrt(P(x) Q(x)), in [0,1], 1 iff P = Q
double bhattacharyya(const FiniteDistribution& p, const FiniteDistribution& q);

// Bin(n, a) mass at k; requires k <= n
LogReal binomial_pmf(std::int64_t n, std::int64_t k, double a);

// Poi(mean) mass at k, via log-gamma
LogReal poisson_pmf(std::int64_t k, double mean);

// E[L^lam] for L ~ Bin(n, a), exact finite sum; lam = 0 gives exactly 1
double binomial_fractional_moment(std::int64_t n, double a, double lam);

// smallest K with P[Poi(mean) > K] < tail_tol; Chernoff-bound bracket
// refined by direct tail summation
std::int64_t poisson_truncation(double mean, double tail_tol);

// log(1 + e^x) without overflow
double softplus(double x);

}  // namespace mvc
