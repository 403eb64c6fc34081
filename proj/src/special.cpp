#include "mvc/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "mvc/errors.hpp"
#include "mvc/kernels.hpp"

namespace mvc {

double bsc_bhattacharyya(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("bsc_bhattacharyya: p outside [0,1]");
    return 2.0 * std::sqrt(p * (1.0 - p));
}

double binomial_poisson_gap_bound(double d, double p) {
    const double z = bsc_bhattacharyya(p);
    return std::exp(-d * (1.0 - z)) - std::pow(z, 2.0 * d);
}

double binomial_capacity_n(std::int64_t n, double p) {
    if (n < 0) throw InvalidInput("binomial_capacity: negative view count");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("binomial_capacity: p outside [0,1]");
    if (n == 0) return 0.0;
    const double q = std::min(p, 1.0 - p);  // exact p <-> 1-p symmetry
    if (q == 0.0) return std::log(2.0);
    if (q == 0.5) return 0.0;

    // log 2 - sum_i pmf(i) * softplus(-(n-2i) L), L = log((1-q)/q); the
    // softplus argument is the log-likelihood-ratio between the two inputs
    const double big_l = std::log1p(-q) - std::log(q);
    kern::Accumulator acc;
    for (std::int64_t i = 0; i <= n; ++i) {
        const double mass = binomial_pmf(n, i, q).value();
        acc.add(mass * softplus(-static_cast<double>(n - 2 * i) * big_l));
    }
    const double c = std::log(2.0) - acc.value();
    return std::min(std::log(2.0), std::max(0.0, c));
}

double binomial_capacity(const BinomialChannelSpec& spec) {
    if (spec.d < 1) throw InvalidInput("binomial_capacity: d must be positive");
    return binomial_capacity_n(spec.d, spec.p);
}

namespace {

void validate(const PoissonChannelSpec& spec) {
    if (!(spec.d > 0.0)) throw InvalidInput("poisson_capacity: d must be positive");
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InvalidInput("poisson_capacity: p outside [0,1]");
    if (!(spec.tail_tol > 0.0 && spec.tail_tol <= 1e-6))
        throw InvalidInput("poisson_capacity: tail_tol outside (0, 1e-6]");
}

// P[Poi(mean) > k], exact partial sums with a Chernoff remainder
double poisson_tail_mass(double mean, std::int64_t k) {
    if (mean <= 0.0) return 0.0;
    const std::int64_t far = poisson_truncation(mean, 1e-18);
    if (k >= far) return 1e-18;
    kern::Accumulator acc;
    acc.add(1e-18);
    for (std::int64_t j = far; j > k; --j) acc.add(poisson_pmf(j, mean).value());
    return acc.value();
}

// certified bound on the contribution of terms with r1 > k1 or r2 > k2 to
// the capacity series: |log term| <= (r1 + r2) M + log 2
double poisson_truncation_bound(double mu1, double mu2, double big_m,
                                std::int64_t k1, std::int64_t k2) {
    const double t1 = poisson_tail_mass(mu1, k1);
    const double t2 = poisson_tail_mass(mu2, k2);
    const double e1 = mu1 * poisson_tail_mass(mu1, k1 - 1);  // E[R1 1{R1 > k1}]
    const double e2 = mu2 * poisson_tail_mass(mu2, k2 - 1);
    const double b1 = big_m * (e1 + t1 * mu2) + t1 * std::log(2.0);
    const double b2 = big_m * (e2 + t2 * mu1) + t2 * std::log(2.0);
    return b1 + b2;
}

}  // namespace

PoissonCapacityResult poisson_capacity_detail(const PoissonChannelSpec& spec) {
    validate(spec);
    PoissonCapacityResult res;
    const double q = std::min(spec.p, 1.0 - spec.p);
    if (q == 0.0) {
        // inputs collide only on the (0,0) output
        res.value = std::log(2.0) * -std::expm1(-spec.d);
        return res;
    }
    if (q == 0.5) return res;  // identical conditionals

    const double mu1 = spec.d * q;          // count of the "wrong" symbol
    const double mu2 = spec.d * (1.0 - q);  // count of the "right" symbol
    const double big_m = std::log1p(-q) - std::log(q);

    std::int64_t k1 = static_cast<std::int64_t>(std::ceil(mu1 + 12.0 * std::sqrt(mu1) + 40.0));
    std::int64_t k2 = static_cast<std::int64_t>(std::ceil(mu2 + 12.0 * std::sqrt(mu2) + 40.0));
    double bound = poisson_truncation_bound(mu1, mu2, big_m, k1, k2);
    while (bound > spec.tail_tol * std::log(2.0)) {
        k1 += 16;
        k2 += 16;
        bound = poisson_truncation_bound(mu1, mu2, big_m, k1, k2);
    }

    std::vector<double> w1(static_cast<std::size_t>(k1) + 1), w2(static_cast<std::size_t>(k2) + 1);
    for (std::int64_t r = 0; r <= k1; ++r) w1[static_cast<std::size_t>(r)] = poisson_pmf(r, mu1).value();
    for (std::int64_t r = 0; r <= k2; ++r) w2[static_cast<std::size_t>(r)] = poisson_pmf(r, mu2).value();

    // softplus((r1 - r2) M) indexed by r1 - r2
    std::vector<double> sp(static_cast<std::size_t>(k1 + k2) + 1);
    for (std::int64_t diff = -k2; diff <= k1; ++diff)
        sp[static_cast<std::size_t>(diff + k2)] = softplus(static_cast<double>(diff) * big_m);

    kern::Accumulator acc;
    for (std::int64_t r1 = 0; r1 <= k1; ++r1) {
        kern::Accumulator inner;
        for (std::int64_t r2 = 0; r2 <= k2; ++r2)
            inner.add(w2[static_cast<std::size_t>(r2)] * sp[static_cast<std::size_t>(r1 - r2 + k2)]);
        acc.add(w1[static_cast<std::size_t>(r1)] * inner.value());
    }
    res.value = std::min(std::log(2.0), std::max(0.0, std::log(2.0) - acc.value()));
    res.truncation_bound = bound;
    res.k1 = k1;
    res.k2 = k2;
    return res;
}

double poisson_capacity(const PoissonChannelSpec& spec) {
    return poisson_capacity_detail(spec).value;
}

double poisson_mixture_identity_check(const PoissonChannelSpec& spec) {
    validate(spec);
    const double lhs = poisson_capacity(spec);
    const std::int64_t n_max = poisson_truncation(spec.d, spec.tail_tol);
    kern::Accumulator rhs;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const double mass = poisson_pmf(n, spec.d).value();
        if (mass == 0.0) continue;
        rhs.add(mass * binomial_capacity_n(n, spec.p));
    }
    return std::abs(lhs - rhs.value());
}

std::vector<SweepRow> figure1_sweep(const std::vector<int>& d_values,
                                    const std::vector<double>& p_grid, int threads) {
    if (d_values.empty() || p_grid.empty())
        throw InvalidInput("figure1_sweep: empty d list or p grid");
    for (int d : d_values)
        if (d < 1) throw InvalidInput("figure1_sweep: d must be positive");

    std::vector<SweepRow> rows(d_values.size() * p_grid.size());
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SweepRow& r = rows[i];
            r.d = d_values[i / p_grid.size()];
            r.p = p_grid[i % p_grid.size()];
            r.c_bin = binomial_capacity_n(r.d, r.p);
            r.c_poi = poisson_capacity({static_cast<double>(r.d), r.p, 1e-10});
            r.gap = r.c_bin - r.c_poi;
            r.thm3_bound = binomial_poisson_gap_bound(static_cast<double>(r.d), r.p);
        }
    };
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int t = static_cast<int>(
        std::min<std::size_t>(rows.size(), static_cast<std::size_t>(threads > 0 ? threads : hw)));
    if (t <= 1) {
        fill(0, rows.size());
        return rows;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows.size() + static_cast<std::size_t>(t) - 1) /
                              static_cast<std::size_t>(t);
    for (int w = 0; w < t; ++w) {
        const std::size_t begin = std::min(rows.size(), static_cast<std::size_t>(w) * chunk);
        const std::size_t end = std::min(rows.size(), begin + chunk);
        if (begin < end) pool.emplace_back(fill, begin, end);
    }
    for (auto& th : pool) th.join();
    return rows;
}

void write_figure1_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "d,p,c_bin_nats,c_poi_nats,gap,thm3_bound\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.d, r.p,
                      r.c_bin, r.c_poi, r.gap, r.thm3_bound);
        out << buf;
    }
}

std::vector<std::vector<double>> BimsDecomposition::reconstruct_rows() const {
    std::vector<std::vector<double>> rows(2, std::vector<double>(static_cast<std::size_t>(output_size), 0.0));
    for (const auto& s : subchannels) {
        const double hi = s.weight * (1.0 - s.crossover);
        const double lo = s.weight * s.crossover;
        if (s.y == s.y_paired) {
            rows[0][static_cast<std::size_t>(s.y)] += s.weight;
            rows[1][static_cast<std::size_t>(s.y)] += s.weight;
            continue;
        }
        const int a = s.flipped ? s.y_paired : s.y;
        const int b = s.flipped ? s.y : s.y_paired;
        rows[0][static_cast<std::size_t>(a)] += hi;
        rows[0][static_cast<std::size_t>(b)] += lo;
        rows[1][static_cast<std::size_t>(a)] += lo;
        rows[1][static_cast<std::size_t>(b)] += hi;
    }
    return rows;
}

BimsDecomposition bims_decompose(const Dmc& channel) {
    if (channel.input_size() != 2 || !channel.bims_involution())
        throw InvalidInput("bims_decompose: channel is not BIMS");
    const auto& pi = *channel.bims_involution();

    BimsDecomposition dec;
    dec.output_size = channel.output_size();
    std::vector<double> weights;
    for (int y = 0; y < channel.output_size(); ++y) {
        const int z = pi[static_cast<std::size_t>(y)];
        if (z < y) continue;  // orbit already handled
        BimsSubchannel s;
        s.y = y;
        s.y_paired = z;
        if (z == y) {
            s.weight = channel.w(0, y);
            s.crossover = 0.5;
        } else {
            const double a = channel.w(0, y);
            const double b = channel.w(0, z);
            s.weight = a + b;
            if (s.weight > 0.0) {
                s.crossover = std::min(a, b) / s.weight;
                s.flipped = b > a;
            } else {
                s.crossover = 0.5;
            }
        }
        if (s.weight <= 0.0) continue;  // zero-probability outputs carry no subchannel
        dec.subchannels.push_back(s);
        weights.push_back(s.weight);
        dec.crossovers.push_back(s.crossover);
    }
    dec.weights = FiniteDistribution::from_probs(std::move(weights));
    return dec;
}

std::pair<double, double> bims_capacity_bounds(const BimsDecomposition& decomp, int d,
                                               double tail_tol) {
    if (d < 1) throw InvalidInput("bims_capacity_bounds: d must be positive");
    if (decomp.crossovers.empty()) throw InvalidInput("bims_capacity_bounds: empty decomposition");
    double p_min = 1.0, p_max = 0.0;
    for (double p : decomp.crossovers) {
        p_min = std::min(p_min, p);
        p_max = std::max(p_max, p);
    }
    if (!(p_min > 0.0) || !(p_max < 0.5))
        throw InvalidInput("bims_capacity_bounds: degenerate crossover (0 or 1/2); "
                           "the sandwich bounds are vacuous for this channel");
    const double lower = poisson_capacity({static_cast<double>(d), p_max, tail_tol});
    const double upper = poisson_capacity({static_cast<double>(d), p_min, tail_tol}) +
                         binomial_poisson_gap_bound(static_cast<double>(d), p_min);
    return {lower, upper};
}

}  // namespace mvc
