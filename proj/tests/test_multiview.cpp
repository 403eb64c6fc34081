#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mvc/dmc.hpp"
#include "mvc/errors.hpp"
#include "mvc/multiview.hpp"

using namespace mvc;

namespace {

FiniteDistribution random_dist(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> unif(1e-3, 1.0);
    std::vector<double> p(static_cast<std::size_t>(k));
    double total = 0.0;
    for (double& v : p) {
        v = -std::log(unif(rng));
        total += v;
    }
    for (double& v : p) v /= total;
    return FiniteDistribution::from_probs(std::move(p));
}

Dmc random_channel(std::mt19937_64& rng, int nx, int ny) {
    std::vector<FiniteDistribution> rows;
    for (int x = 0; x < nx; ++x) rows.push_back(random_dist(rng, ny));
    return Dmc::from_rows(std::move(rows));
}

// independent oracle: raw enumeration over all |Y|^d output tuples in
// linear-domain arithmetic
struct BruteValues {
    double cond_entropy, mutual_info, dispersion, cross_term;
};

BruteValues brute_force_report(const Dmc& ch, const FiniteDistribution& in, int d) {
    const int B = ch.output_size();
    const int K = ch.input_size();
    double hx = 0.0;
    for (int x = 0; x < K; ++x)
        if (in.prob(x) > 0.0) hx += -in.prob(x) * std::log(in.prob(x));

    std::size_t tuples = 1;
    for (int i = 0; i < d; ++i) tuples *= static_cast<std::size_t>(B);

    std::vector<int> y(static_cast<std::size_t>(d), 0);
    auto joint_of = [&](int x) {
        double j = in.prob(x);
        for (int i = 0; i < d; ++i) j *= ch.w(x, y[static_cast<std::size_t>(i)]);
        return j;
    };
    auto advance = [&]() {
        for (int i = 0; i < d; ++i) {
            if (++y[static_cast<std::size_t>(i)] < B) return;
            y[static_cast<std::size_t>(i)] = 0;
        }
    };

    double h = 0.0;
    for (std::size_t t = 0; t < tuples; ++t, advance()) {
        double py = 0.0;
        for (int x = 0; x < K; ++x) py += joint_of(x);
        if (py <= 0.0) continue;
        for (int x = 0; x < K; ++x) {
            const double j = joint_of(x);
            if (j <= 0.0) continue;
            h += j * -std::log(j / py);
        }
    }
    const double mi = hx - h;
    std::fill(y.begin(), y.end(), 0);
    double v = 0.0, theta = 0.0;
    for (std::size_t t = 0; t < tuples; ++t, advance()) {
        double py = 0.0;
        for (int x = 0; x < K; ++x) py += joint_of(x);
        if (py <= 0.0) continue;
        for (int x = 0; x < K; ++x) {
            const double j = joint_of(x);
            if (j <= 0.0) continue;
            const double iota = std::log((j / py) / in.prob(x));
            v += j * (iota - mi) * (iota - mi);
            theta += 2.0 * j * (std::log(j / py) + h) * (-std::log(in.prob(x)) - hx);
        }
    }
    return {h, mi, v, theta};
}

}  // namespace

TEST_CASE("type class enumeration") {
    auto zero = enumerate_type_classes(0, 3);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].counts == std::vector<int>({0, 0, 0}));
    CHECK(zero[0].log_multinomial.value() == doctest::Approx(1.0).epsilon(1e-14));

    auto two = enumerate_type_classes(2, 2);
    REQUIRE(two.size() == 3);
    double sum2 = 0.0;
    for (const auto& t : two) {
        const int first = t.counts[0];
        const double weight = first == 1 ? 2.0 : 1.0;  // (2,0),(1,1),(0,2)
        CHECK(t.log_multinomial.value() == doctest::Approx(weight).epsilon(1e-14));
        sum2 += t.log_multinomial.value();
    }
    CHECK(sum2 == doctest::Approx(4.0).epsilon(1e-13));

    auto five = enumerate_type_classes(5, 3);
    CHECK(five.size() == 21);  // C(7,2)
    double sum5 = 0.0;
    for (const auto& t : five) sum5 += t.log_multinomial.value();
    CHECK(sum5 == doctest::Approx(243.0).epsilon(1e-12));

    CHECK(count_type_classes(5, 3) == doctest::Approx(21.0));
    CHECK_THROWS_AS(enumerate_type_classes(400, 6, 1000), BudgetExceeded);
}

TEST_CASE("multi view report basic values") {
    const auto uniform2 = FiniteDistribution::uniform(2);

    // d = 0: no views at all
    const auto r0 = multi_view_report(Dmc::bsc(0.1), uniform2, 0);
    CHECK(r0.cond_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(r0.mutual_info == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(r0.dispersion) <= 1e-25);

    // BEC(0.5), two views: closed-form erasure posterior
    const auto r2 = multi_view_report(Dmc::bec(0.5), uniform2, 2);
    CHECK(r2.cond_entropy == doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-13));
    CHECK(r2.dispersion ==
          doctest::Approx(0.25 * 0.75 * std::log(2.0) * std::log(2.0)).epsilon(1e-12));

    // BSC(0.1), one view
    const auto r1 = multi_view_report(Dmc::bsc(0.1), uniform2, 1);
    CHECK(r1.cond_entropy == doctest::Approx(0.3250829733914482).epsilon(1e-13));
}

TEST_CASE("report invariants on random channels") {
    std::mt19937_64 rng(31337);
    for (int rep = 0; rep < 12; ++rep) {
        const int nx = 2 + static_cast<int>(rng() % 3);
        const int ny = 2 + static_cast<int>(rng() % 3);
        const Dmc ch = random_channel(rng, nx, ny);
        const bool uniform = rep % 2 == 0;
        const FiniteDistribution in =
            uniform ? FiniteDistribution::uniform(nx) : random_dist(rng, nx);
        const double hx = entropy(in);
        for (int d : {0, 1, 3, 6}) {
            const auto r = multi_view_report(ch, in, d);
            CHECK(std::abs(r.mutual_info - (hx - r.cond_entropy)) <= 1e-12);
            CHECK(r.mutual_info >= -1e-12);
            CHECK(r.mutual_info <= hx + 1e-12);
            CHECK(r.dispersion >= 0.0);
            // the decomposition route agrees (also enforced internally)
            CHECK(std::abs(r.dispersion - r.dispersion_decomp) <= 1e-9);
            if (uniform) CHECK(std::abs(r.cross_term) <= 1e-12);
        }
    }
}

TEST_CASE("type-class computation equals raw tuple enumeration") {
    std::mt19937_64 rng(777);
    for (int rep = 0; rep < 10; ++rep) {
        const int nx = 2 + static_cast<int>(rng() % 3);
        const int ny = 2 + static_cast<int>(rng() % 2);
        const Dmc ch = random_channel(rng, nx, ny);
        const FiniteDistribution in =
            rep % 2 ? random_dist(rng, nx) : FiniteDistribution::uniform(nx);
        for (int d : {1, 3, 6}) {
            const auto fast = multi_view_report(ch, in, d);
            const auto slow = brute_force_report(ch, in, d);
            CHECK(std::abs(fast.cond_entropy - slow.cond_entropy) <= 1e-12);
            CHECK(std::abs(fast.mutual_info - slow.mutual_info) <= 1e-12);
            CHECK(std::abs(fast.dispersion - slow.dispersion) <= 1e-12);
            CHECK(std::abs(fast.cross_term - slow.cross_term) <= 1e-12);
        }
    }
}

TEST_CASE("data processing monotonicity and concavity in d") {
    std::mt19937_64 rng(2718);
    for (int rep = 0; rep < 6; ++rep) {
        const Dmc ch = random_channel(rng, 2 + static_cast<int>(rng() % 2), 3);
        const FiniteDistribution in = random_dist(rng, ch.input_size());
        std::vector<double> mi{0.0};
        for (int d = 1; d <= 10; ++d) mi.push_back(multi_view_report(ch, in, d).mutual_info);
        for (std::size_t d = 1; d < mi.size(); ++d) CHECK(mi[d] >= mi[d - 1] - 1e-12);
        for (std::size_t d = 1; d + 1 < mi.size(); ++d)
            CHECK(mi[d] - mi[d - 1] >= mi[d + 1] - mi[d] - 1e-12);
    }
}

TEST_CASE("bims sandwich for detected channels") {
    // the sandwich compares the dimensionless Z^d against the conditional
    // entropy in bits, the convention of the polar-coding source it comes
    // from; in nats the lower bound already fails for BSC(0.1) at d = 1
    const auto uniform2 = FiniteDistribution::uniform(2);
    for (const Dmc& ch : {Dmc::bsc(0.1), Dmc::bsc(0.25), Dmc::bec(0.5)}) {
        const double zb = bhattacharyya_binary(ch);
        for (int d = 1; d <= 12; ++d) {
            const double h_bits =
                multi_view_report(ch, uniform2, d).cond_entropy / std::log(2.0);
            CHECK(h_bits >= std::pow(zb, 2.0 * d) - 1e-12);
            CHECK(h_bits <= std::pow(zb, d) + 1e-12);
        }
    }
}

TEST_CASE("general entropy bound via z_general") {
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 8; ++rep) {
        const int nx = 2 + static_cast<int>(rng() % 3);
        const int ny = 2 + static_cast<int>(rng() % 3);
        const Dmc ch = random_channel(rng, nx, ny);
        const FiniteDistribution in = FiniteDistribution::uniform(nx);
        const double zg = z_general(ch, in);
        for (int d : {1, 5, 10, 20}) {
            const double h = multi_view_report(ch, in, d).cond_entropy;
            CHECK(h <= std::pow(zg, d) + 1e-12);
        }
    }
}

TEST_CASE("rate fit: erasure channel is exactly geometric") {
    const auto rep = fit_convergence_rate(Dmc::bec(0.3), FiniteDistribution::uniform(2), 20, 40,
                                          RateTarget::EntropyGap);
    CHECK(std::abs(rep.fitted_rate - (-std::log(0.3))) <= 1e-9);
    CHECK(rep.predicted_rate == doctest::Approx(-std::log(0.3)).epsilon(1e-9));
}

TEST_CASE("rate fit: bsc and z-channel within 2 percent") {
    const auto bsc = fit_convergence_rate(Dmc::bsc(0.1), FiniteDistribution::uniform(2), 20, 40,
                                          RateTarget::EntropyGap);
    CHECK(std::abs(bsc.relative_gap) <= 0.02);
    CHECK(bsc.predicted_rate == doctest::Approx(0.5108256237659907).epsilon(1e-10));

    const auto z = fit_convergence_rate(Dmc::zchan(0.3), FiniteDistribution::uniform(2), 20, 40,
                                        RateTarget::EntropyGap);
    CHECK(std::abs(z.relative_gap) <= 0.02);
    CHECK(z.predicted_rate == doctest::Approx(-std::log(0.3)).epsilon(1e-9));
}

TEST_CASE("zero-probability inputs stay out of the predicted rate") {
    // three rows, but the input distribution only touches the first two
    const Dmc ch = Dmc::from_rows({FiniteDistribution::from_probs({0.9, 0.05, 0.05}),
                                   FiniteDistribution::from_probs({0.05, 0.9, 0.05}),
                                   FiniteDistribution::from_probs({0.4, 0.4, 0.2})});
    const auto support2 = FiniteDistribution::from_probs({0.5, 0.5, 0.0});
    const double restricted = min_pair_chernoff(ch, &support2).value;
    CHECK(restricted == doctest::Approx(chernoff_information(ch.row(0), ch.row(1))).epsilon(1e-12));
    CHECK(min_pair_chernoff(ch).value < restricted);  // row 2 is closer to both

    const auto rep = fit_convergence_rate(ch, support2, 15, 35, RateTarget::EntropyGap);
    CHECK(rep.predicted_rate == doctest::Approx(restricted).epsilon(1e-12));
    CHECK(std::abs(rep.relative_gap) <= 0.05);
}

TEST_CASE("default rate window ends at the last representable gap") {
    const auto [lo, hi] = default_rate_window(Dmc::bec(0.3), FiniteDistribution::uniform(2),
                                              RateTarget::EntropyGap);
    CHECK(hi - lo == 19);
    // the erasure gap is exactly 0.3^d log 2, so the cutoff d is known
    CHECK(std::abs(hi * std::log(0.3) + std::log(std::log(2.0))) >= 290.0 * std::log(10.0) - 3.0);
    const auto rep = fit_convergence_rate(Dmc::bec(0.3), FiniteDistribution::uniform(2), lo, hi,
                                          RateTarget::EntropyGap);
    CHECK(std::abs(rep.fitted_rate + std::log(0.3)) <= 1e-7);
}

TEST_CASE("rate fit error reporting") {
    CHECK_THROWS_AS(fit_convergence_rate(Dmc::bsc(0.1), FiniteDistribution::uniform(2), 1, 10,
                                         RateTarget::EntropyGap),
                    InvalidInput);
    // BEC(0.01) entropy gap underflows far before d = 300
    CHECK_THROWS_WITH_AS(fit_convergence_rate(Dmc::bec(0.01), FiniteDistribution::uniform(2), 2,
                                              300, RateTarget::EntropyGap),
                         doctest::Contains("largest usable d"), InvalidInput);
}

TEST_CASE("posterior tail") {
    const Dmc ch = Dmc::bsc(0.1);
    const auto uniform2 = FiniteDistribution::uniform(2);

    // tiny threshold: posterior is never exactly 1, so the event is certain
    CHECK(posterior_tail(ch, uniform2, 0, 4, 1e-300) == doctest::Approx(1.0).epsilon(1e-12));
    // impossible threshold
    const double tmax = 4 * std::log(1.0 / 0.1) + std::log(2.0) + 1.0;
    CHECK(posterior_tail(ch, uniform2, 0, 4, tmax) == 0.0);

    // d = 4, t just below log 2: exactly the types with >= 2 flips
    double oracle = 0.0;
    for (int k = 2; k <= 4; ++k) oracle += binomial_pmf(4, k, 0.1).value();
    const double p = posterior_tail(ch, uniform2, 0, 4, std::log(2.0) - 1e-9);
    CHECK(p == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("budget is a hard error") {
    MultiViewOptions opt;
    opt.max_type_classes = 10;
    CHECK_THROWS_AS(multi_view_report(Dmc::bec(0.5), FiniteDistribution::uniform(2), 30, opt),
                    BudgetExceeded);
}
