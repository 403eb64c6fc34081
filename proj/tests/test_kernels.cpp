#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mvc/kernels.hpp"

using namespace mvc;

namespace {

struct ImplGuard {
    ~ImplGuard() { kern::set_impl(kern::Impl::Auto); }
};

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = unif(rng);
    return v;
}

double rel_err(double a, double b) {
    const double scale = std::max({1e-300, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("scalar kernels match direct formulas") {
    ImplGuard guard;
    kern::set_impl(kern::Impl::Scalar);

    std::vector<double> x{0.25, -1.5, 3.0, 0.125};
    CHECK(kern::sum(x) == doctest::Approx(1.875).epsilon(1e-15));

    std::vector<double> a{1.0, 2.0, 3.0}, b{4.0, 5.0, 6.0};
    CHECK(kern::dot(a, b) == doctest::Approx(32.0).epsilon(1e-15));
    CHECK(kern::sqrt_dot(a, b) == doctest::Approx(std::sqrt(4.0) + std::sqrt(10.0) + std::sqrt(18.0))
                                      .epsilon(1e-14));

    std::vector<double> logs{std::log(0.25), std::log(0.5), std::log(0.25)};
    CHECK(kern::log_sum_exp(logs) == doctest::Approx(0.0).epsilon(1e-14));

    // -inf entries drop out
    std::vector<double> with_ninf{std::log(0.5), -std::numeric_limits<double>::infinity(),
                                  std::log(0.5)};
    CHECK(kern::log_sum_exp(with_ninf) == doctest::Approx(0.0).epsilon(1e-14));

    std::vector<double> all_ninf{-std::numeric_limits<double>::infinity()};
    CHECK(kern::log_sum_exp(all_ninf) == -std::numeric_limits<double>::infinity());

    std::vector<double> base{std::log(0.5), std::log(0.5)}, slope{0.3, -0.3};
    const double t = 0.7;
    const double expect = 0.5 * std::exp(0.3 * t) + 0.5 * std::exp(-0.3 * t);
    CHECK(kern::exp_affine_sum(base, slope, t) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(kern::log_sum_exp_affine(base, slope, t) ==
          doctest::Approx(std::log(expect)).epsilon(1e-14));
}

TEST_CASE("compensated sum survives cancellation") {
    ImplGuard guard;
    kern::set_impl(kern::Impl::Scalar);
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(kern::sum(v) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("avx2 variants agree with scalar") {
    if (!kern::avx2_available()) return;
    ImplGuard guard;

    std::mt19937_64 rng(20240517);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 300);
        auto x = random_vec(rng, n, -600.0, 40.0);
        auto a = random_vec(rng, n, -200.0, 0.0);
        auto b = random_vec(rng, n, -30.0, 30.0);
        auto pa = random_vec(rng, n, 0.0, 1.0);
        auto pb = random_vec(rng, n, 0.0, 1.0);
        const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

        kern::set_impl(kern::Impl::Scalar);
        const double sum_s = kern::sum(x);
        const double dot_s = kern::dot(pa, pb);
        const double sq_s = kern::sqrt_dot(pa, pb);
        const double lse_s = kern::log_sum_exp(x);
        const double lsa_s = kern::log_sum_exp_affine(a, b, t);
        const double eas_s = kern::exp_affine_sum(a, b, t);

        kern::set_impl(kern::Impl::Avx2);
        CHECK(rel_err(kern::sum(x), sum_s) < 1e-13);
        CHECK(rel_err(kern::dot(pa, pb), dot_s) < 1e-13);
        CHECK(rel_err(kern::sqrt_dot(pa, pb), sq_s) < 1e-13);
        CHECK(rel_err(kern::log_sum_exp(x), lse_s) < 1e-13);
        CHECK(rel_err(kern::log_sum_exp_affine(a, b, t), lsa_s) < 1e-13);
        CHECK(rel_err(kern::exp_affine_sum(a, b, t), eas_s) < 1e-13);
    }
}

TEST_CASE("avx2 handles -inf terms and large lambda") {
    if (!kern::avx2_available()) return;
    ImplGuard guard;
    kern::set_impl(kern::Impl::Avx2);
    std::vector<double> a{std::log(0.5), -std::numeric_limits<double>::infinity(), std::log(0.5)};
    std::vector<double> b{0.0, 0.0, 0.0};
    CHECK(kern::log_sum_exp_affine(a, b, 0.5) == doctest::Approx(0.0).epsilon(1e-14));

    // huge lambda pushes every term far below the max-shifted origin
    std::vector<double> a2{0.0, 0.0}, b2{0.0, -2.0};
    const double big = 1e6;
    CHECK(kern::log_sum_exp_affine(a2, b2, big) == doctest::Approx(0.0).epsilon(1e-12));
}
