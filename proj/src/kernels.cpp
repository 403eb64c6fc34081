#include "mvc/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "mvc/errors.hpp"

namespace mvc::kern {

namespace detail {

double sum_scalar(std::span<const double> x) {
    Accumulator acc;
    for (double v : x) acc.add(v);
    return acc.value();
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
    Accumulator acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

double sqrt_dot_scalar(std::span<const double> a, std::span<const double> b) {
    Accumulator acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double p = a[i] * b[i];
        acc.add(p > 0.0 ? std::sqrt(p) : 0.0);
    }
    return acc.value();
}

double log_sum_exp_scalar(std::span<const double> x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x) m = std::max(m, v);
    if (!(m > -std::numeric_limits<double>::infinity())) return m;  // empty or all -inf
    Accumulator acc;
    for (double v : x) acc.add(std::exp(v - m));
    return m + std::log(acc.value());
}

double log_sum_exp_affine_scalar(std::span<const double> a,
                                 std::span<const double> b, double t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] + t * b[i]);
    if (!(m > -std::numeric_limits<double>::infinity())) return m;
    Accumulator acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(std::exp(a[i] + t * b[i] - m));
    return m + std::log(acc.value());
}

double exp_affine_sum_scalar(std::span<const double> a,
                             std::span<const double> b, double t) {
    Accumulator acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(std::exp(a[i] + t * b[i]));
    return acc.value();
}

}  // namespace detail

namespace {

struct Vtable {
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*sqrt_dot)(std::span<const double>, std::span<const double>);
    double (*lse)(std::span<const double>);
    double (*lse_affine)(std::span<const double>, std::span<const double>, double);
    double (*exp_affine)(std::span<const double>, std::span<const double>, double);
};

constexpr Vtable kScalar = {
    &detail::sum_scalar,      &detail::dot_scalar,
    &detail::sqrt_dot_scalar, &detail::log_sum_exp_scalar,
    &detail::log_sum_exp_affine_scalar, &detail::exp_affine_sum_scalar,
};

#ifdef MVC_HAVE_AVX2
constexpr Vtable kAvx2 = {
    &detail::sum_avx2,      &detail::dot_avx2,
    &detail::sqrt_dot_avx2, &detail::log_sum_exp_avx2,
    &detail::log_sum_exp_affine_avx2, &detail::exp_affine_sum_avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(MVC_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    const Vtable* table;
    Impl impl;

    Dispatch() {
        bool want_avx2 = cpu_has_avx2();
        if (const char* env = std::getenv("MVC_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
            else if (std::strcmp(env, "avx2") == 0 && !cpu_has_avx2())
                throw InvalidInput("MVC_KERNELS=avx2 requested but AVX2 is unavailable");
            else if (std::strcmp(env, "avx2") == 0) want_avx2 = true;
        }
#ifdef MVC_HAVE_AVX2
        if (want_avx2) {
            table = &kAvx2;
            impl = Impl::Avx2;
            return;
        }
#endif
        (void)want_avx2;
        table = &kScalar;
        impl = Impl::Scalar;
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

void set_impl(Impl impl) {
    Dispatch& d = dispatch();
    switch (impl) {
        case Impl::Scalar:
            d.table = &kScalar;
            d.impl = Impl::Scalar;
            break;
        case Impl::Avx2:
#ifdef MVC_HAVE_AVX2
            if (cpu_has_avx2()) {
                d.table = &kAvx2;
                d.impl = Impl::Avx2;
                break;
            }
#endif
            throw InvalidInput("AVX2 kernels unavailable on this machine");
        case Impl::Auto:
            d = Dispatch();
            break;
    }
}

Impl active_impl() { return dispatch().impl; }

std::string impl_name() {
    return dispatch().impl == Impl::Avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) { return dispatch().table->sum(x); }

double dot(std::span<const double> a, std::span<const double> b) {
    return dispatch().table->dot(a, b);
}

double sqrt_dot(std::span<const double> a, std::span<const double> b) {
    return dispatch().table->sqrt_dot(a, b);
}

double log_sum_exp(std::span<const double> x) { return dispatch().table->lse(x); }

double log_sum_exp_affine(std::span<const double> a, std::span<const double> b,
                          double t) {
    return dispatch().table->lse_affine(a, b, t);
}

double exp_affine_sum(std::span<const double> a, std::span<const double> b,
                      double t) {
    return dispatch().table->exp_affine(a, b, t);
}

}  // namespace mvc::kern
