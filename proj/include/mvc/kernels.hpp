#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

// Low-level reduction kernels. Every kernel has a scalar reference
// implementation and (on x86-64 builds) an AVX2+FMA variant; the active
// variant is picked once at startup from cpuid and can be overridden with
// the MVC_KERNELS environment variable ("scalar", "avx2", "auto") or
// programmatically via set_impl(). Scalar and SIMD variants are
// equivalence-tested against each other; both use fixed reduction orders,
// so results are reproducible for a given implementation.
namespace mvc::kern {

enum class Impl { Auto, Scalar, Avx2 };

bool avx2_available();
void set_impl(Impl impl);      // throws InvalidInput if unavailable
Impl active_impl();            // resolved (never Auto)
std::string impl_name();

// sum of all entries, compensated (Neumaier)
double sum(std::span<const double> x);

// sum of a_i * b_i
double dot(std::span<const double> a, std::span<const double> b);

// sum of sqrt(a_i * b_i); negative products are clamped to zero
double sqrt_dot(std::span<const double> a, std::span<const double> b);

// log(sum of exp(x_i)), max-shifted; -inf entries are allowed
double log_sum_exp(std::span<const double> x);

// log(sum of exp(a_i + t*b_i)), max-shifted; robust for any magnitude of t
double log_sum_exp_affine(std::span<const double> a, std::span<const double> b,
                          double t);

// sum of exp(a_i + t*b_i) without shifting; caller guarantees the terms
// stay inside the representable range
double exp_affine_sum(std::span<const double> a, std::span<const double> b,
                      double t);

// Neumaier-compensated running sum for sequential accumulation loops.
class Accumulator {
  public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {
double sum_scalar(std::span<const double>);
double dot_scalar(std::span<const double>, std::span<const double>);
double sqrt_dot_scalar(std::span<const double>, std::span<const double>);
double log_sum_exp_scalar(std::span<const double>);
double log_sum_exp_affine_scalar(std::span<const double>, std::span<const double>, double);
double exp_affine_sum_scalar(std::span<const double>, std::span<const double>, double);
#ifdef MVC_HAVE_AVX2
double sum_avx2(std::span<const double>);
double dot_avx2(std::span<const double>, std::span<const double>);
double sqrt_dot_avx2(std::span<const double>, std::span<const double>);
double log_sum_exp_avx2(std::span<const double>);
double log_sum_exp_affine_avx2(std::span<const double>, std::span<const double>, double);
double exp_affine_sum_avx2(std::span<const double>, std::span<const double>, double);
#endif
}  // namespace detail

}  // namespace mvc::kern
