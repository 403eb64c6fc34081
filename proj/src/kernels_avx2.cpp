// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma and reached only
// through the runtime dispatch table in kernels.cpp.

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <span>

#include "mvc/kernels.hpp"

namespace mvc::kern::detail {

namespace {

// 4-lane double-precision exp, Cephes rational approximation (~1 ulp).
// Inputs below -690 flush to zero (the true value there is < 1.2e-300,
// negligible for every caller); inputs above the overflow threshold
// saturate to +inf.
inline __m256d exp4(__m256d x) {
    const __m256d log2e  = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d hi_cut = _mm256_set1_pd(709.78271289338397);
    const __m256d lo_cut = _mm256_set1_pd(-690.0);

    __m256d too_big   = _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ);
    __m256d too_small = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
    __m256d xx = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(xx, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xx);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    __m256d r2 = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent bits; |n| <= 1019 here, so the
    // result stays normal
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_castpd_si256(e);
    bits = _mm256_add_epi64(bits, _mm256_slli_epi64(n64, 52));
    e = _mm256_castsi256_pd(bits);

    e = _mm256_blendv_pd(e, _mm256_setzero_pd(), too_small);
    e = _mm256_blendv_pd(
        e, _mm256_set1_pd(std::numeric_limits<double>::infinity()), too_big);
    return e;
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

// per-lane Neumaier step
inline void neumaier_add(__m256d& s, __m256d& c, __m256d v) {
    __m256d t = _mm256_add_pd(s, v);
    __m256d abs_s = _mm256_and_pd(s, kAbsMask);
    __m256d abs_v = _mm256_and_pd(v, kAbsMask);
    __m256d mask = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
    __m256d big = _mm256_blendv_pd(v, s, mask);
    __m256d small = _mm256_blendv_pd(s, v, mask);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
}

// fixed-order lane combine followed by the scalar tail
inline double finish(__m256d s, __m256d c, Accumulator tail_acc) {
    alignas(32) double sl[4], cl[4];
    _mm256_store_pd(sl, s);
    _mm256_store_pd(cl, c);
    Accumulator acc;
    for (int i = 0; i < 4; ++i) acc.add(sl[i]);
    for (int i = 0; i < 4; ++i) acc.add(cl[i]);
    acc.add(tail_acc.value());
    return acc.value();
}

}  // namespace

double sum_avx2(std::span<const double> x) {
    const std::size_t n4 = x.size() & ~std::size_t{3};
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4)
        neumaier_add(s, c, _mm256_loadu_pd(x.data() + i));
    Accumulator tail;
    for (std::size_t i = n4; i < x.size(); ++i) tail.add(x[i]);
    return finish(s, c, tail);
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
    const std::size_t n4 = a.size() & ~std::size_t{3};
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                  _mm256_loadu_pd(b.data() + i));
        neumaier_add(s, c, v);
    }
    Accumulator tail;
    for (std::size_t i = n4; i < a.size(); ++i) tail.add(a[i] * b[i]);
    return finish(s, c, tail);
}

double sqrt_dot_avx2(std::span<const double> a, std::span<const double> b) {
    const std::size_t n4 = a.size() & ~std::size_t{3};
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                  _mm256_loadu_pd(b.data() + i));
        p = _mm256_max_pd(p, _mm256_setzero_pd());
        neumaier_add(s, c, _mm256_sqrt_pd(p));
    }
    Accumulator tail;
    for (std::size_t i = n4; i < a.size(); ++i) {
        double p = a[i] * b[i];
        tail.add(p > 0.0 ? std::sqrt(p) : 0.0);
    }
    return finish(s, c, tail);
}

double log_sum_exp_avx2(std::span<const double> x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x) m = std::max(m, v);
    if (!(m > -std::numeric_limits<double>::infinity())) return m;

    const std::size_t n4 = x.size() & ~std::size_t{3};
    const __m256d mv = _mm256_set1_pd(m);
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), mv);
        neumaier_add(s, c, exp4(v));
    }
    Accumulator tail;
    for (std::size_t i = n4; i < x.size(); ++i) tail.add(std::exp(x[i] - m));
    return m + std::log(finish(s, c, tail));
}

double log_sum_exp_affine_avx2(std::span<const double> a,
                               std::span<const double> b, double t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] + t * b[i]);
    if (!(m > -std::numeric_limits<double>::infinity())) return m;

    const std::size_t n4 = a.size() & ~std::size_t{3};
    const __m256d mv = _mm256_set1_pd(m);
    const __m256d tv = _mm256_set1_pd(t);
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d v = _mm256_fmadd_pd(tv, _mm256_loadu_pd(b.data() + i),
                                    _mm256_loadu_pd(a.data() + i));
        neumaier_add(s, c, exp4(_mm256_sub_pd(v, mv)));
    }
    Accumulator tail;
    for (std::size_t i = n4; i < a.size(); ++i)
        tail.add(std::exp(a[i] + t * b[i] - m));
    return m + std::log(finish(s, c, tail));
}

double exp_affine_sum_avx2(std::span<const double> a,
                           std::span<const double> b, double t) {
    const std::size_t n4 = a.size() & ~std::size_t{3};
    const __m256d tv = _mm256_set1_pd(t);
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d v = _mm256_fmadd_pd(tv, _mm256_loadu_pd(b.data() + i),
                                    _mm256_loadu_pd(a.data() + i));
        neumaier_add(s, c, exp4(v));
    }
    Accumulator tail;
    for (std::size_t i = n4; i < a.size(); ++i)
        tail.add(std::exp(a[i] + t * b[i]));
    return finish(s, c, tail);
}

}  // namespace mvc::kern::detail
