// kernels_avx2.cpp — AVX2+FMA variants; compiled with -mavx2 -mfma and
// selected at runtime only when the CPU reports both features.
#include "upb/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace upb::kernels::avx2 {

bool supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// Two packed complex doubles: [re0, im0, re1, im1].
// (a+bi)(c+di): even lanes ac - bd, odd lanes ad + bc.
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);                    // [ar0,ar0,ar1,ar1]
    __m256d aim = _mm256_permute_pd(a, 0xF);               // [ai0,ai0,ai1,ai1]
    __m256d bsw = _mm256_permute_pd(b, 0x5);               // [bi0,br0,bi1,br1]
    return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline cplx reduce_pair(__m256d acc) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    return {buf[0] + buf[2], buf[1] + buf[3]};
}

}  // namespace

void spmv(const Csr& a, const cplx* x, cplx* y) {
    const auto* vals = reinterpret_cast<const double*>(a.val.data());
    for (int r = 0; r < a.rows; ++r) {
        const int lo = a.row_ptr[r], hi = a.row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        int k = lo;
        for (; k + 1 < hi; k += 2) {
            __m256d v = _mm256_loadu_pd(vals + 2 * k);
            __m128d x0 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col[k]));
            __m128d x1 = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col[k + 1]));
            __m256d xx = _mm256_set_m128d(x1, x0);
            acc = _mm256_add_pd(acc, cmul(v, xx));
        }
        cplx s = reduce_pair(acc);
        for (; k < hi; ++k) s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_set1_pd(alpha.imag());
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xsw = _mm256_permute_pd(xv, 0x5);
        __m256d prod = _mm256_fmaddsub_pd(are, xv, _mm256_mul_pd(aim, xsw));
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal(std::size_t n, cplx alpha, cplx* x) {
    const __m256d are = _mm256_set1_pd(alpha.real());
    const __m256d aim = _mm256_set1_pd(alpha.imag());
    auto* xd = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xsw = _mm256_permute_pd(xv, 0x5);
        _mm256_storeu_pd(xd + 2 * i,
                         _mm256_fmaddsub_pd(are, xv, _mm256_mul_pd(aim, xsw)));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

cplx dotu(std::size_t n, const cplx* a, const cplx* b) {
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(ad + 2 * i);
        __m256d bv = _mm256_loadu_pd(bd + 2 * i);
        acc = _mm256_add_pd(acc, cmul(av, bv));
    }
    cplx s = reduce_pair(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

namespace {

inline double reduce_max(__m256d m) {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, m);
    return std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
}

}  // namespace

double max_abs(std::size_t n, const cplx* x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const auto* xd = reinterpret_cast<const double*>(x);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(xd + 2 * i)));
    double r = reduce_max(m);
    for (; i < n; ++i)
        r = std::max(r, std::max(std::fabs(x[i].real()), std::fabs(x[i].imag())));
    return r;
}

double max_abs_diff(std::size_t n, const cplx* a, const cplx* b) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* bd = reinterpret_cast<const double*>(b);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(bd + 2 * i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    double r = reduce_max(m);
    for (; i < n; ++i) {
        r = std::max(r, std::fabs(a[i].real() - b[i].real()));
        r = std::max(r, std::fabs(a[i].imag() - b[i].imag()));
    }
    return r;
}

}  // namespace upb::kernels::avx2

#endif  // x86_64
