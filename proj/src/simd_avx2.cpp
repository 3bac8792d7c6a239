// AVX2+FMA variants of the inner-loop primitives. Compiled with per-function
// target attributes so the rest of the library keeps the baseline ISA; the
// dispatcher only hands out this table after __builtin_cpu_supports checks.

#include "nlstokes/simd/simd_ops.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define NLS_HAVE_X86 1
#include <immintrin.h>
#else
#define NLS_HAVE_X86 0
#endif

namespace nls::simd {

#if NLS_HAVE_X86

namespace {

#define NLS_AVX2 __attribute__((target("avx2,fma")))

NLS_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

NLS_AVX2 double v_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc);
    double tail = 0.0;
    for (; k < n; ++k) tail += x[k] * y[k];
    return hsum(acc) + tail;
}

NLS_AVX2 double v_nrm2sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d v = _mm256_loadu_pd(x + k);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; k < n; ++k) tail += x[k] * x[k];
    return hsum(acc) + tail;
}

NLS_AVX2 void v_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vy = _mm256_loadu_pd(y + k);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), vy);
        _mm256_storeu_pd(y + k, vy);
    }
    for (; k < n; ++k) y[k] += a * x[k];
}

NLS_AVX2 void v_xpby(const double* x, double b, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vy = _mm256_loadu_pd(y + k);
        vy = _mm256_fmadd_pd(vb, vy, _mm256_loadu_pd(x + k));
        _mm256_storeu_pd(y + k, vy);
    }
    for (; k < n; ++k) y[k] = x[k] + b * y[k];
}

NLS_AVX2 void v_scal(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(x + k, _mm256_mul_pd(va, _mm256_loadu_pd(x + k)));
    for (; k < n; ++k) x[k] *= a;
}

NLS_AVX2 void v_sqdist2(double cx, double cy, const double* xs, const double* ys, double* out,
                        std::size_t n) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + k), vcx);
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + k), vcy);
        _mm256_storeu_pd(out + k, _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
    }
    for (; k < n; ++k) {
        const double dx = xs[k] - cx;
        const double dy = ys[k] - cy;
        out[k] = dx * dx + dy * dy;
    }
}

NLS_AVX2 void v_quad_R(const double* q, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_max_pd(_mm256_sub_pd(one, _mm256_loadu_pd(q + k)), zero);
        _mm256_storeu_pd(out + k, _mm256_mul_pd(t, t));
    }
    for (; k < n; ++k) {
        const double t = 1.0 - q[k];
        const double c = t > 0.0 ? t : 0.0;
        out[k] = c * c;
    }
}

NLS_AVX2 void v_quad_Rbar(const double* q, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d third = _mm256_set1_pd(1.0 / 3.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d t = _mm256_max_pd(_mm256_sub_pd(one, _mm256_loadu_pd(q + k)), zero);
        __m256d t2 = _mm256_mul_pd(t, t);
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_mul_pd(t2, t), third));
    }
    for (; k < n; ++k) {
        const double t = 1.0 - q[k];
        const double c = t > 0.0 ? t : 0.0;
        out[k] = c * c * c * (1.0 / 3.0);
    }
}

NLS_AVX2 double v_wsqdiff(const double* w, const double* a, double b, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), vb);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + k), d), d, acc);
    }
    double tail = 0.0;
    for (; k < n; ++k) {
        const double d = a[k] - b;
        tail += w[k] * d * d;
    }
    return hsum(acc) + tail;
}

NLS_AVX2 double v_spmv_row(const double* vals, const int* cols, std::size_t nnz,
                           const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= nnz; k += 4) {
        __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
        __m256d xv = _mm256_i32gather_pd(x, idx, 8);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    double tail = 0.0;
    for (; k < nnz; ++k) tail += vals[k] * x[cols[k]];
    return hsum(acc) + tail;
}

#undef NLS_AVX2

const OpsTable kAvx2 = {
    "avx2",    v_dot,    v_nrm2sq,    v_axpy,    v_xpby,     v_scal,
    v_sqdist2, v_quad_R, v_quad_Rbar, v_wsqdiff, v_spmv_row,
};

}  // namespace

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const OpsTable* avx2_table() { return &kAvx2; }

#else  // non-x86 targets: vector variant not compiled in

bool avx2_available() { return false; }

const OpsTable* avx2_table() { return &scalar_table(); }

#endif

}  // namespace nls::simd
