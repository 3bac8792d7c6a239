#include "nlstokes/simd/simd_ops.hpp"

#include <cstdlib>
#include <cstring>

namespace nls::simd {

// Defined in simd_avx2.cpp; returns the scalar table when the build target
// has no usable x86 vector unit.
const OpsTable* avx2_table();

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
    return acc;
}

double s_nrm2sq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * x[k];
    return acc;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void s_xpby(const double* x, double b, double* y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + b * y[k];
}

void s_scal(double a, double* x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) x[k] *= a;
}

void s_sqdist2(double cx, double cy, const double* xs, const double* ys, double* out,
               std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = xs[k] - cx;
        const double dy = ys[k] - cy;
        out[k] = dx * dx + dy * dy;
    }
}

void s_quad_R(const double* q, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 1.0 - q[k];
        const double c = t > 0.0 ? t : 0.0;
        out[k] = c * c;
    }
}

void s_quad_Rbar(const double* q, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 1.0 - q[k];
        const double c = t > 0.0 ? t : 0.0;
        out[k] = c * c * c * (1.0 / 3.0);
    }
}

double s_wsqdiff(const double* w, const double* a, double b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = a[k] - b;
        acc += w[k] * d * d;
    }
    return acc;
}

double s_spmv_row(const double* vals, const int* cols, std::size_t nnz, const double* x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nnz; ++k) acc += vals[k] * x[cols[k]];
    return acc;
}

const OpsTable kScalar = {
    "scalar",  s_dot,    s_nrm2sq,    s_axpy,    s_xpby,     s_scal,
    s_sqdist2, s_quad_R, s_quad_Rbar, s_wsqdiff, s_spmv_row,
};

const OpsTable* select_table() {
    const char* mode = std::getenv("NLSTOKES_SIMD");
    if (mode && std::strcmp(mode, "scalar") == 0) return &kScalar;
    if (avx2_available() &&
        (!mode || std::strcmp(mode, "auto") == 0 || std::strcmp(mode, "avx2") == 0)) {
        return avx2_table();
    }
    return &kScalar;
}

}  // namespace

const OpsTable& scalar_table() { return kScalar; }

const OpsTable& active() {
    static const OpsTable* table = select_table();
    return *table;
}

const char* active_name() { return active().name; }

}  // namespace nls::simd
