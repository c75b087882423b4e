// kernels.cpp — scalar reference kernels and backend dispatch
#include "upb/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace upb::kernels {

namespace scalar {

void spmv(const Csr& a, const cplx* x, cplx* y) {
    for (int r = 0; r < a.rows; ++r) {
        cplx acc(0.0, 0.0);
        const int end = a.row_ptr[r + 1];
        for (int k = a.row_ptr[r]; k < end; ++k) acc += a.val[k] * x[a.col[k]];
        y[r] = acc;
    }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(std::size_t n, cplx alpha, cplx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

cplx dotu(std::size_t n, const cplx* a, const cplx* b) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs(std::size_t n, const cplx* x) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, std::max(std::fabs(x[i].real()), std::fabs(x[i].imag())));
    return m;
}

double max_abs_diff(std::size_t n, const cplx* a, const cplx* b) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(a[i].real() - b[i].real()));
        m = std::max(m, std::fabs(a[i].imag() - b[i].imag()));
    }
    return m;
}

}  // namespace scalar

#if (defined(__x86_64__) || defined(_M_X64)) && !defined(UPB_NO_AVX2)
namespace avx2 {
// defined in kernels_avx2.cpp
void spmv(const Csr&, const cplx*, cplx*);
void axpy(std::size_t, cplx, const cplx*, cplx*);
void scal(std::size_t, cplx, cplx*);
cplx dotu(std::size_t, const cplx*, const cplx*);
double max_abs(std::size_t, const cplx*);
double max_abs_diff(std::size_t, const cplx*, const cplx*);
bool supported();
}  // namespace avx2
#endif

namespace {

struct Vtable {
    void (*spmv)(const Csr&, const cplx*, cplx*);
    void (*axpy)(std::size_t, cplx, const cplx*, cplx*);
    void (*scal)(std::size_t, cplx, cplx*);
    cplx (*dotu)(std::size_t, const cplx*, const cplx*);
    double (*max_abs)(std::size_t, const cplx*);
    double (*max_abs_diff)(std::size_t, const cplx*, const cplx*);
};

constexpr Vtable kScalar{scalar::spmv, scalar::axpy, scalar::scal,
                         scalar::dotu, scalar::max_abs, scalar::max_abs_diff};

#if (defined(__x86_64__) || defined(_M_X64)) && !defined(UPB_NO_AVX2)
constexpr Vtable kAvx2{avx2::spmv, avx2::axpy, avx2::scal,
                       avx2::dotu, avx2::max_abs, avx2::max_abs_diff};
#endif

std::atomic<const Vtable*> g_vtable{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Vtable* init_vtable() {
#if (defined(__x86_64__) || defined(_M_X64)) && !defined(UPB_NO_AVX2)
    if (avx2::supported()) {
        g_backend.store(Backend::avx2);
        return &kAvx2;
    }
#endif
    g_backend.store(Backend::scalar);
    return &kScalar;
}

const Vtable& table() {
    const Vtable* t = g_vtable.load(std::memory_order_acquire);
    if (!t) {
        t = init_vtable();
        g_vtable.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

Backend active_backend() {
    table();
    return g_backend.load();
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
#if (defined(__x86_64__) || defined(_M_X64)) && !defined(UPB_NO_AVX2)
    return avx2::supported();
#else
    return false;
#endif
}

void set_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error("kernel backend unavailable");
    switch (b) {
        case Backend::scalar:
            g_vtable.store(&kScalar);
            break;
        case Backend::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && !defined(UPB_NO_AVX2)
            g_vtable.store(&kAvx2);
#endif
            break;
    }
    g_backend.store(b);
}

void spmv(const Csr& a, const cplx* x, cplx* y) { table().spmv(a, x, y); }
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) { table().axpy(n, alpha, x, y); }
void scal(std::size_t n, cplx alpha, cplx* x) { table().scal(n, alpha, x); }
cplx dotu(std::size_t n, const cplx* a, const cplx* b) { return table().dotu(n, a, b); }
double max_abs(std::size_t n, const cplx* x) { return table().max_abs(n, x); }
double max_abs_diff(std::size_t n, const cplx* a, const cplx* b) {
    return table().max_abs_diff(n, a, b);
}

}  // namespace upb::kernels
