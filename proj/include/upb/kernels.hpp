// kernels.hpp — complex vector and sparse-matrix kernels with runtime SIMD dispatch
//
// The master-equation integrator spends essentially all of its time in the
// operations below, applied to vectorized density matrices (dimension up to
// ~1.2e4 complex entries) and to the Liouvillian in CSR form. Each kernel has
// a scalar reference implementation and an AVX2+FMA variant; the best
// available backend is selected once at startup and can be overridden for
// equivalence testing.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace upb::kernels {

using cplx = std::complex<double>;

// Compressed-sparse-row complex matrix. row_ptr has rows+1 entries.
struct Csr {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<cplx> val;

    std::size_t nnz() const { return val.size(); }
};

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
// Override the dispatch (tests). Throws if the backend is unavailable.
void set_backend(Backend b);

// y = A x
void spmv(const Csr& a, const cplx* x, cplx* y);
// y += alpha * x
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
// x *= alpha
void scal(std::size_t n, cplx alpha, cplx* x);
// unconjugated dot product  sum_i a_i b_i
cplx dotu(std::size_t n, const cplx* a, const cplx* b);
// max over elements of max(|re|, |im|)
double max_abs(std::size_t n, const cplx* x);
// max over elements of max(|re a-b|, |im a-b|)
double max_abs_diff(std::size_t n, const cplx* a, const cplx* b);

}  // namespace upb::kernels
