#pragma once

#include "toruspdo/symbol.hpp"

namespace toruspdo {

// Truncation of the infinite matrix with entries coeffs(j-k, k) over the
// symmetric window j,k in [-n, n], stored dense row-major.
//   band:    entries with |j-k| > band are exactly zero.
//   trusted: entries with |j|,|k| <= trusted agree with the infinite matrix;
//            building gives trusted = n, products shrink it, and a negative
//            value means no entry can be trusted.
struct AssocMatrix {
    int n = 0;
    int band = 0;
    int trusted = 0;
    std::vector<cplx> entries;

    int dim() const { return 2 * n + 1; }
    int origin() const { return n; } // array offset of the signed index 0
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(j + n) * (2 * n + 1) + static_cast<std::size_t>(k + n);
    }
    cplx at(int j, int k) const { return entries[idx(j, k)]; }
    cplx& at(int j, int k) { return entries[idx(j, k)]; }
    const cplx* row(int j) const {
        return entries.data() + static_cast<std::size_t>(j + n) * (2 * n + 1);
    }
    cplx* row(int j) {
        return entries.data() + static_cast<std::size_t>(j + n) * (2 * n + 1);
    }
};

struct CoeffVector {
    int n = 0;
    std::vector<cplx> values; // indexed k+n, k in [-n, n]

    cplx at(int k) const { return values[static_cast<std::size_t>(k + n)]; }
    cplx& at(int k) { return values[static_cast<std::size_t>(k + n)]; }
};

// Dense (2n+1)^2 block without band structure, used for the Hermitian inner
// product compressions.
struct DenseBlock {
    int n = 0;
    std::vector<cplx> entries;

    int dim() const { return 2 * n + 1; }
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(j + n) * (2 * n + 1) + static_cast<std::size_t>(k + n);
    }
    cplx at(int j, int k) const { return entries[idx(j, k)]; }
    cplx& at(int j, int k) { return entries[idx(j, k)]; }
};

// Rings |m| <= M whose coefficients all fall below 1e-14 of the table maximum
// are dropped from the recorded band so that products keep a usable trusted
// region; the dropped mass is numerically zero by construction.
AssocMatrix build_assoc_matrix(const FourierTable& table, int n);

AssocMatrix adjoint(const AssocMatrix& m);

// Finite product over the shared window. The result is exact on
// trusted = min(trustedA, trustedB) - min(bandA, bandB).
AssocMatrix matmul(const AssocMatrix& a, const AssocMatrix& b);

CoeffVector apply(const AssocMatrix& m, const CoeffVector& v);

// Entry (j,k) = (1/Q) sum_q conj(sigma(x_q,j) e^{i x_q j}) sigma(x_q,k) e^{i x_q k},
// the inner-product realization of (M* M)_{jk}. Requires Q >= 2(M+n)+1 so the
// discrete sum is alias-free for band-limited columns.
DenseBlock gram_block(const FourierTable& table, const ToroidalGrid& grid, int n);

} // namespace toruspdo
