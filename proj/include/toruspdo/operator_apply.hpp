#pragma once

#include "toruspdo/assoc_matrix.hpp"
#include "toruspdo/symbol.hpp"

namespace toruspdo {

// A function on the circle, stored as Q uniform samples. Coefficients are
// optional; when both are present the coefficients are the normalized forward
// transform of the samples over the window |k| <= coeff_n.
struct PeriodicFunction {
    std::size_t Q = 0;
    std::vector<cplx> samples;
    std::vector<cplx> coeffs; // indexed k+coeff_n; empty when absent
    int coeff_n = -1;
    double dropped_tail = 0.0; // l2 mass outside the window at the last truncation

    static PeriodicFunction from_samples(std::vector<cplx> samples);
    static PeriodicFunction from_coeffs(std::size_t Q, const CoeffVector& coeffs);
};

// Normalized Fourier coefficients of f over |k| <= n.
CoeffVector forward_coeffs(const PeriodicFunction& f, int n);

// out(x_q) = sum_{|k|<=n} sigma(x_q,k) fhat(k) e^{i x_q k}, with the discarded
// coefficient mass recorded on the result.
PeriodicFunction apply_operator(const Symbol& sym, const PeriodicFunction& f, int n);

// Relative l2 gap between applying the operator on the grid and multiplying by
// the associated matrix, over the output modes the truncation fully resolves.
// M < 0 means M = n.
double matrix_consistency_residual(const Symbol& sym, const PeriodicFunction& f, int n,
                                   int M = -1);

} // namespace toruspdo
