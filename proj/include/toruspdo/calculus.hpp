#pragma once

#include "toruspdo/assoc_matrix.hpp"
#include "toruspdo/symbol.hpp"

namespace toruspdo {

// Result of a truncated expansion. The k-window shrinks by N relative to the
// input: each difference order eats one mode on each side, and the remainder
// proxy needs order N itself.
struct ExpansionResult {
    ToroidalGrid symbol_grid;
    int order_N = 0;
    double remainder_proxy = 0.0; // sup norm of the first omitted term
    ToroidalGrid leading_term;    // power expansion only: pointwise sigma^n (empty otherwise)
    double uniform_bound = 0.0;   // power expansion only: max |sigma| over the input grid
};

// sigma_{AB}(x,k) ~ sum_{h<N} (1/h!) Delta_k^h alpha(x,k) . D_x^h beta(x,k)
ExpansionResult compose_asymptotic(const Symbol& alpha, const Symbol& beta, int N,
                                   std::size_t Q, int K);

// sigma*(x,k) ~ sum_{h<N} (1/h!) Delta_k^h (i D_x)^h conj(sigma)(x,k)
ExpansionResult adjoint_asymptotic(const Symbol& sigma, int N, std::size_t Q, int K);

// Ground truth for composition at finite truncation: the product of the two
// associated matrices on the shared window.
AssocMatrix compose_exact_matrix(const Symbol& alpha, const Symbol& beta, int n,
                                 std::size_t Q);

// Reads a symbol back off a matrix: grid(q,k) = sum_{|m|<=band} entries(k+m,k) e^{i x_q m},
// restricted to columns where the full band fits inside the window.
ToroidalGrid symbol_from_matrix(const AssocMatrix& matrix, std::size_t Q);

// Iterated composition sigma o sigma o ... (n_pow factors), each step at order N.
ExpansionResult symbol_power(const Symbol& sigma, int n_pow, int N, std::size_t Q, int K);

} // namespace toruspdo
