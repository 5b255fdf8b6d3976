#pragma once

#include <cstddef>
#include <vector>

#include "toruspdo/kernels.hpp"

namespace toruspdo {

bool is_pow2(std::size_t n);

// Signed mode index of DFT bin b in [0, Q): b for b <= Q/2, else b - Q.
int signed_mode(std::size_t bin, std::size_t Q);

// In-place radix-2 transform, unnormalized.
// sign = -1: X[m] = sum_q x[q] e^{-2pi i q m / Q}; sign = +1 for synthesis.
void fft_inplace(cplx* data, std::size_t Q, int sign);

// Analysis with 1/Q normalization: bin m holds (1/Q) sum_q x[q] e^{-2pi i q m / Q}.
std::vector<cplx> dft_coeffs(std::vector<cplx> samples);

// Synthesis, exact inverse of dft_coeffs (no further scaling).
std::vector<cplx> dft_synthesis(std::vector<cplx> coeffs);

} // namespace toruspdo
