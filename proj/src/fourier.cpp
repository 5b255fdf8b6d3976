#include "toruspdo/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace toruspdo {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int signed_mode(std::size_t bin, std::size_t Q) {
    return bin <= Q / 2 ? static_cast<int>(bin)
                        : static_cast<int>(bin) - static_cast<int>(Q);
}

void fft_inplace(cplx* data, std::size_t Q, int sign) {
    if (!is_pow2(Q))
        throw std::invalid_argument("fft size must be a power of two");
    if (Q == 1) return;

    for (std::size_t i = 1, j = 0; i < Q; ++i) {
        std::size_t bit = Q >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    std::vector<cplx> tw(Q / 2);
    const double base = (sign < 0 ? -2.0 : 2.0) * std::numbers::pi / static_cast<double>(Q);
    for (std::size_t t = 0; t < Q / 2; ++t)
        tw[t] = std::polar(1.0, base * static_cast<double>(t));

    for (std::size_t len = 2; len <= Q; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = Q / len;
        for (std::size_t block = 0; block < Q; block += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx u = data[block + j];
                const cplx v = data[block + j + half] * tw[j * step];
                data[block + j] = u + v;
                data[block + j + half] = u - v;
            }
        }
    }
}

std::vector<cplx> dft_coeffs(std::vector<cplx> samples) {
    const std::size_t Q = samples.size();
    fft_inplace(samples.data(), Q, -1);
    const double inv = 1.0 / static_cast<double>(Q);
    for (auto& c : samples) c *= inv;
    return samples;
}

std::vector<cplx> dft_synthesis(std::vector<cplx> coeffs) {
    fft_inplace(coeffs.data(), coeffs.size(), +1);
    return coeffs;
}

} // namespace toruspdo
