#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "toruspdo/expr.hpp"
#include "toruspdo/kernels.hpp"

namespace toruspdo {

inline double grid_x(std::size_t q, std::size_t Q) {
    return (2.0 * std::numbers::pi * static_cast<double>(q)) / static_cast<double>(Q);
}

// Samples of a symbol on the Q x (2K+1) grid (x_q, k), x_q = 2 pi q / Q.
// Column-major: each k-column is contiguous.
struct ToroidalGrid {
    std::size_t Q = 0;
    int K = 0;
    std::vector<cplx> values;

    std::size_t idx(std::size_t q, int k) const {
        return static_cast<std::size_t>(k + K) * Q + q;
    }
    cplx at(std::size_t q, int k) const { return values[idx(q, k)]; }
    cplx& at(std::size_t q, int k) { return values[idx(q, k)]; }
    const cplx* col(int k) const { return values.data() + static_cast<std::size_t>(k + K) * Q; }
    cplx* col(int k) { return values.data() + static_cast<std::size_t>(k + K) * Q; }
};

// Fourier coefficients in x: coeffs(m,k) = (1/Q) sum_q grid(q,k) e^{-2pi i q m/Q},
// |m| <= M, |k| <= K. Per-k column of 2M+1 coefficients is contiguous.
// For x-independent symbols all m != 0 entries are exactly zero.
struct FourierTable {
    int M = 0;
    int K = 0;
    std::vector<cplx> coeffs;

    std::size_t idx(int m, int k) const {
        return static_cast<std::size_t>(k + K) * (2 * M + 1) + static_cast<std::size_t>(m + M);
    }
    cplx at(int m, int k) const { return coeffs[idx(m, k)]; }
    cplx& at(int m, int k) { return coeffs[idx(m, k)]; }
    const cplx* col(int k) const {
        return coeffs.data() + static_cast<std::size_t>(k + K) * (2 * M + 1);
    }
    cplx* col(int k) {
        return coeffs.data() + static_cast<std::size_t>(k + K) * (2 * M + 1);
    }
};

// Sampled seminorm estimates C_{t,r} = sup |Delta_k^t D_x^r sigma| / <k>^{m - rho t + delta r}
// together with evidence of unbounded growth across window doublings.
struct HormanderReport {
    double order_m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    int max_t = 0;
    int max_r = 0;
    std::map<std::pair<int, int>, double> seminorms;
    std::map<std::pair<int, int>, bool> growing;
};

class Symbol {
public:
    enum class Kind { ClosedForm, Multiplier, Sampled };

    using EvalFn = std::function<cplx(double x, int k)>;
    // Exact sampler at grid points (q, Q, k); used in place of EvalFn when the
    // value at x_q = 2 pi q / Q admits exact rational evaluation (jump symbols).
    using GridEvalFn = std::function<cplx(std::size_t q, std::size_t Q, int k)>;

    static Symbol closed_form(const std::string& expr_text);
    static Symbol multiplier(const std::string& expr_text); // ParseError if it references x
    static Symbol closed_form(std::string description, EvalFn f, GridEvalFn g = nullptr);
    static Symbol multiplier(std::string description, EvalFn f);
    static Symbol sampled(ToroidalGrid grid, std::string description = "sampled");

    Kind kind() const { return kind_; }
    const std::string& description() const { return desc_; }
    bool x_independent() const;

    cplx eval(double x, int k) const;               // ClosedForm / Multiplier only
    cplx eval_grid(std::size_t q, std::size_t Q, int k) const;
    const ToroidalGrid& stored_samples() const;     // Sampled only

private:
    Kind kind_ = Kind::ClosedForm;
    bool x_free_ = false;
    std::string desc_;
    EvalFn eval_;
    GridEvalFn grid_eval_;
    std::shared_ptr<const ToroidalGrid> grid_;
};

ToroidalGrid sample_symbol(const Symbol& sym, std::size_t Q, int K);

// 2M+1 <= Q required. Columns that are constant across q (multipliers and any
// x-free symbol) produce coeffs(0,k) = value and exact zeros elsewhere.
FourierTable fourier_table(const ToroidalGrid& grid, int M);
FourierTable fourier_table(const Symbol& sym, std::size_t Q, int K, int M);

// Forward difference in k: out(.,k) = sum_{h=0..t} (-1)^{t-h} C(t,h) in(.,k+h),
// |k| <= K - t. The window shrinks symmetrically so the result stays centered.
ToroidalGrid delta_k(const ToroidalGrid& grid, int t);
FourierTable delta_k(const FourierTable& table, int t);

// Spectral derivative per column: mode m scaled by m^r (D_x = -i d/dx).
// The unmatched Q/2 mode is zeroed for odd r.
ToroidalGrid d_x(const ToroidalGrid& grid, int r);

HormanderReport hormander_estimate(const Symbol& sym, double m, double rho, double delta,
                                   int max_t, int max_r,
                                   std::size_t Q = 256, int K = 64);

// Entry k+K holds max_q |grid(q,k)|.
std::vector<double> sup_abs_per_k(const ToroidalGrid& grid);

// Indicator symbol sigma(x,k) = 1 on 0 <= x < 2 pi / 2^{|k|}, else 0,
// sampled exactly at grid points by integer comparison.
Symbol make_jump_symbol();

// Rademacher-series symbol of the strictly singular operator example:
//   sigma(x,k) = (e^{-ixk}/(ik)) sum_{n=1..terms} 2^{(n+2)(p-1)/2}
//                e^{-ik a_n} (e^{-ik a_n} - 1) r_n(x),   a_n = 2 pi / 2^{n+2},
// with the k = 0 column taken as the k -> 0 limit (per-term factor -a_n) and
// r_n(x) = sign(sin(2^{n-1} x)) evaluated exactly at grid rationals.
Symbol make_singular_symbol(double p, int terms);

} // namespace toruspdo
