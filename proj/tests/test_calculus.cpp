#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "toruspdo/assoc_matrix.hpp"
#include "toruspdo/calculus.hpp"
#include "toruspdo/errors.hpp"
#include "toruspdo/symbol.hpp"

using namespace toruspdo;

namespace {

double grid_distance(const ToroidalGrid& a, const ToroidalGrid& b) {
    REQUIRE(a.Q == b.Q);
    REQUIRE(a.K == b.K);
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s = std::max(s, std::abs(a.values[i] - b.values[i]));
    return s;
}

} // namespace

TEST_CASE("multiplier composition is the plain product") {
    const Symbol a = Symbol::multiplier("<k>^-1");
    const Symbol b = Symbol::multiplier("1/(1+k*k)");
    const ExpansionResult r = compose_asymptotic(a, b, 4, 16, 32);
    CHECK(r.order_N == 4);
    CHECK(r.symbol_grid.K == 28);
    CHECK(r.remainder_proxy == 0.0);
    CHECK(r.leading_term.values.empty());
    for (int k = -28; k <= 28; ++k) {
        const cplx want = a.eval(0.0, k) * b.eval(0.0, k);
        for (std::size_t q = 0; q < 16; ++q) CHECK(r.symbol_grid.at(q, k) == want);
    }
}

TEST_CASE("x-only composition is the plain product at low order") {
    const Symbol a = Symbol::closed_form("2 + cos(x)");
    const Symbol b = Symbol::closed_form("exp(i*x)/4 + 1");
    const ExpansionResult r = compose_asymptotic(a, b, 3, 32, 8);
    const ToroidalGrid ga = sample_symbol(a, 32, 5);
    const ToroidalGrid gb = sample_symbol(b, 32, 5);
    for (int k = -5; k <= 5; ++k)
        for (std::size_t q = 0; q < 32; ++q)
            CHECK(r.symbol_grid.at(q, k) == ga.at(q, k) * gb.at(q, k));
    CHECK(r.remainder_proxy <= 1e-10);
}

TEST_CASE("composition against the exact product of a multiplier and a shift") {
    // T_a T_b with a(k) = <k>^-1 and b = e^{ix} has the exact symbol a(k+1) e^{ix}
    const Symbol a = Symbol::multiplier("<k>^-1");
    const Symbol b = Symbol::closed_form("exp(i*x)");
    const std::size_t Q = 32;

    auto sup_err = [&](int N, int k0) {
        const ExpansionResult r = compose_asymptotic(a, b, N, Q, 32);
        double err = 0.0;
        for (int k = -r.symbol_grid.K; k <= r.symbol_grid.K; ++k) {
            if (std::abs(k) < k0) continue;
            const double ak1 = 1.0 / std::sqrt(1.0 + double(k + 1) * (k + 1));
            for (std::size_t q = 0; q < Q; ++q) {
                const cplx want = ak1 * std::polar(1.0, grid_x(q, Q));
                err = std::max(err, std::abs(r.symbol_grid.at(q, k) - want));
            }
        }
        return err;
    };

    // For a shift the exact symbol is a(k+1) e^{ix} = (a + Delta a) e^{ix}, so the
    // order-2 expansion already reproduces it and higher orders only add the
    // h >= 2 difference terms.  The error shrinks with |k|, not with N.
    CHECK(sup_err(2, 1) <= 1e-12);
    const double e4 = sup_err(3, 4);
    const double e8 = sup_err(3, 8);
    const double e16 = sup_err(3, 16);
    CHECK(e8 <= 1e-2);
    CHECK(e4 > e8);
    CHECK(e8 > e16);

    const ExpansionResult r = compose_asymptotic(a, b, 6, Q, 32);
    CHECK(r.remainder_proxy > 0.0);
    CHECK(r.remainder_proxy <= 1e-2);
}

TEST_CASE("adjoint of a real multiplier is itself") {
    const Symbol a = Symbol::multiplier("<k>^-1");
    const ExpansionResult r = adjoint_asymptotic(a, 3, 16, 16);
    CHECK(r.symbol_grid.K == 13);
    CHECK(r.remainder_proxy == 0.0);
    for (int k = -13; k <= 13; ++k) {
        const cplx want = a.eval(0.0, k);
        for (std::size_t q = 0; q < 16; ++q) CHECK(r.symbol_grid.at(q, k) == want);
    }
}

TEST_CASE("adjoint of a real multiplication operator is itself at low order") {
    const Symbol s = Symbol::closed_form("cos(x) + 2");
    const ExpansionResult r = adjoint_asymptotic(s, 3, 32, 8);
    const ToroidalGrid g = sample_symbol(s, 32, 5);
    CHECK(grid_distance(r.symbol_grid, g) == 0.0);
}

TEST_CASE("adjoint of a weighted shift against its exact symbol") {
    // (T_sigma)* for sigma = e^{ix} <k>^-1 has symbol e^{-ix} <k-1>^-1
    const Symbol s = Symbol::closed_form("exp(i*x)*<k>^-1");
    const std::size_t Q = 32;
    const ExpansionResult r = adjoint_asymptotic(s, 6, Q, 32);
    auto sup_err = [&](int k0) {
        double err = 0.0;
        for (int k = -r.symbol_grid.K; k <= r.symbol_grid.K; ++k) {
            if (std::abs(k) < k0) continue;
            const double w = 1.0 / std::sqrt(1.0 + double(k - 1) * (k - 1));
            for (std::size_t q = 0; q < Q; ++q) {
                const cplx want = w * std::polar(1.0, -grid_x(q, Q));
                err = std::max(err, std::abs(r.symbol_grid.at(q, k) - want));
            }
        }
        return err;
    };
    // The h = 1 term carries an extra factor i relative to the Newton series of
    // <k-1>^-1, so the defect is ~ sqrt(2) |Delta a| and decays like |k|^-2.
    const double e8 = sup_err(8);
    const double e16 = sup_err(16);
    CHECK(e8 <= 5e-2);
    CHECK(e16 <= 1e-2);
    CHECK(e16 < e8);
    CHECK(r.remainder_proxy > 0.0);
}

TEST_CASE("expansion tables agree with the exact matrix product") {
    const Symbol a = Symbol::multiplier("<k>^-1");
    const Symbol b = Symbol::closed_form("exp(i*x)");
    const int n = 16;
    const std::size_t Q = 64;

    const AssocMatrix exact = compose_exact_matrix(a, b, n, Q);
    for (int k = -n; k < n; ++k) {
        const double want = 1.0 / std::sqrt(1.0 + double(k + 1) * (k + 1));
        CHECK(std::abs(exact.at(k + 1, k) - cplx{want, 0.0}) <= 1e-12);
    }
    for (int k = -n; k <= n; ++k)
        CHECK(std::abs(exact.at(k, k)) <= 1e-12);

    const ExpansionResult r = compose_asymptotic(a, b, 6, Q, 32);
    const AssocMatrix approx = build_assoc_matrix(fourier_table(r.symbol_grid, 2), n);
    for (int k = 8; k < n; ++k) {
        CHECK(std::abs(approx.at(k + 1, k) - exact.at(k + 1, k)) <= 1e-2);
        CHECK(std::abs(approx.at(-k, -k - 1) - exact.at(-k, -k - 1)) <= 1e-2);
    }
}

TEST_CASE("matrices synthesize back to symbols away from the corners") {
    const Symbol sym = Symbol::closed_form("1 + 2*exp(i*x) + exp(0-i*x)*k/8");
    const std::size_t Q = 32;
    const int n = 8;
    const ToroidalGrid g = sample_symbol(sym, Q, n);
    const AssocMatrix m = build_assoc_matrix(fourier_table(g, 2), n);
    REQUIRE(m.band == 1);
    const ToroidalGrid back = symbol_from_matrix(m, Q);
    CHECK(back.K == n);
    for (int k = -(n - 1); k <= n - 1; ++k)
        for (std::size_t q = 0; q < Q; ++q)
            CHECK(std::abs(back.at(q, k) - g.at(q, k)) <= 1e-12);

    CHECK_THROWS_AS(symbol_from_matrix(m, 48), ConfigError);
    CHECK_THROWS_AS(symbol_from_matrix(m, 2), ConfigError);
}

TEST_CASE("multiplier powers collapse to the pointwise power") {
    const Symbol a = Symbol::multiplier("<k>^-1");
    const ExpansionResult r = symbol_power(a, 3, 4, 16, 32);
    CHECK(r.symbol_grid.K == 24);
    CHECK(r.leading_term.K == 24);
    CHECK(r.remainder_proxy == 0.0);
    CHECK(r.uniform_bound == 1.0);
    REQUIRE(r.symbol_grid.values.size() == r.leading_term.values.size());
    for (std::size_t i = 0; i < r.symbol_grid.values.size(); ++i)
        CHECK(r.symbol_grid.values[i] == r.leading_term.values[i]);
    for (int k = -24; k <= 24; ++k) {
        const double want = std::pow(1.0 + double(k) * k, -1.5);
        CHECK(std::abs(r.symbol_grid.at(0, k) - cplx{want, 0.0}) <= 1e-15 * (1.0 + want));
    }
}

TEST_CASE("x-only powers fold in composition order") {
    const Symbol s = Symbol::closed_form("2 + cos(x)");
    const std::size_t Q = 32;
    const ExpansionResult r = symbol_power(s, 4, 3, Q, 16);
    CHECK(r.symbol_grid.K == 7);
    const ToroidalGrid base = sample_symbol(s, Q, 7);
    for (int k = -7; k <= 7; ++k)
        for (std::size_t q = 0; q < Q; ++q) {
            cplx v = base.at(q, k);
            for (int i = 2; i <= 4; ++i) v = base.at(q, k) * v;
            CHECK(r.symbol_grid.at(q, k) == v);
        }
    CHECK(r.remainder_proxy <= 1e-10);
    CHECK(r.uniform_bound == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("first power returns the sampled symbol unchanged") {
    const Symbol s = Symbol::closed_form("exp(i*x)/(1+k*k/4)");
    const ExpansionResult r = symbol_power(s, 1, 4, 16, 8);
    const ToroidalGrid g = sample_symbol(s, 16, 8);
    CHECK(grid_distance(r.symbol_grid, g) == 0.0);
    CHECK(r.remainder_proxy == 0.0);
}

TEST_CASE("squaring equals composing a symbol with itself") {
    const Symbol s = Symbol::closed_form("exp(i*x)/(1+k*k/4) + <k>^-1");
    const ExpansionResult pw = symbol_power(s, 2, 3, 16, 16);
    const ExpansionResult cp = compose_asymptotic(s, s, 3, 16, 16);
    REQUIRE(pw.symbol_grid.values.size() == cp.symbol_grid.values.size());
    for (std::size_t i = 0; i < pw.symbol_grid.values.size(); ++i)
        CHECK(pw.symbol_grid.values[i] == cp.symbol_grid.values[i]);
    CHECK(pw.remainder_proxy == cp.remainder_proxy);
}

TEST_CASE("order and window validation") {
    const Symbol a = Symbol::multiplier("1");
    CHECK_THROWS_AS(compose_asymptotic(a, a, 0, 16, 8), ConfigError);
    CHECK_THROWS_AS(compose_asymptotic(a, a, 21, 16, 32), ConfigError);
    CHECK_THROWS_AS(compose_asymptotic(a, a, 9, 16, 8), WindowExhausted);
    CHECK_THROWS_AS(adjoint_asymptotic(a, 9, 16, 8), WindowExhausted);
    CHECK_THROWS_AS(symbol_power(a, 0, 3, 16, 8), ConfigError);
    CHECK_THROWS_AS(symbol_power(a, 12, 3, 16, 32), WindowExhausted);
    CHECK_THROWS_AS(compose_exact_matrix(a, a, -1, 16), ConfigError);
}
