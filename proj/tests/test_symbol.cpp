#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "toruspdo/errors.hpp"
#include "toruspdo/symbol.hpp"

using namespace toruspdo;

namespace {

constexpr double pi = std::numbers::pi;

cplx table_synthesis(const FourierTable& t, int k, double x) {
    cplx s{};
    for (int m = -t.M; m <= t.M; ++m) s += t.at(m, k) * std::polar(1.0, m * x);
    return s;
}

// independent forward-difference oracle
cplx direct_delta(const ToroidalGrid& g, int t, std::size_t q, int k) {
    std::vector<double> c(static_cast<std::size_t>(t) + 1, 0.0);
    c[0] = 1.0;
    for (int i = 1; i <= t; ++i)
        for (int h = i; h >= 1; --h) c[static_cast<std::size_t>(h)] += c[static_cast<std::size_t>(h - 1)];
    cplx s{};
    for (int h = 0; h <= t; ++h) {
        const double sign = ((t - h) % 2 == 0) ? 1.0 : -1.0;
        s += sign * c[static_cast<std::size_t>(h)] * g.at(q, k + h);
    }
    return s;
}

} // namespace

TEST_CASE("sampling a shift symbol and reading its coefficients") {
    const Symbol sym = Symbol::closed_form("exp(i*x)");
    const ToroidalGrid g = sample_symbol(sym, 64, 4);
    for (int k = -4; k <= 4; ++k)
        for (std::size_t q = 0; q < 64; ++q)
            CHECK(std::abs(g.at(q, k) - std::polar(1.0, grid_x(q, 64))) <= 1e-15);

    const FourierTable t = fourier_table(g, 3);
    for (int k = -4; k <= 4; ++k)
        for (int m = -3; m <= 3; ++m) {
            const cplx want = m == 1 ? cplx{1.0, 0.0} : cplx{};
            CHECK(std::abs(t.at(m, k) - want) <= 1e-13);
        }
}

TEST_CASE("multiplier tables have exact zeros off the diagonal ring") {
    const Symbol sym = Symbol::multiplier("<k>^-1");
    const FourierTable t = fourier_table(sym, 64, 8, 5);
    for (int k = -8; k <= 8; ++k) {
        CHECK(t.at(0, k) == sym.eval(0.0, k));
        for (int m = -5; m <= 5; ++m)
            if (m != 0) CHECK(t.at(m, k) == cplx{});
    }
}

TEST_CASE("x-free closed forms get the same constant-column treatment") {
    const Symbol sym = Symbol::closed_form("k*k + i");
    CHECK(sym.x_independent());
    const FourierTable t = fourier_table(sym, 32, 4, 3);
    for (int k = -4; k <= 4; ++k)
        for (int m = -3; m <= 3; ++m)
            if (m != 0) CHECK(t.at(m, k) == cplx{});
}

TEST_CASE("parseval per column at full band") {
    const Symbol sym = Symbol::closed_form("exp(i*x) + i*cos(x)/2 + k");
    const std::size_t Q = 64;
    const ToroidalGrid g = sample_symbol(sym, Q, 3);
    const FourierTable t = fourier_table(g, 31);
    for (int k = -3; k <= 3; ++k) {
        double lhs = 0.0;
        for (std::size_t q = 0; q < Q; ++q) lhs += std::norm(g.at(q, k));
        lhs /= static_cast<double>(Q);
        double rhs = 0.0;
        for (int m = -31; m <= 31; ++m) rhs += std::norm(t.at(m, k));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("band-limited symbols rebuild from their table") {
    const Symbol sym = Symbol::closed_form("exp(i*x) + 2*exp(0-i*x) + k*cos(x)");
    const std::size_t Q = 64;
    const ToroidalGrid g = sample_symbol(sym, Q, 4);
    const FourierTable t = fourier_table(g, 2);
    for (int k = -4; k <= 4; ++k)
        for (std::size_t q = 0; q < Q; ++q)
            CHECK(std::abs(table_synthesis(t, k, grid_x(q, Q)) - g.at(q, k)) <=
                  1e-12 * (1.0 + std::abs(double(k))));
}

TEST_CASE("forward differences match the direct binomial sum") {
    const Symbol sym = Symbol::closed_form("exp(i*x)/<k> + k/(<k>*<k>)");
    const ToroidalGrid g = sample_symbol(sym, 32, 8);
    for (int t = 0; t <= 4; ++t) {
        const ToroidalGrid d = delta_k(g, t);
        CHECK(d.K == 8 - t);
        for (int k = -d.K; k <= d.K; ++k)
            for (std::size_t q = 0; q < 32; ++q)
                CHECK(std::abs(d.at(q, k) - direct_delta(g, t, q, k)) <= 1e-12);
    }
    CHECK_THROWS_AS(delta_k(g, 9), WindowExhausted);
}

TEST_CASE("difference of a product obeys the discrete Leibniz rule") {
    const ToroidalGrid a = sample_symbol(Symbol::closed_form("exp(i*x)*<k>^-1"), 32, 6);
    const ToroidalGrid b = sample_symbol(Symbol::closed_form("cos(x)+k/8"), 32, 6);
    ToroidalGrid ab = a;
    for (int k = -6; k <= 6; ++k)
        for (std::size_t q = 0; q < 32; ++q) ab.at(q, k) = a.at(q, k) * b.at(q, k);

    const ToroidalGrid dab = delta_k(ab, 1);
    const ToroidalGrid da = delta_k(a, 1);
    const ToroidalGrid db = delta_k(b, 1);
    for (int k = -5; k <= 5; ++k)
        for (std::size_t q = 0; q < 32; ++q) {
            const cplx want = da.at(q, k) * b.at(q, k + 1) + a.at(q, k) * db.at(q, k);
            CHECK(std::abs(dab.at(q, k) - want) <= 1e-12);
        }
}

TEST_CASE("spectral derivative fixes pure modes and kills constants") {
    const ToroidalGrid g = sample_symbol(Symbol::closed_form("exp(i*3*x)"), 64, 2);
    const ToroidalGrid d2 = d_x(g, 2);
    for (int k = -2; k <= 2; ++k)
        for (std::size_t q = 0; q < 64; ++q)
            CHECK(std::abs(d2.at(q, k) - 9.0 * g.at(q, k)) <= 1e-11);

    const ToroidalGrid c = sample_symbol(Symbol::multiplier("<k>^-1"), 64, 2);
    const ToroidalGrid dc = d_x(c, 3);
    for (const cplx& z : dc.values) CHECK(z == cplx{});
}

TEST_CASE("difference and derivative commute") {
    const ToroidalGrid g =
        sample_symbol(Symbol::closed_form("exp(i*x)/(1+k*k/64) + sin(x)"), 64, 6);
    const ToroidalGrid ad = delta_k(d_x(g, 1), 2);
    const ToroidalGrid da = d_x(delta_k(g, 2), 1);
    for (int k = -4; k <= 4; ++k)
        for (std::size_t q = 0; q < 64; ++q)
            CHECK(std::abs(ad.at(q, k) - da.at(q, k)) <= 1e-12);
}

TEST_CASE("jump symbol samples exactly on the dyadic grid") {
    const Symbol sym = make_jump_symbol();
    const std::size_t Q = 64;
    const ToroidalGrid g = sample_symbol(sym, Q, 7);
    for (std::size_t q = 0; q < Q; ++q) {
        CHECK(g.at(q, 0) == cplx{1.0, 0.0});
        CHECK(g.at(q, 3) == (q < 8 ? cplx{1.0, 0.0} : cplx{}));
        CHECK(g.at(q, -3) == g.at(q, 3));
        CHECK(g.at(q, 6) == (q == 0 ? cplx{1.0, 0.0} : cplx{}));
        CHECK(g.at(q, 7) == (q == 0 ? cplx{1.0, 0.0} : cplx{})); // interval narrower than the grid
    }
    const FourierTable t = fourier_table(g, 2);
    CHECK(t.at(0, 0) == cplx{1.0, 0.0});
    CHECK(t.at(0, 3) == cplx{0.125, 0.0});
    CHECK(t.at(0, 6) == cplx{1.0 / 64.0, 0.0});

    // the float path agrees with the exact integer path on this grid
    for (int k = -7; k <= 7; ++k)
        for (std::size_t q = 0; q < Q; ++q)
            CHECK(g.at(q, k) == sym.eval(grid_x(q, Q), k));
}

TEST_CASE("rademacher series symbol matches a direct float evaluation away from sign flips") {
    const double p = 1.5;
    const int terms = 4;
    const Symbol sym = make_singular_symbol(p, terms);
    const std::size_t Q = 256;
    const ToroidalGrid g = sample_symbol(sym, Q, 8);

    auto safe = [&](std::size_t q) {
        for (int n = 1; n <= terms; ++n)
            if (std::abs(std::sin(std::ldexp(1.0, n - 1) * grid_x(q, Q))) < 1e-6)
                return false;
        return true;
    };
    for (int k : {-8, -3, 1, 2, 8}) {
        for (std::size_t q = 0; q < Q; ++q) {
            if (!safe(q)) continue;
            const double x = grid_x(q, Q);
            cplx s{};
            for (int n = 1; n <= terms; ++n) {
                const double a = 2.0 * pi / std::ldexp(1.0, n + 2);
                const double w = std::exp2(0.5 * (n + 2) * (p - 1.0));
                const double r =
                    std::sin(std::ldexp(1.0, n - 1) * x) > 0.0 ? 1.0 : -1.0;
                const cplx e = std::polar(1.0, -k * a);
                s += w * e * (e - 1.0) * r;
            }
            s *= std::polar(1.0, -x * k) / cplx{0.0, double(k)};
            CHECK(std::abs(g.at(q, k) - s) <= 1e-10 * (1.0 + std::abs(s)));
        }
    }
    // k = 0 column takes the limit value instead of 0/0
    for (std::size_t q = 0; q < Q; ++q) {
        CHECK(std::isfinite(g.at(q, 0).real()));
        CHECK(std::isfinite(g.at(q, 0).imag()));
    }
}

TEST_CASE("stored samples slice, decimate, and interpolate") {
    const Symbol base = Symbol::closed_form("exp(i*x) + cos(x)*k/4");
    const ToroidalGrid stored = sample_symbol(base, 128, 8);
    const Symbol saved = Symbol::sampled(stored, "saved");

    const ToroidalGrid slice = sample_symbol(saved, 128, 4);
    for (int k = -4; k <= 4; ++k)
        for (std::size_t q = 0; q < 128; ++q) CHECK(slice.at(q, k) == stored.at(q, k));

    const ToroidalGrid down = sample_symbol(saved, 64, 8);
    const ToroidalGrid direct = sample_symbol(base, 64, 8);
    for (int k = -8; k <= 8; ++k)
        for (std::size_t q = 0; q < 64; ++q) CHECK(down.at(q, k) == direct.at(q, k));

    const ToroidalGrid up = sample_symbol(saved, 256, 8);
    const ToroidalGrid fine = sample_symbol(base, 256, 8);
    for (int k = -8; k <= 8; ++k)
        for (std::size_t q = 0; q < 256; ++q)
            CHECK(std::abs(up.at(q, k) - fine.at(q, k)) <= 1e-12);

    CHECK_THROWS_AS(sample_symbol(saved, 128, 10), WindowTooLarge);
}

TEST_CASE("upsampling splits the unmatched top mode evenly") {
    // cos(4x) sampled at Q=8 lives entirely in the unmatched bin
    const ToroidalGrid coarse = sample_symbol(Symbol::closed_form("cos(4*x)"), 8, 1);
    const Symbol saved = Symbol::sampled(coarse, "nyquist");
    const ToroidalGrid up = sample_symbol(saved, 32, 1);
    for (std::size_t q = 0; q < 32; ++q)
        CHECK(std::abs(up.at(q, 0) - std::cos(4.0 * grid_x(q, 32))) <= 1e-12);
}

TEST_CASE("non-finite samples are rejected with the module code") {
    const Symbol sym = Symbol::closed_form("1/k");
    try {
        sample_symbol(sym, 32, 2);
        FAIL("expected NonFiniteSample");
    } catch (const NonFiniteSample& e) {
        CHECK(std::string(e.code()) == "symbol_core.NonFiniteSample");
    }
}

TEST_CASE("window validation") {
    const Symbol sym = Symbol::multiplier("k");
    CHECK_THROWS_AS(sample_symbol(sym, 48, 4), ConfigError);
    CHECK_THROWS_AS(sample_symbol(sym, 64, 0), ConfigError);
    const ToroidalGrid g = sample_symbol(sym, 8, 2);
    CHECK_THROWS_AS(fourier_table(g, 4), WindowTooLarge);
}

TEST_CASE("per-column sup matches a plain scan") {
    const ToroidalGrid g =
        sample_symbol(Symbol::closed_form("sin(x)*k + i*cos(2*x)"), 64, 5);
    const std::vector<double> sup = sup_abs_per_k(g);
    for (int k = -5; k <= 5; ++k) {
        double want = 0.0;
        for (std::size_t q = 0; q < 64; ++q) want = std::max(want, std::abs(g.at(q, k)));
        CHECK(sup[static_cast<std::size_t>(k + 5)] ==
              doctest::Approx(want).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("seminorm growth flags unbounded families and spares bounded ones") {
    const HormanderReport grow = hormander_estimate(Symbol::multiplier("k"), 0.0, 1.0, 0.0, 1, 0);
    CHECK(grow.growing.at({0, 0}));
    CHECK(grow.seminorms.at({0, 0}) == doctest::Approx(64.0).epsilon(1e-12));

    const HormanderReport flat =
        hormander_estimate(Symbol::multiplier("<k>^-1"), -1.0, 1.0, 0.0, 1, 0);
    CHECK(!flat.growing.at({0, 0}));
    CHECK(flat.seminorms.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
}
