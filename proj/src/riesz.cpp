#include "toruspdo/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "toruspdo/errors.hpp"

namespace toruspdo {

namespace {

// max over lo < |k| <= hi
double band_max(const std::vector<double>& per_k, int K, int lo, int hi) {
    double b = 0.0;
    for (int k = -K; k <= K; ++k)
        if (std::abs(k) > lo && std::abs(k) <= hi)
            b = std::max(b, per_k[static_cast<std::size_t>(k + K)]);
    return b;
}

DecayTrend trend_of(double m1, double m2, double m3) {
    const double tau = 0.02;
    const auto down = [&](double a, double b) { return b <= a * (1.0 - tau); };
    const auto up = [&](double a, double b) { return b >= a * (1.0 + tau); };
    const auto flat = [&](double a, double b) {
        return std::abs(b - a) <= tau * std::max(a, b);
    };
    if (down(m1, m2) && down(m2, m3)) return DecayTrend::DECREASING;
    if (up(m1, m2) && up(m2, m3)) return DecayTrend::INCREASING;
    if (flat(m1, m2) && flat(m2, m3)) return DecayTrend::FLAT;
    return DecayTrend::OSCILLATING;
}

bool evaluable_multiplier(const Symbol& sym) {
    if (sym.kind() == Symbol::Kind::Multiplier) return true;
    return sym.kind() == Symbol::Kind::ClosedForm && sym.x_independent();
}

} // namespace

DecayProfile decay_profile(const ToroidalGrid& grid, int W) {
    if (W < 0 || W >= grid.K) {
        std::ostringstream os;
        os << "tail band W=" << W << " must lie inside the window K=" << grid.K;
        throw WindowTooSmall(os.str(), "riesz");
    }
    DecayProfile prof;
    prof.K = grid.K;
    prof.W = W;
    prof.per_k = sup_abs_per_k(grid);
    for (int k = -grid.K; k <= grid.K; ++k)
        if (std::abs(k) >= grid.K - W)
            prof.tail_estimate =
                std::max(prof.tail_estimate, prof.per_k[static_cast<std::size_t>(k + grid.K)]);

    const int K = grid.K;
    if (K >= 8) {
        prof.trend = trend_of(band_max(prof.per_k, K, K / 8, K / 4),
                              band_max(prof.per_k, K, K / 4, K / 2),
                              band_max(prof.per_k, K, K / 2, K));
    } else if (K >= 2) {
        const double m1 = band_max(prof.per_k, K, 0, K / 2);
        const double m2 = band_max(prof.per_k, K, K / 2, K);
        prof.trend = trend_of(m1, m1, m2);
    } else {
        prof.trend = DecayTrend::FLAT;
    }
    return prof;
}

MikhlinResult mikhlin_check(const Symbol& sym, int K) {
    if (!evaluable_multiplier(sym))
        throw ConfigError("mikhlin_check needs an x-independent symbol", "riesz");
    if (K < 1) throw ConfigError("mikhlin_check needs K >= 1", "riesz");

    auto constant_at = [&](int window) {
        double c = 0.0;
        for (int k = -window; k <= window - 1; ++k) {
            const cplx v = sym.eval(0.0, k);
            c = std::max(c, std::abs(v));
            const cplx dv = sym.eval(0.0, k + 1) - v;
            c = std::max(c, std::abs(dv) * std::sqrt(1.0 + static_cast<double>(k) *
                                                               static_cast<double>(k)));
        }
        return c;
    };

    MikhlinResult res;
    res.K = K;
    res.C = constant_at(K);
    res.C_doubled = constant_at(2 * K);
    res.passed = res.C == 0.0 ? res.C_doubled == 0.0 : res.C_doubled < 1.05 * res.C;
    return res;
}

Classification classify(const Symbol& sym, const ClassifyParams& params) {
    ToroidalGrid grid = sample_symbol(sym, params.Q, params.K);
    Classification c;
    c.evidence = decay_profile(grid, params.W);
    c.gohberg_bound = c.evidence.tail_estimate;

    double scale = 0.0;
    for (double v : c.evidence.per_k) scale = std::max(scale, v);

    if (scale == 0.0) {
        c.compact_L2 = Verdict3::YES;
        c.riesz_Lp = Verdict3::YES;
        c.note = "zero symbol";
    } else {
        const bool tail_ok = c.evidence.tail_estimate < params.tol_decay * scale;
        const bool decreasing = c.evidence.trend == DecayTrend::DECREASING;
        if (tail_ok && decreasing) {
            c.compact_L2 = Verdict3::YES;
            c.riesz_Lp = Verdict3::YES;
            c.note = "tail below tolerance with a decreasing dyadic trend; the limit is "
                     "extrapolated from the window, and nothing is claimed about Lp "
                     "compactness";
        } else if (!tail_ok && (c.evidence.trend == DecayTrend::FLAT ||
                                c.evidence.trend == DecayTrend::INCREASING)) {
            c.compact_L2 = Verdict3::NO;
            c.riesz_Lp = Verdict3::NO;
            c.note = "tail mass persists across the window with no decay";
        } else {
            c.compact_L2 = Verdict3::UNDECIDED;
            c.riesz_Lp = Verdict3::UNDECIDED;
            c.note = "window evidence inconclusive";
        }
    }

    if (evaluable_multiplier(sym)) {
        c.mikhlin = mikhlin_check(sym, params.K);
        if (c.mikhlin.passed) {
            c.bounded_multiplier = Verdict3::YES;
        } else {
            double s1 = 0.0;
            double s2 = 0.0;
            for (int k = -2 * params.K; k <= 2 * params.K; ++k) {
                const double v = std::abs(sym.eval(0.0, k));
                if (std::abs(k) <= params.K) s1 = std::max(s1, v);
                s2 = std::max(s2, v);
            }
            c.bounded_multiplier = s2 > 1.5 * s1 ? Verdict3::NO : Verdict3::UNDECIDED;
            if (c.bounded_multiplier == Verdict3::NO)
                c.note += "; the multiplier grows across the doubled window";
        }
    } else {
        c.bounded_multiplier = Verdict3::UNDECIDED;
    }
    return c;
}

} // namespace toruspdo
