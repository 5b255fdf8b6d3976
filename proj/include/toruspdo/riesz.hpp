#pragma once

#include <string>
#include <vector>

#include "toruspdo/symbol.hpp"

namespace toruspdo {

enum class DecayTrend { DECREASING, FLAT, INCREASING, OSCILLATING };

// Profile of k -> sup_x |sigma(x,k)|: the quantity whose limit decides
// compactness on L^2 and the Riesz property on L^p.
struct DecayProfile {
    int K = 0;
    std::vector<double> per_k;  // indexed k+K
    double tail_estimate = 0.0; // max over the outer band |k| in [K-W, K]
    int W = 0;
    DecayTrend trend = DecayTrend::FLAT;
};

struct MikhlinResult {
    bool passed = false;
    double C = 0.0;         // max over t in {0,1}, |k| <= K-1 of |Delta^t sigma(k)| <k>^t
    double C_doubled = 0.0; // the same constant at window 2K
    int K = 0;
};

enum class Verdict3 { YES, NO, UNDECIDED };

struct Classification {
    Verdict3 compact_L2 = Verdict3::UNDECIDED;
    Verdict3 riesz_Lp = Verdict3::UNDECIDED;
    Verdict3 bounded_multiplier = Verdict3::UNDECIDED;
    double gohberg_bound = 0.0; // tail estimate: lower bound on distance to compacts
    DecayProfile evidence;
    MikhlinResult mikhlin; // populated for multiplier symbols only
    std::string note;
};

struct ClassifyParams {
    std::size_t Q = 1024;
    int K = 64;
    int W = 8;              // outer tail band width
    double tol_decay = 1e-3; // relative to the profile maximum
};

// Trend comes from dyadic band maxima (K/8,K/4], (K/4,K/2], (K/2,K]: two
// window doublings, robust against oscillation inside a band.
DecayProfile decay_profile(const ToroidalGrid& grid, int W);

MikhlinResult mikhlin_check(const Symbol& sym, int K);

// Three-valued verdicts: YES needs the relative tail below tol_decay AND a
// decreasing trend across the doublings; a flat or increasing trend with a
// solid tail gives NO; everything else stays UNDECIDED.
Classification classify(const Symbol& sym, const ClassifyParams& params = {});

} // namespace toruspdo
