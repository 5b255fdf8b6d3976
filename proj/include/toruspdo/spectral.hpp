#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "toruspdo/assoc_matrix.hpp"
#include "toruspdo/riesz.hpp"

namespace toruspdo {

struct GershgorinDisc {
    int k = 0;
    cplx center;              // coeffs(0,k), the diagonal entry
    double radius_row = 0.0;  // sum over the row at index k of off-diagonal moduli
    double radius_col = 0.0;  // sum over the column at index k
};

enum class NormMethod { CroneDiagonal, CroneTruncation, Schur };

// For the Crone methods all values live on the ||M||^2 scale (the quantity the
// sup formulas converge to); the Schur method reports ||M|| itself.
struct NormEstimate {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> per_n;
    NormMethod method = NormMethod::CroneDiagonal;
    bool converged = false; // successive per_n values differ < 1e-3 relative
};

struct InvertibilityReport {
    enum class Verdict { INVERTIBLE, CONDITIONS_FAIL, UNDECIDED };
    Verdict verdict = Verdict::UNDECIDED;

    bool cond_diag_nonzero = false;   // inf_k |coeffs(0,k)| > 0 on the window
    bool cond_col_ratio = false;      // sup_k radius_col / |center| < 1
    bool cond_row_ratio = false;      // sup_k radius_row / |center| < 1
    bool primed_col = false;          // l1-norm factor-2 form, column sums
    bool primed_row = false;          // factor-2 form via the adjoint symbol (row sums)
    bool primed_agree = true;

    double inf_diag = 0.0;
    double sup_ratio_col = 0.0;
    double sup_ratio_row = 0.0;
    bool compact_inverse = false;     // diagonal moduli grow without bound across rings
    bool diag_tail_decreasing = false;
    std::string note;
};

struct ResolventReport {
    cplx lambda;
    enum class Verdict { IN_RESOLVENT, UNDECIDED };
    Verdict verdict = Verdict::UNDECIDED;
    double margin = 0.0; // (1 - sup ratio) * inf |center - lambda| when certified
    InvertibilityReport detail;
};

struct DiscUnionReport {
    struct Component {
        std::vector<int> ks;          // disc indices, ascending
        std::size_t eigen_inside = 0; // eigenvalues inside this component's union
        bool multiplicity_ok = false; // eigen_inside == ks.size()
    };
    std::vector<Component> components;
    std::size_t eigen_outside = 0; // eigenvalues contained in no disc
    bool ok = false;               // all multiplicities match and nothing escapes
};

struct MultiplierSpectrum {
    std::vector<cplx> values;       // sigma(k) for |k| <= K
    std::vector<cplx> accumulation; // extrapolated limit points as k -> +-infinity
    bool closure_estimated = false; // accumulation adds points beyond the samples
    MikhlinResult mikhlin;
};

std::vector<GershgorinDisc> gershgorin_discs(const FourierTable& table, int n);

// Sufficient invertibility conditions: nonvanishing diagonal plus strict
// off-diagonal dominance in both row and column ratios, with the factor-2
// l1 variants evaluated independently. The grid supplies the full column
// spectrum for the off-window decay check (InsufficientDecay).
InvertibilityReport invertibility_test(const FourierTable& table, const ToroidalGrid& grid,
                                       int n);

ResolventReport resolvent_test(const FourierTable& table, cplx lambda, int n);

// Clusters discs by overlap (closed discs of radius_row) and counts contained
// eigenvalues per connected component.
DiscUnionReport disc_union_report(const std::vector<GershgorinDisc>& discs,
                                  const std::vector<cplx>& eigenvalues,
                                  double slack = 1e-8);

// Powers of M*M: per_n entry (p, sup_k |((M*M)^p)_{kk}|^{1/p}) over the
// surviving trusted region; the sweep stops early once another product would
// exhaust it. Entries are pre-scaled by a power of two to avoid overflow.
NormEstimate crone_norm_diagonal(const AssocMatrix& matrix, int max_power);

// Largest eigenvalue of each centered principal compression of the Hermitian
// inner-product block, for window radii 0..n.
NormEstimate crone_norm_truncation(const DenseBlock& gram);

// sqrt(max row abs sum * max col abs sum) over the trusted region.
double schur_bound(const AssocMatrix& matrix);

// Dense eigenvalues of the truncation, ordered by (re, im). Diagonal matrices
// short-circuit to their exact diagonal.
std::vector<cplx> eigensolve_truncated(const AssocMatrix& matrix,
                                       int dense_limit = 2049);

// Sampled range plus extrapolated accumulation points; throws MikhlinFailed
// when the difference condition is rejected.
MultiplierSpectrum multiplier_spectrum(const Symbol& sym, int K);

} // namespace toruspdo
