#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toruspdo/assoc_matrix.hpp"
#include "toruspdo/calculus.hpp"
#include "toruspdo/operator_apply.hpp"
#include "toruspdo/riesz.hpp"
#include "toruspdo/spectral.hpp"
#include "toruspdo/symbol.hpp"

namespace toruspdo {

// 17 significant digits: doubles survive a text round trip bit-exactly.
std::string fmt_g17(double v);

// Matrix dump: one JSON header line {"n":..,"M":..,"trusted_radius":..},
// then one "j,k,re,im" row per stored entry inside the band.
void write_matrix(std::ostream& out, const AssocMatrix& m);
AssocMatrix read_matrix(std::istream& in);

// Function samples: one JSON header line {"Q":..}, then "q,re,im" rows.
void write_function_csv(std::ostream& out, const PeriodicFunction& f);
PeriodicFunction read_function_csv(std::istream& in);

std::string coeffs_to_json(const CoeffVector& c);

// Symbol files: {"kind":"closed_form"|"multiplier"|"sampled", "expr":...,
// "Q":..., "K":..., "values":[[ [re,im], ... ] per k]}.
Symbol parse_symbol_json(const std::string& text, const std::string& origin);
Symbol load_symbol_file(const std::string& path);

std::string grid_to_symbol_json(const ToroidalGrid& grid, const std::string& description);
std::string grid_to_csv(const ToroidalGrid& grid);
std::string expansion_to_json(const ExpansionResult& r, const std::string& description);

std::string discs_to_json(const std::vector<GershgorinDisc>& discs);
std::string discs_to_csv(const std::vector<GershgorinDisc>& discs);
std::string eigs_to_json(const std::vector<cplx>& eigs);
std::string eigs_to_csv(const std::vector<cplx>& eigs);
std::string norm_to_json(const NormEstimate& e);
std::string classification_to_json(const Classification& c);
std::string classification_to_csv(const Classification& c);

struct SpectralReport {
    std::vector<GershgorinDisc> discs;
    std::vector<cplx> eigenvalues;
    std::optional<NormEstimate> norm_diagonal;
    std::optional<NormEstimate> norm_truncation;
    std::optional<double> schur;
    std::optional<InvertibilityReport> invertibility;
    std::optional<DiscUnionReport> containment;
    std::optional<Classification> classification;
    bool disc_containment_ok = true;
    bool norm_sandwich_ok = true;
};

std::string report_to_json(const SpectralReport& r);
std::string report_to_csv(const SpectralReport& r);

} // namespace toruspdo
