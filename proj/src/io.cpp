#include "toruspdo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toruspdo/errors.hpp"
#include "toruspdo/fourier.hpp"

namespace toruspdo {

namespace {

using nlohmann::json;

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string num_or_null(double v) {
    return std::isfinite(v) ? fmt_g17(v) : std::string("null");
}

std::string pair_json(cplx z) {
    return "[" + fmt_g17(z.real()) + "," + fmt_g17(z.imag()) + "]";
}

const char* verdict3_str(Verdict3 v) {
    switch (v) {
    case Verdict3::YES: return "YES";
    case Verdict3::NO: return "NO";
    default: return "UNDECIDED";
    }
}

const char* trend_str(DecayTrend t) {
    switch (t) {
    case DecayTrend::DECREASING: return "DECREASING";
    case DecayTrend::FLAT: return "FLAT";
    case DecayTrend::INCREASING: return "INCREASING";
    default: return "OSCILLATING";
    }
}

const char* inv_verdict_str(InvertibilityReport::Verdict v) {
    switch (v) {
    case InvertibilityReport::Verdict::INVERTIBLE: return "INVERTIBLE";
    case InvertibilityReport::Verdict::CONDITIONS_FAIL: return "CONDITIONS_FAIL";
    default: return "UNDECIDED";
    }
}

const char* method_str(NormMethod m) {
    switch (m) {
    case NormMethod::CroneDiagonal: return "crone_diagonal";
    case NormMethod::CroneTruncation: return "crone_truncation";
    default: return "schur";
    }
}

json parse_json(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON in " + origin, "io");
    return j;
}

double want_double(const std::string& field, const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ParseError("bad " + field + " value '" + token + "'", "io");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& out, const AssocMatrix& m) {
    out << "{\"n\":" << m.n << ",\"M\":" << m.band << ",\"trusted_radius\":" << m.trusted
        << "}\n";
    for (int j = -m.n; j <= m.n; ++j)
        for (int k = -m.n; k <= m.n; ++k) {
            if (std::abs(j - k) > m.band) continue;
            const cplx z = m.at(j, k);
            out << j << ',' << k << ',' << fmt_g17(z.real()) << ',' << fmt_g17(z.imag())
                << '\n';
        }
}

AssocMatrix read_matrix(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty matrix dump", "io");
    const json h = parse_json(header, "matrix header");
    if (!h.contains("n") || !h.contains("M") || !h.contains("trusted_radius"))
        throw ParseError("matrix header needs n, M, trusted_radius", "io");
    AssocMatrix m;
    m.n = h["n"].get<int>();
    m.band = h["M"].get<int>();
    m.trusted = h["trusted_radius"].get<int>();
    if (m.n < 0 || m.band < 0 || m.band > 2 * m.n)
        throw ParseError("inconsistent matrix header", "io");
    m.entries.assign(static_cast<std::size_t>(m.dim()) * static_cast<std::size_t>(m.dim()),
                     cplx{});
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split_csv(line);
        if (parts.size() != 4) throw ParseError("matrix row needs j,k,re,im", "io");
        const int j = static_cast<int>(want_double("j", parts[0]));
        const int k = static_cast<int>(want_double("k", parts[1]));
        if (std::abs(j) > m.n || std::abs(k) > m.n)
            throw ParseError("matrix row outside the window", "io");
        m.at(j, k) = cplx{want_double("re", parts[2]), want_double("im", parts[3])};
    }
    return m;
}

void write_function_csv(std::ostream& out, const PeriodicFunction& f) {
    out << "{\"Q\":" << f.samples.size() << "}\n";
    out << "q,re,im\n";
    for (std::size_t q = 0; q < f.samples.size(); ++q)
        out << q << ',' << fmt_g17(f.samples[q].real()) << ','
            << fmt_g17(f.samples[q].imag()) << '\n';
}

PeriodicFunction read_function_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty function file", "io");
    const json h = parse_json(header, "function header");
    if (!h.contains("Q")) throw ParseError("function header needs Q", "io");
    const std::size_t Q = h["Q"].get<std::size_t>();
    std::vector<cplx> samples(Q);
    std::size_t seen = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("q,", 0) == 0) continue;
        const auto parts = split_csv(line);
        if (parts.size() != 3) throw ParseError("function row needs q,re,im", "io");
        const std::size_t q = static_cast<std::size_t>(want_double("q", parts[0]));
        if (q >= Q) throw ParseError("sample index out of range", "io");
        samples[q] = cplx{want_double("re", parts[1]), want_double("im", parts[2])};
        ++seen;
    }
    if (seen != Q) throw ParseError("function file is missing samples", "io");
    return PeriodicFunction::from_samples(std::move(samples));
}

std::string coeffs_to_json(const CoeffVector& c) {
    std::string out = "{\"n\":" + std::to_string(c.n) + ",\"coeffs\":[";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i) out += ',';
        out += pair_json(c.values[i]);
    }
    out += "]}";
    return out;
}

Symbol parse_symbol_json(const std::string& text, const std::string& origin) {
    const json j = parse_json(text, origin);
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ParseError("symbol file needs a \"kind\" string: " + origin, "io");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "closed_form" || kind == "multiplier") {
        if (!j.contains("expr") || !j["expr"].is_string())
            throw ParseError("symbol file needs an \"expr\" string: " + origin, "io");
        const std::string expr = j["expr"].get<std::string>();
        return kind == "multiplier" ? Symbol::multiplier(expr) : Symbol::closed_form(expr);
    }
    if (kind == "sampled") {
        if (!j.contains("Q") || !j.contains("K") || !j.contains("values"))
            throw ParseError("sampled symbol needs Q, K, values: " + origin, "io");
        const std::size_t Q = j["Q"].get<std::size_t>();
        const int K = j["K"].get<int>();
        if (!is_pow2(Q) || K < 0)
            throw ParseError("sampled symbol needs power-of-two Q and K >= 0: " + origin,
                             "io");
        const json& vals = j["values"];
        if (!vals.is_array() || vals.size() != static_cast<std::size_t>(2 * K + 1))
            throw ParseError("values must hold one column per k in [-K, K]: " + origin,
                             "io");
        ToroidalGrid grid;
        grid.Q = Q;
        grid.K = K;
        grid.values.resize(static_cast<std::size_t>(2 * K + 1) * Q);
        for (int k = -K; k <= K; ++k) {
            const json& col = vals[static_cast<std::size_t>(k + K)];
            if (!col.is_array() || col.size() != Q)
                throw ParseError("each column needs Q [re,im] pairs: " + origin, "io");
            for (std::size_t q = 0; q < Q; ++q) {
                const json& p = col[q];
                if (!p.is_array() || p.size() != 2)
                    throw ParseError("samples must be [re,im] pairs: " + origin, "io");
                grid.at(q, k) = cplx{p[0].get<double>(), p[1].get<double>()};
            }
        }
        std::string desc = "sampled";
        if (j.contains("description") && j["description"].is_string())
            desc = j["description"].get<std::string>();
        return Symbol::sampled(std::move(grid), desc);
    }
    throw ParseError("unknown symbol kind '" + kind + "': " + origin, "io");
}

Symbol load_symbol_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open symbol file " + path, "io");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_symbol_json(buf.str(), path);
}

std::string grid_to_symbol_json(const ToroidalGrid& grid, const std::string& description) {
    std::string out = "{\"kind\":\"sampled\",\"description\":\"" + esc(description) +
                      "\",\"Q\":" + std::to_string(grid.Q) +
                      ",\"K\":" + std::to_string(grid.K) + ",\"values\":[";
    for (int k = -grid.K; k <= grid.K; ++k) {
        if (k > -grid.K) out += ',';
        out += '[';
        for (std::size_t q = 0; q < grid.Q; ++q) {
            if (q) out += ',';
            out += pair_json(grid.at(q, k));
        }
        out += ']';
    }
    out += "]}";
    return out;
}

std::string grid_to_csv(const ToroidalGrid& grid) {
    std::string out =
        "{\"Q\":" + std::to_string(grid.Q) + ",\"K\":" + std::to_string(grid.K) + "}\n";
    for (int k = -grid.K; k <= grid.K; ++k)
        for (std::size_t q = 0; q < grid.Q; ++q) {
            const cplx z = grid.at(q, k);
            out += std::to_string(q) + "," + std::to_string(k) + "," + fmt_g17(z.real()) +
                   "," + fmt_g17(z.imag()) + "\n";
        }
    return out;
}

std::string expansion_to_json(const ExpansionResult& r, const std::string& description) {
    std::string body = grid_to_symbol_json(r.symbol_grid, description);
    body.pop_back(); // strip the closing brace, append the meta block
    body += ",\"meta\":{\"order_N\":" + std::to_string(r.order_N) +
            ",\"remainder_proxy\":" + fmt_g17(r.remainder_proxy) +
            ",\"uniform_bound\":" + fmt_g17(r.uniform_bound) + "}}";
    return body;
}

std::string discs_to_json(const std::vector<GershgorinDisc>& discs) {
    std::string out = "[";
    for (std::size_t i = 0; i < discs.size(); ++i) {
        const auto& d = discs[i];
        if (i) out += ',';
        out += "{\"k\":" + std::to_string(d.k) + ",\"center\":" + pair_json(d.center) +
               ",\"r_row\":" + fmt_g17(d.radius_row) +
               ",\"r_col\":" + fmt_g17(d.radius_col) + "}";
    }
    out += "]";
    return out;
}

std::string discs_to_csv(const std::vector<GershgorinDisc>& discs) {
    std::string out = "k,center_re,center_im,r_row,r_col\n";
    for (const auto& d : discs)
        out += std::to_string(d.k) + "," + fmt_g17(d.center.real()) + "," +
               fmt_g17(d.center.imag()) + "," + fmt_g17(d.radius_row) + "," +
               fmt_g17(d.radius_col) + "\n";
    return out;
}

std::string eigs_to_json(const std::vector<cplx>& eigs) {
    std::string out = "[";
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (i) out += ',';
        out += pair_json(eigs[i]);
    }
    out += "]";
    return out;
}

std::string eigs_to_csv(const std::vector<cplx>& eigs) {
    std::string out = "re,im\n";
    for (const cplx& e : eigs)
        out += fmt_g17(e.real()) + "," + fmt_g17(e.imag()) + "\n";
    return out;
}

std::string norm_to_json(const NormEstimate& e) {
    std::string out = "{\"method\":\"";
    out += method_str(e.method);
    out += "\",\"scale\":\"";
    out += e.method == NormMethod::Schur ? "norm" : "norm_squared";
    out += "\",\"lower\":" + fmt_g17(e.lower) + ",\"upper\":" + num_or_null(e.upper) +
           ",\"converged\":" + (e.converged ? "true" : "false") + ",\"per_n\":[";
    for (std::size_t i = 0; i < e.per_n.size(); ++i) {
        if (i) out += ',';
        out += "[" + std::to_string(e.per_n[i].first) + "," + fmt_g17(e.per_n[i].second) +
               "]";
    }
    out += "]}";
    return out;
}

namespace {

std::string mikhlin_json(const MikhlinResult& m) {
    return std::string("{\"passed\":") + (m.passed ? "true" : "false") +
           ",\"C\":" + fmt_g17(m.C) + ",\"C_doubled\":" + fmt_g17(m.C_doubled) + "}";
}

} // namespace

std::string classification_to_json(const Classification& c) {
    std::string out = "{\"d_sigma_tail\":" + fmt_g17(c.evidence.tail_estimate) +
                      ",\"trend\":\"" + trend_str(c.evidence.trend) +
                      "\",\"compact_L2\":\"" + verdict3_str(c.compact_L2) +
                      "\",\"riesz_Lp\":\"" + verdict3_str(c.riesz_Lp) +
                      "\",\"gohberg_lower_bound\":" + fmt_g17(c.gohberg_bound) +
                      ",\"mikhlin\":" + mikhlin_json(c.mikhlin) +
                      ",\"bounded_multiplier\":\"" + verdict3_str(c.bounded_multiplier) +
                      "\",\"note\":\"" + esc(c.note) + "\"}";
    return out;
}

std::string classification_to_csv(const Classification& c) {
    std::string out = "key,value\n";
    out += "d_sigma_tail," + fmt_g17(c.evidence.tail_estimate) + "\n";
    out += std::string("trend,") + trend_str(c.evidence.trend) + "\n";
    out += std::string("compact_L2,") + verdict3_str(c.compact_L2) + "\n";
    out += std::string("riesz_Lp,") + verdict3_str(c.riesz_Lp) + "\n";
    out += "gohberg_lower_bound," + fmt_g17(c.gohberg_bound) + "\n";
    out += std::string("mikhlin_passed,") + (c.mikhlin.passed ? "true" : "false") + "\n";
    out += "mikhlin_C," + fmt_g17(c.mikhlin.C) + "\n";
    out += std::string("bounded_multiplier,") + verdict3_str(c.bounded_multiplier) + "\n";
    return out;
}

std::string report_to_json(const SpectralReport& r) {
    std::string out = "{\"discs\":" + discs_to_json(r.discs) +
                      ",\"eigenvalues\":" + eigs_to_json(r.eigenvalues) + ",\"norm\":{";
    out += "\"diagonal\":" + (r.norm_diagonal ? norm_to_json(*r.norm_diagonal) : "null");
    out += ",\"truncation\":" +
           (r.norm_truncation ? norm_to_json(*r.norm_truncation) : "null");
    out += ",\"schur\":" + (r.schur ? fmt_g17(*r.schur) : "null");
    out += "},\"verdicts\":{";
    out += "\"invertibility\":";
    if (r.invertibility) {
        out += std::string("\"") + inv_verdict_str(r.invertibility->verdict) + "\"";
    } else {
        out += "null";
    }
    out += ",\"disc_containment\":\"";
    out += r.disc_containment_ok ? "PASS" : "FAIL";
    out += "\",\"norm_sandwich\":\"";
    out += r.norm_sandwich_ok ? "PASS" : "FAIL";
    out += "\"}";
    if (r.containment) {
        out += ",\"containment\":{\"components\":[";
        for (std::size_t i = 0; i < r.containment->components.size(); ++i) {
            const auto& comp = r.containment->components[i];
            if (i) out += ',';
            out += "{\"ks\":[";
            for (std::size_t a = 0; a < comp.ks.size(); ++a) {
                if (a) out += ',';
                out += std::to_string(comp.ks[a]);
            }
            out += "],\"eigen_inside\":" + std::to_string(comp.eigen_inside) +
                   ",\"multiplicity_ok\":" + (comp.multiplicity_ok ? "true" : "false") +
                   "}";
        }
        out += "],\"eigen_outside\":" + std::to_string(r.containment->eigen_outside) +
               ",\"ok\":" + (r.containment->ok ? "true" : "false") + "}";
    } else {
        out += ",\"containment\":null";
    }
    out += ",\"classification\":" +
           (r.classification ? classification_to_json(*r.classification) : "null");
    out += "}";
    return out;
}

std::string report_to_csv(const SpectralReport& r) {
    std::string out = "kind,a,b,c,d,e\n";
    for (const auto& d : r.discs)
        out += "disc," + std::to_string(d.k) + "," + fmt_g17(d.center.real()) + "," +
               fmt_g17(d.center.imag()) + "," + fmt_g17(d.radius_row) + "," +
               fmt_g17(d.radius_col) + "\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        out += "eig," + std::to_string(i) + "," + fmt_g17(r.eigenvalues[i].real()) + "," +
               fmt_g17(r.eigenvalues[i].imag()) + ",,\n";
    if (r.norm_diagonal)
        out += std::string("norm,crone_diagonal,") + fmt_g17(r.norm_diagonal->lower) + "," +
               num_or_null(r.norm_diagonal->upper) + "," +
               (r.norm_diagonal->converged ? "true" : "false") + ",\n";
    if (r.norm_truncation)
        out += std::string("norm,crone_truncation,") + fmt_g17(r.norm_truncation->lower) +
               "," + num_or_null(r.norm_truncation->upper) + "," +
               (r.norm_truncation->converged ? "true" : "false") + ",\n";
    if (r.schur) out += "norm,schur," + fmt_g17(*r.schur) + ",,,\n";
    if (r.invertibility)
        out += std::string("verdict,invertibility,") +
               inv_verdict_str(r.invertibility->verdict) + ",,,\n";
    out += std::string("verdict,disc_containment,") +
           (r.disc_containment_ok ? "PASS" : "FAIL") + ",,,\n";
    out += std::string("verdict,norm_sandwich,") + (r.norm_sandwich_ok ? "PASS" : "FAIL") +
           ",,,\n";
    return out;
}

} // namespace toruspdo
