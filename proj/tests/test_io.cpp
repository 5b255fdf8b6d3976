#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "toruspdo/errors.hpp"
#include "toruspdo/io.hpp"

using namespace toruspdo;

namespace {

AssocMatrix random_matrix(int n, int band, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    AssocMatrix m;
    m.n = n;
    m.band = band;
    m.trusted = n - 1;
    m.entries.assign(static_cast<std::size_t>(m.dim()) * m.dim(), cplx{});
    for (int j = -n; j <= n; ++j)
        for (int k = std::max(-n, j - band); k <= std::min(n, j + band); ++k)
            m.at(j, k) = cplx{u(rng), u(rng)};
    return m;
}

} // namespace

TEST_CASE("seventeen digits round-trip doubles exactly") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double v = std::ldexp(u(rng), static_cast<int>(rng() % 80) - 40);
        const double back = std::strtod(fmt_g17(v).c_str(), nullptr);
        CHECK(back == v);
    }
    CHECK(std::strtod(fmt_g17(-0.0).c_str(), nullptr) == 0.0);
    CHECK(std::signbit(std::strtod(fmt_g17(-0.0).c_str(), nullptr)));
    const double denormal = 5e-324;
    CHECK(std::strtod(fmt_g17(denormal).c_str(), nullptr) == denormal);
    CHECK(fmt_g17(1.0) == "1");
}

TEST_CASE("matrix dumps round-trip bit for bit") {
    const AssocMatrix m = random_matrix(6, 2, 31);
    std::ostringstream os;
    write_matrix(os, m);
    const std::string text = os.str();
    CHECK(text.find("\"n\"") != std::string::npos);
    CHECK(text.find("\"M\"") != std::string::npos);
    CHECK(text.find("\"trusted_radius\"") != std::string::npos);

    std::istringstream is(text);
    const AssocMatrix back = read_matrix(is);
    CHECK(back.n == m.n);
    CHECK(back.band == m.band);
    CHECK(back.trusted == m.trusted);
    REQUIRE(back.entries.size() == m.entries.size());
    for (std::size_t i = 0; i < m.entries.size(); ++i) CHECK(back.entries[i] == m.entries[i]);

    // a second dump of the parsed matrix is byte-identical
    std::ostringstream os2;
    write_matrix(os2, back);
    CHECK(os2.str() == text);
}

TEST_CASE("matrix reader rejects malformed headers") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_matrix(empty), ParseError);
    std::istringstream junk("{\"n\":2}\n");
    CHECK_THROWS_AS(read_matrix(junk), ParseError);
    std::istringstream bad_band("{\"n\":2,\"M\":9,\"trusted_radius\":2}\n");
    CHECK_THROWS_AS(read_matrix(bad_band), ParseError);
    std::istringstream bad_row("{\"n\":1,\"M\":0,\"trusted_radius\":1}\nj,k,re,im\n0,0,x,0\n");
    CHECK_THROWS_AS(read_matrix(bad_row), ParseError);
}

TEST_CASE("function samples round-trip bit for bit") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    PeriodicFunction f;
    f.Q = 16;
    f.samples.resize(16);
    for (cplx& z : f.samples) z = cplx{u(rng), u(rng)};

    std::ostringstream os;
    write_function_csv(os, f);
    std::istringstream is(os.str());
    const PeriodicFunction back = read_function_csv(is);
    CHECK(back.Q == f.Q);
    REQUIRE(back.samples.size() == f.samples.size());
    for (std::size_t i = 0; i < f.samples.size(); ++i) CHECK(back.samples[i] == f.samples[i]);

    std::istringstream truncated("{\"Q\":4}\nq,re,im\n0,1,0\n");
    CHECK_THROWS_AS(read_function_csv(truncated), ParseError);
}

TEST_CASE("symbol json round trips sampled grids bitwise") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    ToroidalGrid g;
    g.Q = 8;
    g.K = 3;
    g.values.resize(7 * 8);
    for (cplx& z : g.values) z = cplx{u(rng), u(rng)};

    const std::string text = grid_to_symbol_json(g, "random grid");
    const Symbol sym = parse_symbol_json(text, "test");
    CHECK(sym.kind() == Symbol::Kind::Sampled);
    const ToroidalGrid& back = sym.stored_samples();
    CHECK(back.Q == g.Q);
    CHECK(back.K == g.K);
    REQUIRE(back.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(back.values[i] == g.values[i]);
}

TEST_CASE("symbol json dispatches on kind") {
    const Symbol cf = parse_symbol_json(R"({"kind":"closed_form","expr":"exp(i*x)+k"})", "t");
    CHECK(cf.kind() == Symbol::Kind::ClosedForm);
    CHECK(cf.eval(0.0, 2) == cplx{3.0, 0.0});

    const Symbol mu = parse_symbol_json(R"({"kind":"multiplier","expr":"<k>"})", "t");
    CHECK(mu.kind() == Symbol::Kind::Multiplier);

    CHECK_THROWS_AS(parse_symbol_json(R"({"kind":"multiplier","expr":"x+k"})", "t"), ParseError);
    CHECK_THROWS_AS(parse_symbol_json("{", "t"), ParseError);
    CHECK_THROWS_AS(parse_symbol_json(R"({"kind":"what"})", "t"), ParseError);
    CHECK_THROWS_AS(parse_symbol_json(R"({"expr":"k"})", "t"), ParseError);
    // sampled grids must have a power-of-two Q and complete columns
    CHECK_THROWS_AS(
        parse_symbol_json(R"({"kind":"sampled","Q":3,"K":0,"values":[[[1,0],[1,0],[1,0]]]})",
                          "t"),
        ParseError);
    CHECK_THROWS_AS(load_symbol_file("/nonexistent/path/sym.json"), ConfigError);
}

TEST_CASE("disc and eigenvalue serializers carry full precision") {
    std::vector<GershgorinDisc> discs(1);
    discs[0].k = -2;
    discs[0].center = cplx{0.1, -0.25};
    discs[0].radius_row = 0.5;
    discs[0].radius_col = 1.0 / 3.0;
    const std::string dj = discs_to_json(discs);
    CHECK(dj.find(fmt_g17(1.0 / 3.0)) != std::string::npos);
    CHECK(dj.find("\"k\":-2") != std::string::npos);
    const std::string dc = discs_to_csv(discs);
    CHECK(dc.find("k,center_re,center_im,r_row,r_col") != std::string::npos);

    const std::string ej = eigs_to_json({cplx{1.0, -2.0}});
    CHECK(ej.find("[1,-2]") != std::string::npos);
}

TEST_CASE("infinite upper bounds serialize as null") {
    NormEstimate e;
    e.lower = 5.0;
    e.upper = std::numeric_limits<double>::infinity();
    e.method = NormMethod::CroneTruncation;
    e.per_n = {{0, 5.0}, {1, 5.5}};
    const std::string j = norm_to_json(e);
    CHECK(j.find("\"upper\":null") != std::string::npos);
    CHECK(j.find("\"method\":\"crone_truncation\"") != std::string::npos);
    CHECK(j.find("\"converged\":false") != std::string::npos);
}

TEST_CASE("report json names its cross-checks") {
    SpectralReport r;
    r.discs.resize(1);
    r.discs[0].center = cplx{1.0, 0.0};
    r.eigenvalues = {cplx{1.0, 0.0}};
    NormEstimate d;
    d.lower = 1.0;
    d.upper = 1.0;
    d.method = NormMethod::CroneDiagonal;
    r.norm_diagonal = d;
    r.schur = 1.0;
    r.disc_containment_ok = true;
    r.norm_sandwich_ok = false;
    const std::string j = report_to_json(r);
    CHECK(j.find("\"discs\"") != std::string::npos);
    CHECK(j.find("\"eigenvalues\"") != std::string::npos);
    CHECK(j.find("\"norm\"") != std::string::npos);
    CHECK(j.find("\"verdicts\"") != std::string::npos);
    CHECK(j.find("\"disc_containment\":\"PASS\"") != std::string::npos);
    CHECK(j.find("\"norm_sandwich\":\"FAIL\"") != std::string::npos);
    CHECK(j.find("\"classification\":null") != std::string::npos);

    const std::string c = report_to_csv(r);
    CHECK(c.find("kind,") != std::string::npos);
}

TEST_CASE("expansion json keeps the grid payload loadable and appends metadata") {
    ToroidalGrid g;
    g.Q = 4;
    g.K = 1;
    g.values.assign(12, cplx{0.5, -0.5});
    ExpansionResult r;
    r.symbol_grid = g;
    r.order_N = 3;
    r.remainder_proxy = 0.25;
    const std::string j = expansion_to_json(r, "test expansion");
    CHECK(j.find("\"meta\"") != std::string::npos);
    CHECK(j.find("\"order_N\":3") != std::string::npos);
    const Symbol sym = parse_symbol_json(j, "t");
    CHECK(sym.kind() == Symbol::Kind::Sampled);
    CHECK(sym.stored_samples().values[0] == cplx{0.5, -0.5});
}

TEST_CASE("classification json spells out the verdicts") {
    Classification c;
    c.compact_L2 = Verdict3::YES;
    c.riesz_Lp = Verdict3::UNDECIDED;
    c.bounded_multiplier = Verdict3::NO;
    c.gohberg_bound = 0.125;
    c.note = "test";
    const std::string j = classification_to_json(c);
    CHECK(j.find("\"compact_L2\":\"YES\"") != std::string::npos);
    CHECK(j.find("\"riesz_Lp\":\"UNDECIDED\"") != std::string::npos);
    CHECK(j.find("\"bounded_multiplier\":\"NO\"") != std::string::npos);
    CHECK(j.find("\"gohberg_lower_bound\":0.125") != std::string::npos);
    const std::string v = classification_to_csv(c);
    CHECK(v.find("compact_L2,YES") != std::string::npos);
}
