#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffrace/twist.hpp"

using namespace ffrace;

static CurveModel legendre_short(const Fq& F) {
    std::array<PolyFq, 5> a{PolyFq(F), PolyFq::from_ints(F, {-1, -1}), PolyFq(F),
                            PolyFq::from_ints(F, {0, 1}), PolyFq(F)};
    return to_short_form(CurveModel(F, a));
}

TEST_CASE("twisting space enumeration for the Legendre curve") {
    Fq F5(5, 1);
    CurveModel E = legendre_short(F5);
    FieldCache cache(F5);
    PolyFq m = multiplicative_locus(E, cache);

    // d = 1: linear f with f(0) != 0, f(1) != 0: three of them
    auto d1 = twisting_space(E, m, 1);
    CHECK(d1.size() == 3);

    // d = 2: 16 coprime monic quadratics minus 3 squares (t-a)^2, a not in {0,1}
    auto d2 = twisting_space(E, m, 2);
    CHECK(d2.size() == 13);
    // brute-force filter oracle
    long long expected = 0;
    for_each_monic(F5, 2, [&](const PolyFq& f) {
        if (f.eval(F5.scalar(0)) == 0 || f.eval(F5.scalar(1)) == 0) return;
        if (!is_squarefree(f)) return;
        ++expected;
    });
    CHECK((long long)d2.size() == expected);
    for (const PolyFq& f : d2) {
        CHECK(is_squarefree(f));
        CHECK(PolyFq::gcd(f, m).degree() == 0);
    }

    // f = t(t-1) is excluded by the gcd condition
    for (const PolyFq& f : d2) CHECK(f != m);

    // seeded sampling returns a deterministic subset
    auto s1 = twisting_space(E, m, 3, 10, 5);
    auto s2 = twisting_space(E, m, 3, 10, 5);
    REQUIRE(s1.size() == 10);
    for (size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
}

TEST_CASE("survey at d = 1 and d = 2: conductor constancy and spectra") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 15;
    Fq F5(5, 1);
    CurveModel E = legendre_short(F5);
    for (int d : {1, 2}) {
        TwistSurvey sv = twist_survey(E, d, -1, 123, wb, 20000, 1, 1);
        CHECK(sv.failures == 0);
        CHECK(sv.conductor_constant);
        CHECK(sv.common_n == (d % 2 ? 2 * d - 1 : 2 * d));
        for (const TwistSample& s : sv.rows) {
            REQUIRE(s.error.empty());
            CHECK((s.epsilon == 1 || s.epsilon == -1));
            CHECK(s.spec.purity_residual <= 1e-9 * 5);
            CHECK(s.spec.total_multiplicity() == s.spec.N);
        }
        // density estimates straddle 1/2 in the direction set by the rank
        for (const TwistSample& s : sv.rows) {
            if (s.spec.rank == 0) CHECK(s.delta.delta < 0.5 + 3 * s.delta.std_error + 1e-12);
            if (s.spec.rank >= 1) CHECK(s.delta.delta > 0.5 - 3 * s.delta.std_error - 1e-12);
        }
    }
}

TEST_CASE("twisted trace character relation via the survey") {
    WorkBounds wb;
    Fq F5(5, 1);
    CurveModel E = legendre_short(F5);
    FieldCache cache(F5, wb);
    PolyFq m = multiplicative_locus(E, cache);
    PolyFq f = PolyFq::from_ints(F5, {-2, 1});
    CurveModel Ef = quadratic_twist(E, f, m);
    // N_f for d = 1: 2*1 - 1 = 1, so L = 1 - a T with |a| = 5
    CurveAnalyzer an(Ef, wb);
    ConductorInfo ci = conductor_degree(Ef, an.fields());
    CHECK(ci.big_n == 1);
    auto lr = lpolynomial(an, 1, 2);
    Spectrum sp = spectrum(lr.L);
    CHECK(sp.rank + sp.m_minus_q == 1);
}
