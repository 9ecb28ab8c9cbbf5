#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffrace/race.hpp"
#include "ffrace/ulmer.hpp"

using namespace ffrace;

static CurveModel ulmer_curve(const Fq& F, int d) {
    std::array<PolyFq, 5> a{PolyFq::constant(F, F.one()), PolyFq(F), PolyFq(F), PolyFq(F),
                            PolyFq::monomial(F, d, F.scalar(-1))};
    return CurveModel(F, a);
}

TEST_CASE("c_pm exact values") {
    CHECK(c_pm(2, 3) == QSqrt(3, BigRat(3, 2)));
    CHECK(c_pm(3, 3) == QSqrt(3, BigRat(0), BigRat(1, 2)));
    CHECK(c_pm(3, 4) == QSqrt(4, BigRat(2, 3)));  // sqrt(4) collapses
}

TEST_CASE("T_direct on E_5/F_3") {
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E);
    // good degree-1 places t-1 (a=1), t-2 (a=-2): -(1/sqrt3)((1-2)/sqrt3) = 1/3
    CHECK(T_direct_exact(an, 1) == QSqrt(3, BigRat(1, 3)));
    CHECK(T_direct(an, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("direct series tracks the periodic part at the finite-X rate") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 16;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    CHECK(ulmer_t_per(st, 8) == QSqrt(3, BigRat(3)));
    // the finite-X defect carries harmonic corrections of size O(1/X)
    // (measured: 0.28 at X=2 down to 0.66 at X=8 against 6/X = 0.75)
    for (long long X = 2; X <= 9; ++X) {
        double diff = std::abs(T_direct(an, X) - ulmer_t_per(st, X).to_double());
        CHECK(diff <= 6.0 / double(X));
    }
}

TEST_CASE("T_explicit matches the exact periodic part for E_5/F_3") {
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    Spectrum sp = closed_form_spectrum(st);
    for (long long X = 1; X <= 12; ++X) {
        double exact = ulmer_t_per(st, X).to_double();
        CHECK(T_explicit(sp, X) == doctest::Approx(exact).epsilon(1e-9));
    }
    // exact values on the period: 3, sqrt(3), 0, 0
    CHECK(ulmer_t_per(st, 4) == QSqrt(3, BigRat(3)));
    CHECK(ulmer_t_per(st, 5) == QSqrt(3, BigRat(0), BigRat(1)));
    CHECK(ulmer_t_per(st, 6).is_zero());
    CHECK(ulmer_t_per(st, 7).is_zero());
}

TEST_CASE("rank-0 zero-free spectrum gives Q_E only") {
    Spectrum sp;
    sp.q = 4;
    sp.N = 0;
    sp.rank = 0;
    sp.m_minus_q = 0;
    sp.epsilon = 1;
    CHECK(T_explicit(sp, 2) == doctest::Approx(-4.0 / 3));  // -q/(q-1) at even X
    CHECK(T_explicit(sp, 3) == doctest::Approx(-2.0 / 3));  // -sqrt(q)/(q-1) at odd X
}

TEST_CASE("mean and variance of E_5/F_3 with the resonance correction") {
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    MeanVariance mv = mean_variance(sp);
    CHECK(mv.mean == doctest::Approx(1.18301270189).epsilon(1e-9));  // (3+sqrt3)/4
    CHECK(mv.variance_diagonal == doctest::Approx(2.0024).epsilon(1e-3));
    CHECK(mv.variance_corrected == doctest::Approx(1.6005).epsilon(1e-3));
    CHECK(mv.resonance);

    // long-run time averages are the oracle: the corrected value matches,
    // the uncorrected one does not
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    auto T = [&](long long X) { return ulmer_t_per(st, X).to_double(); };
    SeriesStats stats = series_stats(T, 100000);
    CHECK(stats.mean == doctest::Approx(mv.mean).epsilon(1e-6));
    CHECK(stats.variance == doctest::Approx(mv.variance_corrected).epsilon(1e-6));
    CHECK(std::abs(stats.variance - mv.variance_diagonal) / mv.variance_diagonal > 0.10);
}

TEST_CASE("mean and variance without resonance") {
    // rank-0 spectrum with no zeros at all
    Spectrum sp;
    sp.q = 9;
    sp.N = 0;
    sp.rank = 0;
    sp.m_minus_q = 0;
    sp.epsilon = 1;
    MeanVariance mv = mean_variance(sp);
    double sq = 3.0;
    CHECK(mv.mean == doctest::Approx(-sq / (sq - 1) / 2));
    CHECK(mv.variance_diagonal == doctest::Approx(0.25 * 9.0 / 16.0));
    CHECK(mv.variance_corrected == mv.variance_diagonal);
    CHECK_FALSE(mv.resonance);

    // m(pi) = 0 keeps both variances equal even with complex zeros
    Spectrum sp2 = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 4, 7)));
    CHECK(sp2.m_minus_q == 0);
    MeanVariance mv2 = mean_variance(sp2);
    CHECK(mv2.variance_diagonal == mv2.variance_corrected);
}

TEST_CASE("density reports") {
    // exact: E_3/F_5 -> 1, E_5/F_243 -> 1/2
    {
        DensityReport r = ulmer_delta_exact(ulmer_structure(ulmer_validate(5, 1, 3)));
        REQUIRE(r.kind == DensityReport::Kind::Exact);
        CHECK(r.value == BigRat(1));
    }
    {
        DensityReport r = ulmer_delta_exact(ulmer_structure(ulmer_validate(3, 5, 5)));
        REQUIRE(r.kind == DensityReport::Kind::Exact);
        CHECK(r.value == BigRat(1, 2));
        CHECK(r.period == 4);
    }
    // interval with boundary classes: E_5/F_3
    {
        DensityReport r = ulmer_delta_exact(ulmer_structure(ulmer_validate(3, 1, 5)));
        REQUIRE(r.kind == DensityReport::Kind::Interval);
        CHECK(r.lo == BigRat(1, 2));
        CHECK(r.hi == BigRat(1));
        CHECK(r.boundary_classes == std::vector<long long>{2, 3});
    }
}

TEST_CASE("time-average density agrees with the exact one off the boundary") {
    for (auto [p, k, d] : std::vector<std::array<long long, 3>>{{5, 1, 3}, {3, 5, 5}, {3, 4, 7}}) {
        UlmerStructure st = ulmer_structure(ulmer_validate(p, int(k), d));
        DensityReport exact = ulmer_delta_exact(st);
        REQUIRE(exact.kind == DensityReport::Kind::Exact);
        auto T = [&](long long X) { return ulmer_t_per(st, X).to_double(); };
        DensityReport avg = density_time_average(T, 10000);
        CHECK(std::abs(avg.estimate - exact.value.to_double()) <= 0.01);
    }
}

TEST_CASE("time-average mean converges to the formula mean") {
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    Spectrum sp = closed_form_spectrum(st);
    MeanVariance mv = mean_variance(sp);
    auto T = [&](long long X) { return T_explicit(sp, X); };
    SeriesStats stats = series_stats(T, 10000);
    CHECK(std::abs(stats.mean - mv.mean) / std::abs(mv.mean) <= 0.02);
}
