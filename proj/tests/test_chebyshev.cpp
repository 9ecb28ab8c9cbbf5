#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ffrace/chebyshev.hpp"
#include "ffrace/limitlaw.hpp"
#include "ffrace/ulmer.hpp"

using namespace ffrace;

static CurveModel ulmer_curve(const Fq& F, int d) {
    std::array<PolyFq, 5> a{PolyFq::constant(F, F.one()), PolyFq(F), PolyFq(F), PolyFq(F),
                            PolyFq::monomial(F, d, F.scalar(-1))};
    return CurveModel(F, a);
}

TEST_CASE("U_m values and limits") {
    CHECK(chebyshev_u(1, M_PI / 3) == doctest::Approx(1.0));       // 2 cos(pi/3)
    CHECK(chebyshev_u(2, M_PI / 2) == doctest::Approx(-1.0));      // sin(3pi/2)/sin(pi/2)
    CHECK(chebyshev_u(4, 0.0) == doctest::Approx(5.0));            // limit m+1
    CHECK(chebyshev_u(3, M_PI) == doctest::Approx(-4.0));          // limit (-1)^m (m+1)
    CHECK(chebyshev_u(4, M_PI) == doctest::Approx(5.0));
    // trivial bound |U_m| <= m+1
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        int m = int(rng() % 9);
        double th = (rng() % 10000) / 10000.0 * M_PI;
        CHECK(std::abs(chebyshev_u(m, th)) <= m + 1 + 1e-9);
    }
}

TEST_CASE("double angle expansion") {
    CHECK(double_angle_expand(0) == std::vector<int>{1});
    CHECK(double_angle_expand(1) == std::vector<int>{-1, 1});      // U_2 - 1
    CHECK(double_angle_expand(2) == std::vector<int>{1, -1, 1});   // U_4 - U_2 + 1
    // pointwise identity at random angles
    std::mt19937_64 rng(17);
    for (int m = 0; m <= 10; ++m) {
        auto coeffs = double_angle_expand(m);
        for (int i = 0; i < 100; ++i) {
            double th = (1 + rng() % 9998) / 10000.0 * M_PI;
            double rhs = coeffs[0];
            for (int j = 1; j <= m; ++j) rhs += coeffs[j] * chebyshev_u(2 * j, th);
            CHECK(chebyshev_u(m, 2 * th) == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("orthonormality of the U basis") {
    for (int i = 0; i <= 12; ++i) {
        for (int j = i; j <= 12; ++j) {
            double ip = fourier_coeff([&](double t) { return chebyshev_u(i, t); }, j);
            CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("fourier coefficients of reference functions") {
    // V = -U_1
    CHECK(fourier_coeff([](double t) { return -chebyshev_u(1, t); }, 1) == doctest::Approx(-1.0));
    CHECK(fourier_coeff([](double t) { return -chebyshev_u(1, t); }, 2) ==
          doctest::Approx(0.0).scale(1.0));
    // V(theta) = U_1(2 theta): <V,U_2> = 1, <V,U_0> = -1
    auto V = [](double t) { return chebyshev_u(1, 2 * t); };
    CHECK(fourier_coeff(V, 2) == doctest::Approx(1.0));
    CHECK(fourier_coeff(V, 0) == doctest::Approx(-1.0));
    // V = U_3 picks out m = 3
    auto W = [](double t) { return chebyshev_u(3, t); };
    CHECK(fourier_coeff(W, 3) == doctest::Approx(1.0));
    CHECK(fourier_coeff(W, 5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("m = 1 symmetric power sums equal the zero power sums") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 16;
    for (auto [p, d] : std::vector<std::pair<long long, int>>{{3, 5}, {5, 3}, {5, 6}}) {
        Fq F(p, 1);
        CurveModel E = ulmer_curve(F, d);
        CurveAnalyzer an(E, wb);
        for (int N = 1; N <= 6; ++N) {
            // S'_{1,N} = -p_N by the sign conventions
            CHECK(sym_power_sums(an, 1, N) == -zero_power_sums(an, N));
        }
    }
}

// independent oracle: the same eigenvalue-product sums through complex
// floating-point powers instead of the integer recurrences
TEST_CASE("m = 2, 3 power sums against complex-arithmetic evaluation") {
    WorkBounds wb;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    // S'_{2,1} = 0 for E_5/F_3
    CHECK(sym_power_sums(an, 2, 1) == BigInt(0));

    for (int m = 2; m <= 3; ++m) {
        for (int N = 1; N <= 4; ++N) {
            BigInt direct(0);
            for (int d = 1; d <= N; ++d) {
                if (N % d) continue;
                const DegreeSurvey& S = an.degree(d);
                long long qv = ipow_ll(3, d);
                long long good = 0;
                for (auto& [a, count] : S.good_hist) {
                    double sq = std::sqrt((double)qv);
                    std::complex<double> alpha =
                        std::polar(sq, std::acos(std::clamp(a / (2 * sq), -1.0, 1.0)));
                    std::complex<double> beta = std::conj(alpha);
                    std::complex<double> s = 0;
                    int kk = N / d;
                    for (int j = 0; j <= m; ++j)
                        s += std::pow(alpha, kk * (m - j)) * std::pow(beta, kk * j);
                    good += count * (long long)std::llround(s.real());
                }
                long long bad = 0;
                for (auto& b : S.bad)
                    bad += (b.a == 0) ? 0 : ((b.a == 1 || ((long long)m * (N / d)) % 2 == 0) ? 1 : -1);
                direct = direct + BigInt(good + bad).mul_small(uint32_t(d));
            }
            CHECK(sym_power_sums(an, m, N) == direct);
        }
    }
}

TEST_CASE("work bound propagates out of the sums") {
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    WorkBounds wb;
    wb.max_residue_field = 9;
    CurveAnalyzer an(E, wb);
    CHECK_THROWS_AS(sym_power_sums(an, 2, 3), WorkBoundError);
}

TEST_CASE("explicit formula bracket for E_5/F_3 at N = 4") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 16;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    // sum_j e^{i 4 theta_j} = 4 from the spectrum {0, pi/2, pi, 3pi/2}
    CHECK(ulmer_phase_sum(st, 4) == 4);
    auto r = explicit_formula_residual_vs(an, 1, 4, double(ulmer_phase_sum(st, 4)));
    CHECK(r.bracket == doctest::Approx(-3.0));
    CHECK(std::abs(r.residual) < 0.5);
}

TEST_CASE("explicit formula residual decays") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 17;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    std::vector<std::pair<int, double>> residuals;
    for (int N = 2; N <= 9; ++N) {
        auto r = explicit_formula_residual_vs(an, 1, N, double(ulmer_phase_sum(st, N)));
        residuals.push_back({N, r.residual});
    }
    double slope = log_decay_slope(residuals);
    CHECK(slope <= -std::log(3.0) / 6 + 0.1);
}

TEST_CASE("trace-sum bound in the style of the solved-trace estimate") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 16;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    // fit C on N <= 6, check N = 7, 8 against 1.2 * C
    double C = 0;
    for (int m = 1; m <= 4; ++m)
        for (int N = 2; N <= 6; ++N)
            C = std::max(C, std::abs(sum_u_m(an, m, N)) * N / (m * std::pow(3.0, N / 2.0)));
    for (int m = 1; m <= 4; ++m)
        for (int N = 7; N <= 8; ++N)
            CHECK(std::abs(sum_u_m(an, m, N)) * N / (m * std::pow(3.0, N / 2.0)) <= 1.2 * C);
}

TEST_CASE("fourier profiles: Q_V reduces to the race constant for V = -U_1") {
    // V = -U_1: coefficients {-1}; with M_1(1) = rank the constant equals
    // sqrt(q)/(sqrt(q)-1) rank - c_pm(X)
    FourierProfile p = make_profile([](double t) { return -chebyshev_u(1, t); }, 3, 2.0);
    CHECK(p.coeffs[0] == doctest::Approx(-1.0));
    CHECK(std::abs(p.coeffs[1]) < 1e-9);
    double sq = std::sqrt(3.0);
    for (long long X : {2, 3}) {
        double qv = q_v_constant(p, {1.0, 0.0, 0.0}, X, 3);
        double expect = sq / (sq - 1) * 1.0 - c_pm(X, 3).to_double();
        CHECK(qv == doctest::Approx(expect).epsilon(1e-9));
    }
    // the profile evaluates through its expansion
    CHECK(p.eval(1.1) == doctest::Approx(-chebyshev_u(1, 1.1)).epsilon(1e-8));
    // <V, U_0> != 0 is rejected
    CHECK_THROWS_AS(make_profile([](double) { return 1.0; }, 2, 1.0), std::invalid_argument);
    // profile-based series matches the callable-based one
    WorkBounds wb;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    CHECK(t_v_direct(an, p, 3) == doctest::Approx(T_direct(an, 3)).epsilon(1e-8));
}

TEST_CASE("central multiplicity estimator approaches the rank for m = 1") {
    WorkBounds wb;
    wb.max_residue_field = 1 << 16;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    // phase sums cycle (0, 0, 0, 4); the average converges to the rank 1
    auto est = central_multiplicity_estimate(an, 1, 8);
    CHECK(est.estimate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(est.fluctuation < 1.1);
}

TEST_CASE("limit-law density reports carry their method tags") {
    SpectralRV rv;
    rv.q = 3;
    rv.N = 2;
    rv.v_even = 0.4;
    rv.v_odd = -0.2;
    rv.amps = {1.0};
    DensityReport mc = density_report(delta_mc(rv, 5000, 3));
    CHECK(mc.method == "limit-law-mc");
    DensityReport cf = density_report(delta_cf(rv));
    CHECK(cf.method == "limit-law-cf");
    CHECK(std::abs(mc.estimate - cf.estimate) < 0.05);
}

TEST_CASE("T_V direct evaluations") {
    WorkBounds wb;
    Fq F3(3, 1);
    CurveModel E = ulmer_curve(F3, 5);
    CurveAnalyzer an(E, wb);
    // V = -U_1 reproduces the race series exactly
    auto V1 = [](double t) { return -chebyshev_u(1, t); };
    for (long long X = 1; X <= 5; ++X)
        CHECK(t_v_direct(an, V1, X) == doctest::Approx(T_direct(an, X)).epsilon(1e-12));
    // V = U_2 at X = 1: -(sqrt 3)/9
    auto V2 = [](double t) { return chebyshev_u(2, t); };
    CHECK(t_v_direct(an, V2, 1) == doctest::Approx(-std::sqrt(3.0) / 9).epsilon(1e-12));
    // V = 0
    CHECK(t_v_direct(an, [](double) { return 0.0; }, 3) == 0.0);
}
