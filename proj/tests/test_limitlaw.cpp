#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffrace/limitlaw.hpp"
#include "ffrace/race.hpp"
#include "ffrace/ulmer.hpp"

using namespace ffrace;

// quadrature oracle for J0 (integral representation), test-only
static double j0_ref(double x) {
    int n = 40000;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        double th = M_PI * i / n;
        double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::cos(x * std::sin(th));
    }
    return s / (3.0 * n);
}

TEST_CASE("bessel j0 reference values") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-10);  // first zero
    for (double x : {0.3, 3.7, 9.2, 15.99, 16.01, 31.0, 80.0, 333.0}) {
        CHECK(std::abs(bessel_j0(x) - j0_ref(x)) < 1e-11);
        CHECK(std::abs(bessel_j0(x)) <= 1.0);
        CHECK(bessel_j0(-x) == bessel_j0(x));
    }
}

TEST_CASE("build_rv from the E_5/F_3 spectrum") {
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    SpectralRV rv = build_rv(sp);
    CHECK(rv.v_even == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(rv.v_odd == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    REQUIRE(rv.amps.size() == 1);
    CHECK(rv.amps[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // X_1 values equal the exact periodic part minus the circle-pair term
    UlmerStructure st = ulmer_structure(ulmer_validate(3, 1, 5));
    std::complex<double> w = 1.0 / (1.0 - std::polar(1.0 / std::sqrt(3.0), -M_PI / 2));
    CHECK(ulmer_t_per(st, 4).to_double() - 2 * w.real() == doctest::Approx(rv.v_even));
    std::complex<double> wi = w * std::polar(1.0, M_PI / 2);
    CHECK(ulmer_t_per(st, 5).to_double() - 2 * wi.real() == doctest::Approx(rv.v_odd));
}

TEST_CASE("build_rv simple cases") {
    // rank 0, no zeros, q = 4: two-point {-4/3, -2/3}
    Spectrum sp;
    sp.q = 4;
    sp.N = 0;
    sp.rank = sp.m_minus_q = 0;
    sp.epsilon = 1;
    SpectralRV rv = build_rv(sp);
    CHECK(rv.v_even == doctest::Approx(-4.0 / 3));
    CHECK(rv.v_odd == doctest::Approx(-2.0 / 3));
    CHECK(rv.amps.empty());
    // m(-q) = 0 identity: V_even - V_odd = -sqrt(q)/(sqrt(q)+1)
    double sq = 2.0;
    CHECK(rv.v_even - rv.v_odd == doctest::Approx(-sq / (sq + 1)));
}

TEST_CASE("characteristic function basics") {
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    SpectralRV rv = build_rv(sp);
    CHECK(std::abs(char_fn(rv, 0.0) - std::complex<double>(1, 0)) < 1e-15);
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        double xi = (rng.uniform() - 0.5) * 60;
        auto v = char_fn(rv, xi);
        CHECK(std::abs(v) <= 1.0 + 1e-12);
        auto conj = char_fn(rv, -xi);
        CHECK(std::abs(std::conj(v) - conj) < 1e-12);
    }
    // pure two-point {-1, +1} at xi = pi
    SpectralRV pm;
    pm.v_even = -1;
    pm.v_odd = 1;
    pm.q = 4;
    pm.N = 1;
    CHECK(char_fn(pm, M_PI).real() == doctest::Approx(-1.0));
}

TEST_CASE("delta_mc reference cases") {
    SpectralRV constant_pos;
    constant_pos.v_even = constant_pos.v_odd = 1.0;
    constant_pos.q = 4;
    constant_pos.N = 1;
    CHECK(delta_mc(constant_pos, 2000, 7).delta == 1.0);

    SpectralRV sym;
    sym.v_even = sym.v_odd = 0.0;
    sym.q = 4;
    sym.N = 2;
    sym.amps = {1.0, 0.5};
    DeltaMC mc = delta_mc(sym, 40000, 11);
    CHECK(std::abs(mc.delta - 0.5) <= 3 * mc.std_error);

    CHECK_THROWS_AS(delta_mc(sym, 10, 1), std::invalid_argument);
}

TEST_CASE("delta_mc against the arccos oracle for the one-weight case") {
    // X = X_1 + sqrt(3) cos(Theta):
    // P[V_even + sqrt3 cos > 0] = 5/6, P[V_odd + sqrt3 cos > 0] = 2/3, delta = 3/4
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    SpectralRV rv = build_rv(sp);
    double p_even = std::acos(std::max(-1.0, -rv.v_even / rv.amps[0])) / M_PI;
    double p_odd = std::acos(std::max(-1.0, -rv.v_odd / rv.amps[0])) / M_PI;
    double oracle = (p_even + p_odd) / 2;
    CHECK(oracle == doctest::Approx(0.75).epsilon(1e-12));
    DeltaMC mc = delta_mc(rv, 200000, 2024);
    CHECK(std::abs(mc.delta - oracle) <= 3 * mc.std_error);
    // the LI-model density lands inside the exact interval [1/2, 1]
    CHECK(mc.delta > 0.5);
    CHECK(mc.delta < 1.0);
}

TEST_CASE("delta_cf agrees with delta_mc and the oracle") {
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    SpectralRV rv = build_rv(sp);
    DeltaCF cf = delta_cf(rv);
    CHECK(cf.delta == doctest::Approx(0.75).epsilon(2e-4));

    // random rvs, k in [1, 6]: inversion tracks Monte Carlo
    Rng rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        SpectralRV r;
        r.q = 3;
        r.rank = 0;
        r.m_minus_q = 0;
        int k = 1 + int(rng.next() % 6);
        r.N = 2 * k;
        r.v_even = (rng.uniform() - 0.5) * 3;
        r.v_odd = (rng.uniform() - 0.5) * 3;
        for (int i = 0; i < k; ++i) r.amps.push_back(0.3 + 2.5 * rng.uniform());
        DeltaMC mc = delta_mc(r, 60000, 7000 + trial);
        DeltaCF c = delta_cf(r);
        CHECK(std::abs(c.delta - mc.delta) <= std::max(0.01, 4 * mc.std_error));
    }

    SpectralRV atomic;
    atomic.v_even = 1;
    atomic.v_odd = -1;
    atomic.q = 4;
    atomic.N = 1;
    CHECK_THROWS_AS(delta_cf(atomic), std::invalid_argument);
}

TEST_CASE("gaussian distance of synthetic spectra shrinks like 1/sqrt(N)") {
    Spectrum s100 = synthetic_li_spectrum(100, 3, 42);
    Spectrum s400 = synthetic_li_spectrum(400, 3, 43);
    GaussianDistance g100 = gaussian_distance(build_rv(s100), 100000, 1);
    GaussianDistance g400 = gaussian_distance(build_rv(s400), 100000, 2);
    CHECK(g100.sup_distance <= 0.15);
    CHECK(g400.sup_distance <= 0.08);
    double ratio = g100.sup_distance / g400.sup_distance;
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
}

TEST_CASE("moment consistency between samples and the explicit formulas") {
    Spectrum sp = closed_form_spectrum(ulmer_structure(ulmer_validate(3, 1, 5)));
    SpectralRV rv = build_rv(sp);
    MeanVariance mv = mean_variance(sp);
    CHECK(rv.mean() == doctest::Approx(mv.mean).epsilon(1e-12));
    CHECK(rv.variance() == doctest::Approx(mv.variance_corrected).epsilon(1e-12));
    GaussianDistance g = gaussian_distance(rv, 200000, 5);
    double se_mean = std::sqrt(mv.variance_corrected / 200000.0);
    CHECK(std::abs(g.mean - mv.mean) <= 3 * se_mean);
    CHECK(std::abs(g.var - mv.variance_corrected) <= 0.02);
}

TEST_CASE("berry-esseen hypotheses hold for large synthetic spectra") {
    Spectrum sp = synthetic_li_spectrum(400, 3, 4);
    SpectralRV rv = build_rv(sp);
    BerryEsseenDiagnostic d = berry_esseen_diagnostic(rv);
    CHECK(d.tail_condition);
    CHECK(d.center_condition);
}

TEST_CASE("normalized third absolute moment stays bounded as N grows") {
    // E|Z|^3 = 2 sqrt(2/pi) = 1.596 for the standard Gaussian
    for (auto [N, seed] : std::vector<std::pair<int, uint64_t>>{{100, 42}, {400, 43}}) {
        SpectralRV rv = build_rv(synthetic_li_spectrum(N, 3, seed));
        Rng rng(91);
        double norm = std::sqrt(2.0 / 3.0) / std::sqrt((double)rv.N);
        double m3 = 0;
        const int S = 50000;
        for (int i = 0; i < S; ++i) {
            double y = sample_rv(rv, rng) * norm;
            m3 += std::abs(y * y * y);
        }
        m3 /= S;
        CHECK(m3 > 1.0);
        CHECK(m3 < 2.5);
    }
}

TEST_CASE("deterministic seeding") {
    Spectrum sp = synthetic_li_spectrum(100, 3, 42);
    SpectralRV rv = build_rv(sp);
    DeltaMC a = delta_mc(rv, 5000, 77);
    DeltaMC b = delta_mc(rv, 5000, 77);
    CHECK(a.delta == b.delta);
    DeltaMC c = delta_mc(rv, 5000, 78);
    CHECK(a.delta != c.delta);  // different seed, different draw
}
