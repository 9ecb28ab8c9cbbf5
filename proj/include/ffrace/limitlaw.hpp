#pragma once

// The limiting random variable X_E = X_1 + X_2 under the linear-independence
// model: a two-point parity variable plus independent circle projections,
// its characteristic function as a product of Bessel J0 factors, densities
// by seeded Monte Carlo and by Gil-Pelaez inversion, and the empirical
// Gaussian-distance check behind the central limit theorem.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ffrace/race.hpp"

namespace ffrace {

// J0 to absolute accuracy ~1e-13: long-double power series up to |x| = 16,
// Hankel asymptotics beyond (terms a_{k+1} = -a_k (2k+1)^2 / (8(k+1))).
inline double bessel_j0(double x) {
    x = std::fabs(x);
    if (x <= 16.0) {
        long double t = (long double)x * x / 4.0L;
        long double term = 1.0L, sum = 1.0L;
        for (int k = 1; k < 90; ++k) {
            term *= t / ((long double)k * k);
            sum += (k % 2) ? -term : term;
            if (term < 1e-24L) break;
        }
        return (double)sum;
    }
    // J0(x) = sqrt(2/(pi x)) [ P cos(x - pi/4) - Q sin(x - pi/4) ],
    // P = sum_{k even} (-1)^{k/2} a_k x^-k, Q = sum_{k odd} (-1)^{(k-1)/2} a_k x^-k
    long double P = 1.0L, Q = 0.0L;
    long double ak = 1.0L, xp = 1.0L;
    for (int k = 0; k < 14; ++k) {
        ak *= -((2.0L * k + 1) * (2.0L * k + 1)) / (8.0L * (k + 1));
        xp /= (long double)x;
        int kk = k + 1;
        if (kk % 2 == 0)
            P += ((kk / 2) % 2 ? -1.0L : 1.0L) * ak * xp;
        else
            Q += (((kk - 1) / 2) % 2 ? -1.0L : 1.0L) * ak * xp;
    }
    long double w = (long double)x - 0.78539816339744830961L;  // x - pi/4
    long double amp = std::sqrt(2.0L / (3.14159265358979323846L * (long double)x));
    return (double)(amp * (P * std::cos(w) - Q * std::sin(w)));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// deterministic cross-platform generator (splitmix64)
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

struct SpectralRV {
    double v_even = 0, v_odd = 0;    // two-point support of the parity part
    std::vector<double> amps;        // m(theta) * 2/|1 - q^{-1/2} e^{-i theta}| per distinct angle
    long long q = 0;
    int N = 0, rank = 0, m_minus_q = 0;

    double mean() const { return (v_even + v_odd) / 2; }
    double variance() const {
        double d = (v_even - v_odd) / 2;
        double v = d * d;
        for (double a : amps) v += a * a / 2;
        return v;
    }
};

// V_even/V_odd from the explicit formula values at even/odd X; weights from
// the distinct angles in (0, pi).
inline SpectralRV build_rv(const Spectrum& sp) {
    SpectralRV rv;
    rv.q = sp.q;
    rv.N = sp.N;
    rv.rank = sp.rank;
    rv.m_minus_q = sp.m_minus_q;
    double sq = std::sqrt((double)sp.q);
    double base = sq / (sq - 1) * sp.rank;
    rv.v_even = base - (double)sp.q / (sp.q - 1) + sp.m_minus_q * sq / (sq + 1);
    rv.v_odd = base - sq / (sp.q - 1) - sp.m_minus_q * sq / (sq + 1);
    for (auto& [theta, m] : sp.angles) {
        if (theta <= 1e-15 || theta >= M_PI - 1e-12) continue;
        double w = 2.0 / std::abs(1.0 - std::polar(1.0 / sq, -theta));
        rv.amps.push_back(double(m) * w);
    }
    return rv;
}

inline std::complex<double> char_fn(const SpectralRV& rv, double xi) {
    std::complex<double> b =
        0.5 * (std::polar(1.0, rv.v_even * xi) + std::polar(1.0, rv.v_odd * xi));
    double prod = 1.0;
    for (double a : rv.amps) prod *= bessel_j0(a * xi);
    return b * prod;
}

inline double sample_rv(const SpectralRV& rv, Rng& rng) {
    double x = (rng.next() & 1) ? rv.v_odd : rv.v_even;
    for (double a : rv.amps) x += a * std::cos(2 * M_PI * rng.uniform());
    return x;
}

struct DeltaMC {
    double delta;
    double std_error;
    long long samples;
    uint64_t seed;
};

inline DeltaMC delta_mc(const SpectralRV& rv, long long samples, uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("delta_mc: need at least 10^3 samples");
    Rng rng(seed);
    long long pos = 0;
    for (long long i = 0; i < samples; ++i)
        if (sample_rv(rv, rng) > 0) ++pos;
    double d = double(pos) / double(samples);
    return {d, std::sqrt(std::max(d * (1 - d), 1e-12) / double(samples)), samples, seed};
}

struct DeltaCF {
    double delta;
    double truncation_estimate;
    double cap;
};

// Gil-Pelaez: P[X > 0] = 1/2 + (1/pi) int_0^inf Im(phi(xi)) dxi / xi.
// Panel Simpson with the panel size tied to the fastest oscillation; the
// truncation estimate compares against integrating to half the cap.
inline DeltaCF delta_cf(const SpectralRV& rv, double cap = 0.0) {
    if (rv.amps.empty())
        throw std::invalid_argument("delta_cf: atomic distribution (no circle part); inversion invalid");
    double scale = std::max({std::abs(rv.v_even), std::abs(rv.v_odd), 1.0});
    for (double a : rv.amps) scale = std::max(scale, a);
    if (cap <= 0.0) cap = (rv.amps.size() == 1) ? 40000.0 : (rv.amps.size() == 2 ? 4000.0 : 800.0);
    double h = M_PI / (8.0 * scale);  // >= 16 points per oscillation
    auto integrand = [&](double xi) {
        if (xi == 0.0) return (rv.v_even + rv.v_odd) / 2;  // limit of Im(phi)/xi
        return char_fn(rv, xi).imag() / xi;
    };
    double acc = 0, acc_half = 0;
    long long steps = (long long)std::ceil(cap / h);
    if (steps % 2) ++steps;
    h = cap / double(steps);
    double prev = integrand(0.0);
    for (long long i = 0; i < steps; i += 2) {
        double mid = integrand((i + 1) * h);
        double right = integrand((i + 2) * h);
        acc += h / 3 * (prev + 4 * mid + right);
        if ((i + 2) * 2 <= steps) acc_half = acc;
        prev = right;
    }
    DeltaCF out;
    out.delta = 0.5 + acc / M_PI;
    out.truncation_estimate = std::abs(acc - acc_half) / M_PI;
    out.cap = cap;
    return out;
}

struct GaussianDistance {
    double sup_distance;
    double scale;   // (rank + 1) / sqrt(N)
    double mean;    // sample mean of X_E
    double var;     // sample variance of X_E
    long long samples;
};

// sup |F_Y - Phi| for Y = sqrt((q-1)/q) X_E / sqrt(N), from seeded samples
inline GaussianDistance gaussian_distance(const SpectralRV& rv, long long samples, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> ys(samples);
    double norm = std::sqrt((double(rv.q) - 1) / double(rv.q)) / std::sqrt((double)rv.N);
    double s1 = 0, s2 = 0;
    for (long long i = 0; i < samples; ++i) {
        double x = sample_rv(rv, rng);
        s1 += x;
        s2 += x * x;
        ys[i] = x * norm;
    }
    std::sort(ys.begin(), ys.end());
    double sup = 0;
    for (long long i = 0; i < samples; ++i) {
        double F = normal_cdf(ys[i]);
        sup = std::max(sup, std::abs(double(i + 1) / double(samples) - F));
        sup = std::max(sup, std::abs(double(i) / double(samples) - F));
    }
    GaussianDistance g;
    g.sup_distance = sup;
    g.scale = (rv.rank + 1.0) / std::sqrt((double)rv.N);
    g.mean = s1 / double(samples);
    g.var = s2 / double(samples) - g.mean * g.mean;
    g.samples = samples;
    return g;
}

struct BerryEsseenDiagnostic {
    double eps;
    double M;
    bool tail_condition;    // |phi(xi)| <= 10 xi^-4 for |xi| >= eps^{-1/4}
    bool center_condition;  // |log phi + xi^2/2| <= 10 eps (M xi^2 + xi^4) below
};

// Numeric check of the two hypotheses of the Berry-Esseen lemma for the
// normalized circle part Y_2, with eps = 1/N and M = c (log N + rank).
inline BerryEsseenDiagnostic berry_esseen_diagnostic(const SpectralRV& rv, double c = 2.0) {
    BerryEsseenDiagnostic d;
    d.eps = 1.0 / double(rv.N);
    d.M = c * (std::log((double)rv.N) + rv.rank);
    double norm = std::sqrt((double(rv.q) - 1) / double(rv.q)) / std::sqrt((double)rv.N);
    auto phi2 = [&](double xi) {
        double prod = 1.0;
        for (double a : rv.amps) prod *= bessel_j0(a * norm * xi);
        return prod;
    };
    double cut = std::pow(d.eps, -0.25);
    d.tail_condition = true;
    for (double xi = cut; xi <= std::min(1.0 / d.eps, 50 * cut); xi *= 1.17) {
        if (std::abs(phi2(xi)) > 10.0 * std::pow(xi, -4.0)) { d.tail_condition = false; break; }
    }
    d.center_condition = true;
    for (double xi = cut / 50; xi <= cut; xi *= 1.11) {
        double p = phi2(xi);
        if (p <= 0) { d.center_condition = false; break; }
        double lhs = std::abs(std::log(p) + xi * xi / 2);
        if (lhs > 10.0 * d.eps * (d.M * xi * xi + std::pow(xi, 4.0))) {
            d.center_condition = false;
            break;
        }
    }
    return d;
}

inline DensityReport density_report(const DeltaMC& mc) {
    DensityReport r;
    r.kind = DensityReport::Kind::Estimate;
    r.estimate = mc.delta;
    r.std_error = mc.std_error;
    r.method = "limit-law-mc";
    return r;
}
inline DensityReport density_report(const DeltaCF& cf) {
    DensityReport r;
    r.kind = DensityReport::Kind::Estimate;
    r.estimate = cf.delta;
    r.std_error = cf.truncation_estimate;
    r.method = "limit-law-cf";
    return r;
}

// synthetic spectrum with iid uniform angle pairs, rank 0 (the CLT test bed)
inline Spectrum synthetic_li_spectrum(int N, long long q, uint64_t seed) {
    if (N % 2) throw std::invalid_argument("synthetic spectrum: N must be even");
    Rng rng(seed);
    Spectrum sp;
    sp.q = q;
    sp.N = N;
    sp.rank = 0;
    sp.m_minus_q = 0;
    sp.epsilon = 1;
    sp.purity_residual = 0;
    std::vector<double> th(N / 2);
    for (auto& t : th) t = rng.uniform() * M_PI;
    std::sort(th.begin(), th.end());
    for (double t : th) sp.angles.push_back({t, 1});
    for (size_t i = th.size(); i-- > 0;) sp.angles.push_back({2 * M_PI - th[i], 1});
    sp.nontrivial_count = N;
    return sp;
}

}  // namespace ffrace
