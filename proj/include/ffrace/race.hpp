#pragma once

// The bias series T_E(X) computed two ways -- directly from places and from
// the zero spectrum via the explicit-formula decomposition -- together with
// the mean/variance of the limiting random variable and density reports.
//
// The variance carries a documented resonance correction: when L has an
// inverse zero at -q, the (-1)^X oscillation of c_pm(X) correlates with the
// theta = pi term, and the plain diagonal formula overshoots by
// m(pi) * q / (sqrt(q)+1)^2.  Both values are reported.

#include <complex>
#include <functional>

#include "ffrace/lpoly.hpp"
#include "ffrace/qsqrt.hpp"

namespace ffrace {

// q/(q-1) for even X, sqrt(q)/(q-1) for odd X
inline QSqrt c_pm(long long X, long long q) {
    if (X % 2 == 0) return QSqrt(q, BigRat(q, q - 1));
    return QSqrt(q, BigRat(0), BigRat(1, q - 1));
}

struct DensityReport {
    enum class Kind { Exact, Interval, Estimate };
    Kind kind = Kind::Estimate;
    BigRat value;           // Exact
    BigRat lo, hi;          // Interval
    double estimate = 0.0;  // Estimate
    double std_error = 0.0;
    std::string method;
    std::vector<long long> boundary_classes;
    long long period = 0;

    double midpoint() const {
        switch (kind) {
            case Kind::Exact: return value.to_double();
            case Kind::Interval: return (lo.to_double() + hi.to_double()) / 2;
            default: return estimate;
        }
    }
};

// T_E(X) = -(X / q^{X/2}) sum_{deg v <= X, good} a_v / q^{deg(v)/2}, exact
inline QSqrt T_direct_exact(CurveAnalyzer& an, long long X) {
    if (X < 1) throw std::invalid_argument("T_direct: X >= 1 required");
    long long q = an.curve().field().q();
    QSqrt total(q, BigRat(0));
    for (int d = 1; d <= X; ++d) {
        const DegreeSurvey& S = an.degree(d);
        long long sum_a = 0;
        for (auto& [a, count] : S.good_hist) sum_a += a * count;
        if (sum_a == 0) continue;
        total = total + QSqrt(q, BigRat(sum_a)) * q_pow_neg_half(q, d);
    }
    return QSqrt(q, BigRat(-X)) * q_pow_neg_half(q, X) * total;
}

inline double T_direct(CurveAnalyzer& an, long long X) { return T_direct_exact(an, X).to_double(); }

// Q_E(X) + R_E(X) from a numeric spectrum
inline double T_explicit(const Spectrum& sp, long long X) {
    double sq = std::sqrt((double)sp.q);
    double val = sq / (sq - 1) * sp.rank - c_pm(X, sp.q).to_double();
    std::complex<double> acc = 0;
    for (auto& [theta, m] : sp.angles) {
        if (theta == 0.0) continue;
        std::complex<double> w = 1.0 / (1.0 - std::polar(1.0 / sq, -theta));
        acc += double(m) * w * std::polar(1.0, theta * double(X));
    }
    return val + acc.real();
}

struct MeanVariance {
    QSqrt mean_exact;
    double mean;
    double variance_diagonal;   // plain diagonal formula over distinct nonzero angles
    double variance_corrected;  // minus the c_pm / theta=pi resonance term
    bool resonance;             // m(pi) > 0: the two variances genuinely differ
};

inline MeanVariance mean_variance(const Spectrum& sp) {
    long long q = sp.q;
    double sq = std::sqrt((double)q);
    // sqrt(q)/(sqrt(q)-1) = (q + sqrt q)/(q - 1)
    QSqrt factor(q, BigRat(q, q - 1), BigRat(1, q - 1));
    MeanVariance mv{QSqrt(q), 0, 0, 0, false};
    mv.mean_exact = factor * QSqrt(q, BigRat(2 * sp.rank - 1, 2));
    mv.mean = mv.mean_exact.to_double();
    double aprime = (double)q / ((sq + 1) * (sq + 1));
    double var = 0.25 * aprime;
    int m_pi = 0;
    for (auto& [theta, m] : sp.angles) {
        if (theta == 0.0) continue;
        double denom = std::norm(1.0 - std::polar(1.0 / sq, -theta));
        var += double(m) * double(m) / denom;
        if (std::abs(theta - M_PI) < 1e-12) m_pi = m;
    }
    mv.variance_diagonal = var;
    mv.variance_corrected = var - double(m_pi) * aprime;
    mv.resonance = m_pi > 0;
    return mv;
}

// natural-density estimate of {X <= M : T(X) > 0}
inline DensityReport density_time_average(const std::function<double(long long)>& T, long long M) {
    if (M < 1) throw std::invalid_argument("density: M >= 1 required");
    long long pos = 0;
    for (long long X = 1; X <= M; ++X)
        if (T(X) > 0.0) ++pos;
    DensityReport rep;
    rep.kind = DensityReport::Kind::Estimate;
    rep.estimate = double(pos) / double(M);
    rep.std_error = 0.0;
    rep.method = "time-average";
    return rep;
}

struct SeriesStats {
    double mean;
    double variance;
};
inline SeriesStats series_stats(const std::function<double(long long)>& T, long long M) {
    double s1 = 0, s2 = 0;
    for (long long X = 1; X <= M; ++X) {
        double v = T(X);
        s1 += v;
        s2 += v * v;
    }
    double mean = s1 / double(M);
    return {mean, s2 / double(M) - mean * mean};
}

}  // namespace ffrace
