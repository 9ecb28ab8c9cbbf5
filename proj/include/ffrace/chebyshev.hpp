#pragma once

// Chebyshev-basis machinery for general test functions of the Frobenius
// angles: U_m evaluation, the double-angle expansion, Fourier coefficients
// against the Sato-Tate weight, exact symmetric-power zero power sums from
// place data, and the explicit-formula residual check.

#include <functional>

#include "ffrace/bigint.hpp"
#include "ffrace/race.hpp"
#include "ffrace/survey.hpp"

namespace ffrace {

// U_m(theta) = sin((m+1)theta)/sin(theta), with the limit values at 0 and pi
inline double chebyshev_u(int m, double theta) {
    if (m < 0) throw std::invalid_argument("chebyshev_u: m >= 0");
    double s = std::sin(theta);
    if (std::abs(s) < 1e-9) {
        double sign = (std::cos(theta) >= 0) ? 1.0 : (m % 2 == 0 ? 1.0 : -1.0);
        return sign * (m + 1);
    }
    return std::sin((m + 1) * theta) / s;
}

// U_m(2 theta) = U_{2m} - U_{2m-2} + ... + (-1)^{m+1} U_2 + (-1)^m.
// Returned low-to-high in the order {constant, U_2, U_4, ..., U_{2m}}.
inline std::vector<int> double_angle_expand(int m) {
    std::vector<int> c(m + 1);
    c[0] = (m % 2 == 0) ? 1 : -1;  // constant term (coefficient of U_0)
    for (int j = 1; j <= m; ++j) c[j] = ((m - j) % 2 == 0) ? 1 : -1;
    return c;
}

// adaptive Simpson quadrature
namespace detail {
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) < 15 * tol) return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

// `panels` initial subdivisions guard against oscillatory integrands whose
// zeros alias the three-point Simpson samples
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11, int panels = 8, int depth = 24) {
    double total = 0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + (b - a) * i / panels;
        double x1 = a + (b - a) * (i + 1) / panels;
        double fa = f(x0), fb = f(x1), fm = f((x0 + x1) / 2);
        double whole = (x1 - x0) / 6 * (fa + 4 * fm + fb);
        total += detail::adaptive_simpson(f, x0, x1, fa, fm, fb, whole, tol / panels, depth);
    }
    return total;
}

// <V, U_m> = (2/pi) int_0^pi V(theta) U_m(theta) sin^2(theta) dtheta
inline double fourier_coeff(const std::function<double(double)>& V, int m, double tol = 1e-11) {
    auto f = [&](double t) {
        double s = std::sin(t);
        return V(t) * chebyshev_u(m, t) * s * s;
    };
    return 2.0 / M_PI * integrate(f, 0.0, M_PI, tol, 2 * m + 9);
}

// A test function of the Frobenius angles given through its U-basis
// coefficients V_1..V_M.  The decay exponent is a caller-supplied
// certificate (|V_m| <= C m^{-3-eta}); it is carried, not verified.
struct FourierProfile {
    std::vector<double> coeffs;  // V_m for m = 1..M, with <V, U_0> = 0
    double decay_exponent = 0;

    double eval(double theta) const {
        double v = 0;
        for (size_t m = 1; m <= coeffs.size(); ++m) v += coeffs[m - 1] * chebyshev_u(int(m), theta);
        return v;
    }
};

inline FourierProfile make_profile(const std::function<double(double)>& V, int m_cut,
                                   double decay_exponent) {
    if (std::abs(fourier_coeff(V, 0)) > 1e-8)
        throw std::invalid_argument("make_profile: <V, U_0> = 0 is required");
    FourierProfile p;
    p.decay_exponent = decay_exponent;
    for (int m = 1; m <= m_cut; ++m) p.coeffs.push_back(fourier_coeff(V, m));
    return p;
}

// Constant part of the spectral decomposition of T_V at parity X:
// sum_m ((-1)^{m+1} c_pm(X) - sqrt(q)/(sqrt(q)-1) M_m(1)) V_m, with the
// central multiplicities M_m(1) supplied by the caller (they are not
// computable from place data alone for m >= 2).
inline double q_v_constant(const FourierProfile& p, const std::vector<double>& central_mults,
                           long long X, long long q) {
    if (central_mults.size() < p.coeffs.size())
        throw std::invalid_argument("q_v_constant: need one central multiplicity per coefficient");
    double c = c_pm(X, q).to_double();
    double sq = std::sqrt((double)q);
    double factor = sq / (sq - 1);
    double s = 0;
    for (size_t m = 1; m <= p.coeffs.size(); ++m) {
        double sign = (m % 2 == 1) ? 1.0 : -1.0;  // (-1)^{m+1}
        s += (sign * c - factor * central_mults[m - 1]) * p.coeffs[m - 1];
    }
    return s;
}

// h_m(alpha^kk, beta^kk): sum_{j=0..m} alpha^{kk(m-j)} beta^{kk j},
// through h_j = A h_{j-1} - P h_{j-2} with A = alpha^kk + beta^kk, P = qv^kk
inline __int128 sym_fiber_sum(long long a, long long qv, int kk, int m) {
    __int128 A = trace_power_sum(a, qv, kk);
    __int128 P = 1;
    for (int i = 0; i < kk; ++i) P *= qv;
    __int128 h0 = 1, h1 = A;
    if (m == 0) return 1;
    for (int j = 2; j <= m; ++j) {
        __int128 h2 = A * h1 - P * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// S'_{m,N} = -sum_j gamma_{m,j}^N, exactly, from places of degree dividing N
inline BigInt sym_power_sums(CurveAnalyzer& an, int m, int N) {
    if (m < 1) throw std::invalid_argument("sym_power_sums: m >= 1 required");
    long long q = an.curve().field().q();
    BigInt total(0);
    for (int d = 1; d <= N; ++d) {
        if (N % d) continue;
        const DegreeSurvey& S = an.degree(d);
        long long qv = ipow_ll(q, d);
        int kk = N / d;
        __int128 good = 0;
        for (auto& [a, count] : S.good_hist) good += (__int128)count * sym_fiber_sum(a, qv, kk, m);
        long long bad = 0;
        for (auto& b : S.bad) {
            long long amk = (b.a == 0) ? 0 : ((b.a == 1 || ((long long)m * kk) % 2 == 0) ? 1 : -1);
            bad += amk;
        }
        __int128 term = (__int128)d * (good + bad);
        bool neg = term < 0;
        unsigned __int128 mt = neg ? -(unsigned __int128)term : (unsigned __int128)term;
        BigInt b = BigInt((long long)(mt >> 64)) * BigInt::from_string("18446744073709551616") +
                   BigInt((long long)(mt & 0xffffffffffffffffull));
        total = neg ? total - b : total + b;
    }
    return total;
}

// sum over good places of degree N of the numerator of U_m(theta_v):
// U_m(theta_v) = h_m(alpha_v, beta_v) / qv^{m/2}
inline BigInt sum_u_m_numerator(CurveAnalyzer& an, int m, int N) {
    const DegreeSurvey& S = an.degree(N);
    __int128 acc = 0;
    for (auto& [a, count] : S.good_hist) acc += (__int128)count * sym_fiber_sum(a, S.qv, 1, m);
    bool neg = acc < 0;
    unsigned __int128 mt = neg ? -(unsigned __int128)acc : (unsigned __int128)acc;
    BigInt b = BigInt((long long)(mt >> 64)) * BigInt::from_string("18446744073709551616") +
               BigInt((long long)(mt & 0xffffffffffffffffull));
    return neg ? -b : b;
}

// sum_{deg v = N, good} U_m(theta_v), numerically
inline double sum_u_m(CurveAnalyzer& an, int m, int N) {
    double qm = std::pow((double)an.degree(N).qv, m / 2.0);
    return sum_u_m_numerator(an, m, N).to_double() / qm;
}

struct ExplicitFormulaResidual {
    double lhs;       // (N/q^{N/2}) sum_{deg v = N, good} U_m(theta_v)
    double bracket;   // (-1)^{m+1} E(N) - sum_j e^{i N theta_{m,j}}
    double residual;  // lhs - bracket
};

// Residual of the explicit formula with the zero side computed from the
// same place data through the symmetric-power power sums.
inline ExplicitFormulaResidual explicit_formula_residual(CurveAnalyzer& an, int m, int N) {
    long long q = an.curve().field().q();
    BigInt H = sum_u_m_numerator(an, m, N);
    BigInt Sp = sym_power_sums(an, m, N);
    // lhs = N * H / q^{(m+1)N/2};  sum e^{iN theta} = -S' / q^{(m+1)N/2}
    double scale = std::pow((double)q, (m + 1) * N / 2.0);
    double lhs = double(N) * H.to_double() / scale;
    double phase_sum = -Sp.to_double() / scale;
    double eps_n = (N % 2 == 0) ? 1.0 : 0.0;
    double bracket = ((m + 1) % 2 == 0 ? 1.0 : -1.0) * eps_n - phase_sum;
    return {lhs, bracket, lhs - bracket};
}

// Same residual with the zero side supplied independently (e.g. from a
// closed-form spectrum): bracket = (-1)^{m+1} E(N) - phase_sum.
inline ExplicitFormulaResidual explicit_formula_residual_vs(CurveAnalyzer& an, int m, int N,
                                                            double phase_sum) {
    long long q = an.curve().field().q();
    BigInt H = sum_u_m_numerator(an, m, N);
    double scale = std::pow((double)q, (m + 1) * N / 2.0);
    double lhs = double(N) * H.to_double() / scale;
    double eps_n = (N % 2 == 0) ? 1.0 : 0.0;
    double bracket = ((m + 1) % 2 == 0 ? 1.0 : -1.0) * eps_n - phase_sum;
    return {lhs, bracket, lhs - bracket};
}

// T_V(X) = (X/q^{X/2}) sum_{deg v <= X, good} V(theta_v)
inline double t_v_direct(CurveAnalyzer& an, const std::function<double(double)>& V, long long X) {
    if (X < 1) throw std::invalid_argument("t_v_direct: X >= 1 required");
    long long q = an.curve().field().q();
    double acc = 0;
    for (int d = 1; d <= X; ++d) {
        const DegreeSurvey& S = an.degree(d);
        double sq = std::sqrt((double)S.qv);
        for (auto& [a, count] : S.good_hist) {
            double theta = std::acos(std::clamp((double)a / (2 * sq), -1.0, 1.0));
            acc += double(count) * V(theta);
        }
    }
    return double(X) * std::pow((double)q, -double(X) / 2) * acc;
}

struct CentralMultiplicityEstimate {
    double estimate;     // running average of the phase sums at n_max
    double fluctuation;  // spread of the running average over the last half
};

// Estimator for the multiplicity of the central inverse zero q^{(m+1)/2} of
// the symmetric-power L-function: the Cesaro average of
// sum_j e^{i N theta_{m,j}} over N <= n_max.  Never exact -- the fluctuation
// of the running average is the convergence diagnostic.
inline CentralMultiplicityEstimate central_multiplicity_estimate(CurveAnalyzer& an, int m,
                                                                 int n_max) {
    long long q = an.curve().field().q();
    double acc = 0;
    double lo = 1e300, hi = -1e300;
    CentralMultiplicityEstimate est{0, 0};
    for (int N = 1; N <= n_max; ++N) {
        double scale = std::pow((double)q, (m + 1) * N / 2.0);
        acc += -sym_power_sums(an, m, N).to_double() / scale;
        double avg = acc / N;
        if (2 * N >= n_max) {
            lo = std::min(lo, avg);
            hi = std::max(hi, avg);
        }
        if (N == n_max) est.estimate = avg;
    }
    est.fluctuation = hi - lo;
    return est;
}

inline double t_v_direct(CurveAnalyzer& an, const FourierProfile& p, long long X) {
    return t_v_direct(an, [&](double th) { return p.eval(th); }, X);
}

// slope of the least-squares fit of log|r_N| against N (zero residuals skipped)
inline double log_decay_slope(const std::vector<std::pair<int, double>>& residuals) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto& [N, r] : residuals) {
        if (r == 0.0) continue;
        double y = std::log(std::abs(r));
        sx += N;
        sy += y;
        sxx += double(N) * N;
        sxy += double(N) * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("log_decay_slope: need two nonzero residuals");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ffrace
