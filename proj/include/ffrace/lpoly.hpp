#pragma once

// The Hasse-Weil L-polynomial from place data.  Power sums of inverse zeros
// come out of the log-derivative of the Euler product as exact integers
// (good places through the trace recurrence, bad places additively), and
// Newton's identities rebuild the coefficients.  The spectrum (angles,
// rank, sign, forced zeros) is extracted with the two structurally critical
// multiplicities done by exact division.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "ffrace/bigint.hpp"
#include "ffrace/survey.hpp"

namespace ffrace {

// alpha^k + beta^k where alpha+beta = a, alpha*beta = qv
inline __int128 trace_power_sum(long long a, long long qv, int k) {
    if (k == 0) return 2;
    __int128 prev = 2, cur = a;
    for (int i = 2; i <= k; ++i) {
        __int128 next = (__int128)a * cur - (__int128)qv * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline long long ipow_ll(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// p_N = sum_j gamma_j^N, exactly, from places of degree dividing N
inline BigInt zero_power_sums(CurveAnalyzer& an, int N) {
    long long q = an.curve().field().q();
    __int128 total = 0;
    for (int d = 1; d <= N; ++d) {
        if (N % d) continue;
        const DegreeSurvey& S = an.degree(d);
        long long qv = ipow_ll(q, d);
        int k = N / d;
        __int128 good = 0;
        for (auto& [a, count] : S.good_hist) good += (__int128)count * trace_power_sum(a, qv, k);
        __int128 bad = 0;
        for (auto& b : S.bad) {
            long long ak = (b.a == 0) ? 0 : ((b.a == 1 || k % 2 == 0) ? 1 : -1);
            bad += ak;
        }
        total += (__int128)d * (good + bad);
    }
    // -p_N equals the place sum
    __int128 p = -total;
    bool neg = p < 0;
    unsigned __int128 m = neg ? -(unsigned __int128)p : (unsigned __int128)p;
    BigInt hi((long long)(m >> 64));
    BigInt lo((long long)(m & 0xffffffffffffffffull));
    BigInt r = hi * BigInt::from_string("18446744073709551616") + lo;
    return neg ? -r : r;
}

struct LPolynomial {
    long long q = 0;
    std::vector<BigInt> coeffs;  // c_0 = 1, degree N_{E/K}
    int degree() const { return int(coeffs.size()) - 1; }
};

// Newton's identities: e_i = (1/i) sum_{j=1..i} (-1)^(j-1) e_{i-j} p_j,
// c_i = (-1)^i e_i.  Divisibility by i must be exact for a valid degree.
inline std::vector<BigInt> newton_coeffs(const std::vector<BigInt>& p, int N) {
    std::vector<BigInt> e(N + 1);
    e[0] = BigInt(1);
    for (int i = 1; i <= N; ++i) {
        BigInt acc(0);
        for (int j = 1; j <= i; ++j) {
            BigInt term = e[i - j] * p[j - 1];
            acc = (j % 2 == 1) ? acc + term : acc - term;
        }
        BigInt quo, rem;
        BigInt::divmod(acc, BigInt(i), quo, rem);
        if (!rem.is_zero())
            throw std::runtime_error("newton_coeffs: power sums inconsistent with an integral L-polynomial");
        e[i] = quo;
    }
    std::vector<BigInt> c(N + 1);
    for (int i = 0; i <= N; ++i) c[i] = (i % 2 == 0) ? e[i] : -e[i];
    return c;
}

// p_k regenerated from the coefficients, for k = 1..M
inline std::vector<BigInt> power_sums_from_coeffs(const std::vector<BigInt>& c, int M) {
    int N = int(c.size()) - 1;
    std::vector<BigInt> p(M + 1);
    for (int k = 1; k <= M; ++k) {
        BigInt acc(0);
        for (int i = 1; i < k && i <= N; ++i) acc = acc + c[i] * p[k - i];
        if (k <= N) acc = acc + BigInt(k) * c[k];
        p[k] = -acc;
    }
    p.erase(p.begin());
    return p;
}

struct LPolyResult {
    LPolynomial L;
    int stabilized_through = 0;  // highest extra power-sum index verified
};

// L(E/K, T) of the exact degree `N`, with stabilization: power sums beyond N
// recomputed from the polynomial must match place data.
inline LPolyResult lpolynomial(CurveAnalyzer& an, int N, int stabilization_depth = 2) {
    if (N < 0) throw std::invalid_argument("lpolynomial: negative degree");
    std::vector<BigInt> p(N);
    for (int i = 1; i <= N; ++i) p[i - 1] = zero_power_sums(an, i);
    LPolyResult res;
    res.L.q = an.curve().field().q();
    try {
        res.L.coeffs = newton_coeffs(p, N);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("lpolynomial: stabilization failure (non-minimal model or wrong degree hint)");
    }
    int checked = 0;
    auto predicted = power_sums_from_coeffs(res.L.coeffs, N + stabilization_depth);
    for (int i = 1; i <= stabilization_depth; ++i) {
        if (!an.degree_feasible(N + i)) break;
        BigInt actual = zero_power_sums(an, N + i);
        if (actual != predicted[N + i - 1])
            throw std::runtime_error("lpolynomial: stabilization failure (non-minimal model or wrong degree hint)");
        checked = i;
    }
    if (checked == 0 && N > 0)
        throw WorkBoundError("max_residue_field",
                             "lpolynomial: no stabilization degree within the counting bound");
    res.stabilized_through = checked;
    return res;
}

// sign of the functional equation, by exact coefficient symmetry
// a_{N-i} = eps * q^{N-2i} * a_i
inline int functional_equation_sign(const LPolynomial& L) {
    int N = L.degree();
    for (int eps : {+1, -1}) {
        bool ok = true;
        for (int i = 0; 2 * i <= N && ok; ++i) {
            BigInt rhs = BigInt::pow(BigInt(L.q), (unsigned long long)(N - 2 * i)) * L.coeffs[i];
            if (eps < 0) rhs = -rhs;
            if (L.coeffs[N - i] != rhs) ok = false;
        }
        if (ok) return eps;
    }
    throw std::runtime_error("not self-dual: invalid L-polynomial");
}

struct Spectrum {
    long long q = 0;
    int N = 0;
    int rank = 0;       // multiplicity of the inverse zero  +q  (theta = 0)
    int m_minus_q = 0;  // multiplicity of the inverse zero  -q  (theta = pi)
    int epsilon = 1;
    std::vector<std::pair<double, int>> angles;  // (theta in [0, 2pi), multiplicity), all zeros
    double purity_residual = 0.0;
    std::vector<long long> forced_zeros;  // subset of {q, -q}
    int nontrivial_count = 0;             // N minus the number of forced zeros

    int total_multiplicity() const {
        int n = 0;
        for (auto& [t, m] : angles) n += m;
        return n;
    }
};

namespace detail {

// exact division of L by (1 - s*q*T); returns multiplicity removed
inline int strip_real_zero(std::vector<BigInt>& c, long long q, int s) {
    int removed = 0;
    while (true) {
        int N = int(c.size()) - 1;
        if (N < 1) break;
        std::vector<BigInt> b(N);
        b[0] = c[0];
        BigInt sq(s > 0 ? q : -q);
        for (int i = 1; i < N; ++i) b[i] = c[i] + sq * b[i - 1];
        if (c[N] != -(sq * b[N - 1])) break;
        c = b;
        ++removed;
    }
    return removed;
}

// ---- rational polynomials, for exact squarefree (Yun) deflation ----

struct RatPoly {
    std::vector<BigRat> c;  // low-to-high, trimmed
    int degree() const { return int(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
};

inline RatPoly rp_from_ints(const std::vector<BigInt>& v) {
    RatPoly r;
    for (const auto& x : v) r.c.push_back(BigRat(x));
    r.trim();
    return r;
}
inline RatPoly rp_derivative(const RatPoly& f) {
    RatPoly r;
    for (size_t i = 1; i < f.c.size(); ++i) r.c.push_back(f.c[i] * BigRat((long long)i));
    r.trim();
    return r;
}
inline RatPoly rp_sub(const RatPoly& a, const RatPoly& b) {
    RatPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        BigRat va = i < a.c.size() ? a.c[i] : BigRat(0);
        BigRat vb = i < b.c.size() ? b.c[i] : BigRat(0);
        r.c[i] = va - vb;
    }
    r.trim();
    return r;
}
inline RatPoly rp_divmod(const RatPoly& a, const RatPoly& b, RatPoly* rem_out) {
    RatPoly q, r = a;
    if (b.is_zero()) throw std::domain_error("RatPoly: division by zero");
    if (a.degree() >= b.degree()) q.c.assign(a.degree() - b.degree() + 1, BigRat(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        BigRat f = r.c.back() / b.c.back();
        int shift = r.degree() - b.degree();
        q.c[shift] = f;
        for (int i = 0; i <= b.degree(); ++i) r.c[shift + i] = r.c[shift + i] - f * b.c[i];
        r.trim();
    }
    q.trim();
    if (rem_out) *rem_out = r;
    return q;
}
inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        // monic-normalize to keep the chain tame
        BigRat lead = b.c.back();
        for (auto& x : b.c) x = x / lead;
        RatPoly r;
        rp_divmod(a, b, &r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        BigRat lead = a.c.back();
        for (auto& x : a.c) x = x / lead;
    }
    return a;
}

// Yun's decomposition: f = prod A_i^i with every A_i squarefree
inline std::vector<std::pair<RatPoly, int>> yun_squarefree(const RatPoly& f) {
    std::vector<std::pair<RatPoly, int>> out;
    if (f.degree() < 1) return out;
    RatPoly fp = rp_derivative(f);
    RatPoly a = rp_gcd(f, fp);
    RatPoly b = rp_divmod(f, a, nullptr);
    RatPoly c = rp_divmod(fp, a, nullptr);
    RatPoly d = rp_sub(c, rp_derivative(b));
    int i = 1;
    while (b.degree() > 0) {
        RatPoly ai = rp_gcd(b, d);
        if (ai.degree() > 0) out.push_back({ai, i});
        b = rp_divmod(b, ai, nullptr);
        c = rp_divmod(d, ai, nullptr);
        d = rp_sub(c, rp_derivative(b));
        ++i;
    }
    return out;
}

inline std::vector<std::complex<double>> durand_kerner(const std::vector<double>& monic) {
    int n = int(monic.size()) - 1;  // coefficients c_0..c_n with c_n = 1
    std::vector<std::complex<double>> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = std::polar(1.0, 0.37 + 2 * M_PI * i / n);
    for (int iter = 0; iter < 2000; ++iter) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> val = 1;  // Horner with the implicit leading 1
            for (int j = n; j-- > 0;) val = val * r[i] + monic[j];
            std::complex<double> den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= (r[i] - r[j]);
            if (std::abs(den) < 1e-300) continue;
            std::complex<double> delta = val / den;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

}  // namespace detail

inline Spectrum spectrum(const LPolynomial& L, double cluster_tol = 1e-8) {
    Spectrum sp;
    sp.q = L.q;
    sp.N = L.degree();
    sp.epsilon = functional_equation_sign(L);

    std::vector<BigInt> c = L.coeffs;
    sp.rank = detail::strip_real_zero(c, L.q, +1);
    sp.m_minus_q = detail::strip_real_zero(c, L.q, -1);

    std::vector<std::pair<double, int>> found;
    if (sp.rank) found.push_back({0.0, sp.rank});
    if (sp.m_minus_q) found.push_back({M_PI, sp.m_minus_q});

    int M = int(c.size()) - 1;
    sp.purity_residual = 0.0;
    if (M > 0) {
        // exact squarefree deflation, then simple-root finding per layer
        auto layers = detail::yun_squarefree(detail::rp_from_ints(c));
        std::vector<std::pair<double, int>> thetas;  // (theta, multiplicity)
        for (auto& [A, mult] : layers) {
            int da = A.degree();
            if (da < 1) continue;
            // substitute T = S/q so the (simple) roots sit on the unit circle
            std::vector<double> monic(da + 1);
            BigRat leadscale = A.c[da] * BigRat(BigInt(1), BigInt::pow(BigInt(L.q), (unsigned long long)da));
            for (int i = 0; i <= da; ++i) {
                BigRat ci = A.c[i] * BigRat(BigInt(1), BigInt::pow(BigInt(L.q), (unsigned long long)i));
                monic[i] = (ci / leadscale).to_double();
            }
            for (auto& s : detail::durand_kerner(monic)) {
                double mag = std::abs(s);
                sp.purity_residual = std::max(sp.purity_residual, std::abs(mag - 1.0) * (double)L.q);
                double th = std::atan2(-s.imag(), s.real());
                if (th < 0) th += 2 * M_PI;
                if (th >= 2 * M_PI) th -= 2 * M_PI;
                thetas.push_back({th, mult});
            }
        }
        if (sp.purity_residual > 1e-9 * (double)L.q)
            throw std::runtime_error("spectrum: purity violated beyond tolerance");
        std::sort(thetas.begin(), thetas.end());
        for (size_t i = 0; i < thetas.size();) {
            size_t j = i + 1;
            int mult = thetas[i].second;
            while (j < thetas.size() && thetas[j].first - thetas[j - 1].first <= cluster_tol) {
                mult += thetas[j].second;
                ++j;
            }
            double mean = 0;
            for (size_t k = i; k < j; ++k) mean += thetas[k].first;
            mean /= double(j - i);
            found.push_back({mean, mult});
            i = j;
        }
    }
    std::sort(found.begin(), found.end());
    sp.angles = found;

    // forced zeros from the parity of N and the sign of the functional equation
    if (sp.N % 2 == 1) {
        sp.forced_zeros = {sp.epsilon == -1 ? L.q : -L.q};
    } else if (sp.epsilon == -1) {
        sp.forced_zeros = {L.q, -L.q};
    }
    sp.nontrivial_count = sp.N - int(sp.forced_zeros.size());
    return sp;
}

// sum_j e^{i N theta_j} over the full spectrum (numeric)
inline std::complex<double> zero_phase_sum(const Spectrum& sp, long long X) {
    std::complex<double> s = 0;
    for (auto& [th, m] : sp.angles) s += double(m) * std::polar(1.0, th * double(X));
    return s;
}

struct LIDiagnostic {
    struct Flag {
        double theta;
        long long num, den;  // theta/pi close to num/den
    };
    std::vector<Flag> flagged;
    bool rank_violation = false;
    bool extra_minus_q = false;
    bool violated = false;
    std::string verdict;
};

// Heuristic only: LI cannot be proven numerically.  Flags rational-looking
// angle ratios via continued fractions, rank >= 2, and -q multiplicity
// beyond what the functional equation forces.
inline LIDiagnostic diagnose_rational_angles(const Spectrum& sp, long long denominator_bound = 64,
                                             double tol = 1e-9) {
    LIDiagnostic d;
    for (auto& [theta, mult] : sp.angles) {
        if (theta < 1e-15 || std::abs(theta - M_PI) < 1e-15) continue;
        if (theta > M_PI + 1e-15) continue;  // conjugate of a flagged one
        double x = theta / M_PI;
        // continued fraction convergents
        double v = x;
        long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        for (int it = 0; it < 64; ++it) {
            long long ai = (long long)std::floor(v);
            long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
            if (q2 > denominator_bound) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            if (std::abs(x - double(p1) / double(q1)) < tol) {
                d.flagged.push_back({theta, p1, q1});
                break;
            }
            double frac = v - double(ai);
            if (frac < 1e-18) break;
            v = 1.0 / frac;
        }
    }
    d.rank_violation = sp.rank >= 2;
    long long forced_minus = 0;
    for (long long z : sp.forced_zeros)
        if (z < 0) forced_minus = 1;
    d.extra_minus_q = sp.m_minus_q > forced_minus;
    d.violated = d.rank_violation || d.extra_minus_q || !d.flagged.empty();
    d.verdict = d.violated ? "LI violated (heuristic)" : "LI plausible (not proven)";
    return d;
}

}  // namespace ffrace
