#pragma once

// Polynomials over F_q and the places of the projective line: monic
// irreducibles plus the distinguished place at infinity.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffrace/bigint.hpp"
#include "ffrace/field.hpp"

namespace ffrace {

class PolyFq {
public:
    PolyFq() : F_(nullptr) {}
    explicit PolyFq(const Fq& F) : F_(&F) {}
    PolyFq(const Fq& F, std::vector<felem> coeffs) : F_(&F), c_(std::move(coeffs)) { trim(); }

    static PolyFq zero(const Fq& F) { return PolyFq(F); }
    static PolyFq constant(const Fq& F, felem v) {
        PolyFq r(F);
        if (v) r.c_ = {v};
        return r;
    }
    static PolyFq from_ints(const Fq& F, const std::vector<long long>& ints) {
        PolyFq r(F);
        r.c_.reserve(ints.size());
        for (long long v : ints) r.c_.push_back(F.scalar(v));
        r.trim();
        return r;
    }
    // t^n
    static PolyFq monomial(const Fq& F, int n, felem v) {
        PolyFq r(F);
        if (v) { r.c_.assign(n + 1, 0); r.c_[n] = v; }
        return r;
    }

    const Fq& field() const { return *F_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; }  // -1 for zero
    felem coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : 0; }
    const std::vector<felem>& coeffs() const { return c_; }
    felem lead() const { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == F_->one(); }

    friend bool operator==(const PolyFq& a, const PolyFq& b) { return a.c_ == b.c_; }
    friend bool operator!=(const PolyFq& a, const PolyFq& b) { return !(a == b); }

    friend PolyFq operator+(const PolyFq& a, const PolyFq& b) {
        a.check(b);
        PolyFq r(*a.F_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), 0);
        for (size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = a.F_->add(i < a.c_.size() ? a.c_[i] : 0, i < b.c_.size() ? b.c_[i] : 0);
        r.trim();
        return r;
    }
    friend PolyFq operator-(const PolyFq& a, const PolyFq& b) { return a + b.negated(); }
    PolyFq negated() const {
        PolyFq r = *this;
        for (auto& x : r.c_) x = F_->neg(x);
        return r;
    }
    friend PolyFq operator*(const PolyFq& a, const PolyFq& b) {
        a.check(b);
        PolyFq r(*a.F_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (!a.c_[i]) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                if (b.c_[j]) r.c_[i + j] = a.F_->add(r.c_[i + j], a.F_->mul(a.c_[i], b.c_[j]));
        }
        r.trim();
        return r;
    }
    PolyFq scaled(felem s) const {
        PolyFq r(*F_);
        if (!s) return r;
        r.c_ = c_;
        for (auto& x : r.c_) x = F_->mul(x, s);
        return r;
    }

    static std::pair<PolyFq, PolyFq> divmod(const PolyFq& a, const PolyFq& b) {
        a.check(b);
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        const Fq& F = *a.F_;
        PolyFq q(F), r = a;
        if (a.degree() < b.degree()) return {q, r};
        q.c_.assign(a.degree() - b.degree() + 1, 0);
        felem linv = F.inv(b.lead());
        for (int i = a.degree(); i >= b.degree(); --i) {
            felem cur = r.coeff(i);
            if (!cur) continue;
            felem f = F.mul(cur, linv);
            q.c_[i - b.degree()] = f;
            for (int j = 0; j <= b.degree(); ++j)
                r.c_[i - b.degree() + j] = F.sub(r.c_[i - b.degree() + j], F.mul(f, b.coeff(j)));
        }
        q.trim();
        r.trim();
        return {q, r};
    }
    friend PolyFq operator/(const PolyFq& a, const PolyFq& b) { return divmod(a, b).first; }
    friend PolyFq operator%(const PolyFq& a, const PolyFq& b) { return divmod(a, b).second; }

    PolyFq monic() const {
        if (is_zero() || is_monic()) return *this;
        return scaled(F_->inv(lead()));
    }

    static PolyFq gcd(PolyFq a, PolyFq b) {
        while (!b.is_zero()) {
            PolyFq r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    felem eval(felem x) const {
        felem acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
        return acc;
    }

    PolyFq derivative() const {
        PolyFq r(*F_);
        if (degree() < 1) return r;
        r.c_.resize(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = F_->mul(c_[i], F_->scalar((long long)i));
        r.trim();
        return r;
    }

    // reverse-substitute t -> 1/u and clear with u^n (n >= degree)
    PolyFq reversed(int n) const {
        PolyFq r(*F_);
        if (is_zero()) return r;
        r.c_.assign(n + 1, 0);
        for (size_t i = 0; i < c_.size(); ++i) r.c_[n - i] = c_[i];
        r.trim();
        return r;
    }

    // substitute t -> t + s
    PolyFq shifted(felem s) const {
        const Fq& F = *F_;
        PolyFq r = PolyFq::zero(F);
        PolyFq lin(F, {s, F.one()});
        for (size_t i = c_.size(); i-- > 0;) r = r * lin + PolyFq::constant(F, c_[i]);
        return r;
    }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            felem ci = coeff(i);
            if (!ci) continue;
            if (!s.empty()) s += "+";
            long long d = F_->dense(ci);
            bool unit = (d == 1);
            if (i == 0 || !unit || F_->k() > 1) s += (F_->k() > 1 ? "[" + std::to_string(d) + "]" : std::to_string(d));
            if (i >= 1) {
                if (!unit || F_->k() > 1) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

    // dense encoding of the coefficient vector (lexicographic enumeration key)
    long long dense_key() const {
        long long v = 0;
        for (size_t i = c_.size(); i-- > 0;) v = v * F_->q() + F_->dense(c_[i]);
        return v;
    }

private:
    const Fq* F_;
    std::vector<felem> c_;  // low degree first, trimmed

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    void check(const PolyFq& o) const {
        if (F_ != o.F_) throw std::invalid_argument("polynomials over mixed field contexts");
    }
};

inline PolyFq powmod(const PolyFq& base, long long e, const PolyFq& mod) {
    const Fq& F = base.field();
    PolyFq r = PolyFq::constant(F, F.one());
    PolyFq b = base % mod;
    while (e) {
        if (e & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        e >>= 1;
    }
    return r;
}

// t^(q^m) mod f, by iterating the q-power map
inline PolyFq frobenius_power_mod(const PolyFq& f, int m) {
    const Fq& F = f.field();
    PolyFq x = PolyFq::monomial(F, 1, F.one()) % f;
    for (int i = 0; i < m; ++i) x = powmod(x, F.q(), f);
    return x;
}

// Rabin test: f irreducible iff t^(q^n) = t mod f and gcd(t^(q^(n/l)) - t, f) = 1
// for each prime l | n.
inline bool is_irreducible(const PolyFq& f) {
    if (f.is_zero()) throw std::domain_error("is_irreducible: zero polynomial");
    const Fq& F = f.field();
    int n = f.degree();
    if (n == 0) return false;
    if (n == 1) return true;
    if (f.coeff(0) == 0) return false;  // divisible by t
    if (F.q() <= 32) {
        // root scan rejects anything with a linear factor cheaply
        for (long long i = 0; i < F.q(); ++i)
            if (f.eval(F.element(i)) == 0) return false;
        if (n <= 3) return true;  // no linear factor suffices up to cubics
    }
    PolyFq t = PolyFq::monomial(F, 1, F.one());
    for (long long l : prime_factors_ll(n)) {
        PolyFq x = frobenius_power_mod(f, int(n / l));
        if (PolyFq::gcd(x - t, f).degree() != 0) return false;
    }
    PolyFq x = frobenius_power_mod(f, n);
    return (x - t % f).is_zero();
}

// Exhaustive oracle: trial division by every monic polynomial of lower degree.
inline bool is_irreducible_trial(const PolyFq& f) {
    if (f.is_zero()) throw std::domain_error("is_irreducible: zero polynomial");
    const Fq& F = f.field();
    int n = f.degree();
    if (n == 0) return false;
    for (int d = 1; d <= n / 2; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= F.q();
        for (long long v = 0; v < count; ++v) {
            std::vector<felem> g(d + 1);
            long long w = v;
            for (int i = 0; i < d; ++i) { g[i] = F.element(w % F.q()); w /= F.q(); }
            g[d] = F.one();
            if ((f % PolyFq(F, g)).is_zero()) return false;
        }
    }
    return true;
}

struct Place {
    bool infinite = false;
    PolyFq gen;  // monic irreducible; empty for the infinite place
    int degree = 1;

    std::string name() const { return infinite ? "inf" : gen.to_string(); }
};

// All monic polynomials of degree d in deterministic (dense-key) order.
template <typename Fn>
inline void for_each_monic(const Fq& F, int d, Fn&& fn) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= F.q();
    std::vector<felem> c(d + 1);
    c[d] = F.one();
    for (long long v = 0; v < count; ++v) {
        long long w = v;
        for (int i = 0; i < d; ++i) { c[i] = F.element(w % F.q()); w /= F.q(); }
        fn(PolyFq(F, c));
    }
}

// Places of exact degree d: the infinite place first (d = 1 only), then finite
// places by ascending dense key of the generator.
inline std::vector<Place> places_of_degree(const Fq& F, int d, const WorkBounds& wb = {}) {
    if (d < 1) throw std::invalid_argument("places_of_degree: d >= 1 required");
    if (d > wb.max_place_degree)
        throw WorkBoundError("max_place_degree", "place degree " + std::to_string(d) +
                                                     " exceeds the work bound");
    std::vector<Place> out;
    if (d == 1) out.push_back(Place{true, PolyFq(F), 1});
    for_each_monic(F, d, [&](const PolyFq& f) {
        if (is_irreducible(f)) out.push_back(Place{false, f, d});
    });
    return out;
}

inline long long mobius_ll(long long n) {
    long long r = 1;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            r = -r;
        }
    }
    if (n > 1) r = -r;
    return r;
}

// (1/d) sum_{e|d} mu(e) q^(d/e): the number of monic irreducibles of degree d
inline BigInt mobius_place_count(long long q, int d) {
    BigInt total(0);
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        long long mu = mobius_ll(e);
        if (!mu) continue;
        BigInt term = BigInt::pow(BigInt(q), (unsigned long long)(d / e));
        total = (mu > 0) ? total + term : total - term;
    }
    BigInt qq, rr;
    BigInt::divmod(total, BigInt(d), qq, rr);
    if (!rr.is_zero()) throw std::logic_error("mobius count not divisible by d");
    return qq;
}

struct PlaceCount {
    long long count;          // places of degree d, infinite place included at d = 1
    long long finite_count;   // monic irreducibles of degree d
    double residual;          // |count - q^d / d|
    double bound;             // (2g+1)/(1-1/q) * q^(d/2), g = 0
    bool within_bound;
};

inline PlaceCount count_places(const Fq& F, int d, const WorkBounds& wb = {}) {
    if (d < 1) throw std::invalid_argument("count_places: d >= 1 required");
    long long finite = 0;
    if (d <= wb.max_place_degree) {
        for_each_monic(F, d, [&](const PolyFq& f) {
            if (is_irreducible(f)) ++finite;
        });
    } else {
        finite = mobius_place_count(F.q(), d).to_int64();
    }
    long long total = finite + (d == 1 ? 1 : 0);
    long long q = F.q();
    // exact comparison: (count*d - q^d)^2 * (q-1)^2 <= q^(d+2) * d^2
    BigInt lhs = BigInt(total).mul_small(uint32_t(d)) - BigInt::pow(BigInt(q), (unsigned long long)d);
    BigInt l2 = lhs * lhs * BigInt((q - 1) * (q - 1));
    BigInt r2 = BigInt::pow(BigInt(q), (unsigned long long)(d + 2)).mul_small(uint32_t(d * d));
    PlaceCount pc;
    pc.count = total;
    pc.finite_count = finite;
    pc.residual = std::abs(total - std::pow((double)q, d) / d);
    pc.bound = std::pow((double)q, d / 2.0) / (1.0 - 1.0 / q);
    pc.within_bound = l2 <= r2;
    return pc;
}

}  // namespace ffrace
