#pragma once

// Exact arithmetic in Q(sqrt(q)).  Values are a + b*sqrt(q) with rational
// a, b; when q is a perfect square the sqrt part collapses into a.  Signs
// are decided exactly, which is what makes boundary classes of the race
// series rigorous.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ffrace/bigint.hpp"

namespace ffrace {

inline long long isqrt_ll(long long n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    long long r = (long long)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

class QSqrt {
public:
    QSqrt() : q_(1), a_(0), b_(0), sq_(1) {}
    explicit QSqrt(long long q, BigRat a = BigRat(0), BigRat b = BigRat(0))
        : q_(q), a_(std::move(a)), b_(std::move(b)) {
        if (q <= 0) throw std::domain_error("QSqrt: q must be positive");
        long long r = isqrt_ll(q);
        sq_ = (r * r == q) ? r : 0;
        if (sq_ && !b_.is_zero()) { a_ = a_ + b_ * BigRat(sq_); b_ = BigRat(0); }
    }

    static QSqrt rational(long long q, BigRat a) { return QSqrt(q, std::move(a)); }
    // value * sqrt(q)
    static QSqrt root_multiple(long long q, BigRat b) { return QSqrt(q, BigRat(0), std::move(b)); }

    long long q() const { return q_; }
    const BigRat& a() const { return a_; }
    const BigRat& b() const { return b_; }
    bool is_rational() const { return b_.is_zero(); }

    friend QSqrt operator+(const QSqrt& x, const QSqrt& y) {
        x.check(y);
        return QSqrt(x.q_, x.a_ + y.a_, x.b_ + y.b_);
    }
    friend QSqrt operator-(const QSqrt& x, const QSqrt& y) {
        x.check(y);
        return QSqrt(x.q_, x.a_ - y.a_, x.b_ - y.b_);
    }
    QSqrt operator-() const { return QSqrt(q_, -a_, -b_); }
    friend QSqrt operator*(const QSqrt& x, const QSqrt& y) {
        x.check(y);
        return QSqrt(x.q_, x.a_ * y.a_ + x.b_ * y.b_ * BigRat(x.q_),
                     x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend QSqrt operator/(const QSqrt& x, const QSqrt& y) {
        x.check(y);
        // multiply by the conjugate; the norm a^2 - b^2 q vanishes only at 0
        BigRat n = y.a_ * y.a_ - y.b_ * y.b_ * BigRat(y.q_);
        if (n.is_zero()) throw std::domain_error("QSqrt: division by zero");
        QSqrt conj(y.q_, y.a_, -y.b_);
        QSqrt num = x * conj;
        return QSqrt(x.q_, num.a_ / n, num.b_ / n);
    }

    friend bool operator==(const QSqrt& x, const QSqrt& y) {
        return x.q_ == y.q_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QSqrt& x, const QSqrt& y) { return !(x == y); }

    // Exact sign of a + b*sqrt(q).
    int sign() const {
        if (b_.is_zero()) return a_.sign();
        if (a_.is_zero()) return b_.sign();
        if (a_.sign() == b_.sign()) return a_.sign();
        BigRat aa = a_ * a_;
        BigRat bbq = b_ * b_ * BigRat(q_);
        int c = aa > bbq ? 1 : (aa < bbq ? -1 : 0);
        if (c == 0) return 0;  // only possible when q is a square (collapsed earlier)
        return c > 0 ? a_.sign() : b_.sign();
    }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

    double to_double() const {
        return a_.to_double() + b_.to_double() * std::sqrt((double)q_);
    }

    std::string to_string() const {
        if (b_.is_zero()) return a_.to_string();
        return a_.to_string() + " + (" + b_.to_string() + ")*sqrt(" + std::to_string(q_) + ")";
    }

private:
    long long q_;
    BigRat a_, b_;
    long long sq_;  // sqrt(q) if q is a perfect square, else 0

    void check(const QSqrt& o) const {
        if (q_ != o.q_) throw std::invalid_argument("QSqrt: mixed radicands");
    }
};

// q^(-j/2) as an exact QSqrt: rational for even j, (1/q^((j+1)/2)) * sqrt(q) odd.
inline QSqrt q_pow_neg_half(long long q, long long j) {
    if (j < 0) throw std::domain_error("q_pow_neg_half: j >= 0 expected");
    if (j % 2 == 0)
        return QSqrt(q, BigRat(BigInt(1), BigInt::pow(BigInt(q), (unsigned long long)(j / 2))));
    return QSqrt(q, BigRat(0),
                 BigRat(BigInt(1), BigInt::pow(BigInt(q), (unsigned long long)((j + 1) / 2))));
}

}  // namespace ffrace
