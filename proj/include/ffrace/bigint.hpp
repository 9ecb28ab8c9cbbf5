#pragma once

// Arbitrary-precision signed integers and rationals, sized for exact
// L-polynomial coefficients and Q(sqrt(q)) sign decisions.  Limbs are
// base 10^9, which keeps decimal printing trivial.

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffrace {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { sign_ = -1; }
        else if (v > 0) { sign_ = 1; }
        unsigned long long m = (v < 0) ? -(unsigned long long)v : (unsigned long long)v;
        while (m) { limbs_.push_back(uint32_t(m % kBase)); m /= kBase; }
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        int sg = 1;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) { sg = (s[i] == '-') ? -1 : 1; ++i; }
        if (i >= s.size()) throw std::invalid_argument("BigInt: empty string");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r = r.mul_small(10);
            r = r + BigInt(s[i] - '0');
        }
        if (!r.limbs_.empty()) r.sign_ = sg;
        return r;
    }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }

    BigInt operator-() const { BigInt r = *this; r.sign_ = -r.sign_; return r; }
    BigInt abs() const { BigInt r = *this; if (r.sign_ < 0) r.sign_ = 1; return r; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.sign_ == b.sign_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.sign_ >= 0 ? c : -c;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a.limbs_, b.limbs_);
            if (c == 0) return BigInt();
            if (c > 0) { r.limbs_ = sub_mag(a.limbs_, b.limbs_); r.sign_ = a.sign_; }
            else       { r.limbs_ = sub_mag(b.limbs_, a.limbs_); r.sign_ = b.sign_; }
        }
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = r.limbs_[i + j] + (uint64_t)a.limbs_[i] * b.limbs_[j] + carry;
                r.limbs_[i + j] = uint32_t(cur % kBase);
                carry = cur / kBase;
            }
            size_t j = b.limbs_.size();
            while (carry) {
                uint64_t cur = r.limbs_[i + j] + carry;
                r.limbs_[i + j] = uint32_t(cur % kBase);
                carry = cur / kBase;
                ++j;
            }
        }
        r.trim();
        r.sign_ = a.sign_ * b.sign_;
        if (r.limbs_.empty()) r.sign_ = 0;
        return r;
    }

    BigInt mul_small(uint32_t m) const {
        if (sign_ == 0 || m == 0) return BigInt();
        BigInt r;
        r.sign_ = sign_;
        uint64_t carry = 0;
        r.limbs_.reserve(limbs_.size() + 1);
        for (uint32_t l : limbs_) {
            uint64_t cur = (uint64_t)l * m + carry;
            r.limbs_.push_back(uint32_t(cur % kBase));
            carry = cur / kBase;
        }
        while (carry) { r.limbs_.push_back(uint32_t(carry % kBase)); carry /= kBase; }
        return r;
    }

    // Quotient truncated toward zero; remainder has the dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
        if (cmp_mag(a.limbs_, b.limbs_) < 0) { q = BigInt(); r = a; return; }
        if (b.limbs_.size() == 1) {
            uint32_t d = b.limbs_[0];
            q.limbs_.assign(a.limbs_.size(), 0);
            uint64_t rem = 0;
            for (size_t i = a.limbs_.size(); i-- > 0;) {
                uint64_t cur = rem * kBase + a.limbs_[i];
                q.limbs_[i] = uint32_t(cur / d);
                rem = cur % d;
            }
            q.trim();
            q.sign_ = q.limbs_.empty() ? 0 : a.sign_ * b.sign_;
            r = BigInt((long long)rem);
            if (r.sign_ != 0) r.sign_ = a.sign_;
            return;
        }
        // Knuth-style long division: scale so the divisor's top limb is at
        // least kBase/2, making the two-limb trial quotient off by <= 2.
        uint32_t scale = uint32_t(kBase / ((uint64_t)b.limbs_.back() + 1));
        std::vector<uint32_t> bn = scale > 1 ? mul_mag_small(b.limbs_, scale) : b.limbs_;
        std::vector<uint32_t> rem;
        std::vector<uint32_t> quo(a.limbs_.size(), 0);
        std::vector<uint32_t> an = scale > 1 ? mul_mag_small(a.limbs_, scale) : a.limbs_;
        for (size_t i = an.size(); i-- > 0;) {
            rem.insert(rem.begin(), an[i]);
            trim_vec(rem);
            if (cmp_mag(rem, bn) < 0) {
                if (i < quo.size()) quo[i] = 0;
                continue;
            }
            uint64_t top = 0;
            size_t nb = bn.size(), nr = rem.size();
            if (nr == nb)
                top = (uint64_t)rem[nr - 1];
            else
                top = (uint64_t)rem[nr - 1] * kBase + rem[nr - 2];
            uint64_t qt = top / bn[nb - 1];
            if (qt >= kBase) qt = kBase - 1;
            std::vector<uint32_t> prod = mul_mag_small(bn, uint32_t(qt));
            while (cmp_mag(prod, rem) > 0) { --qt; prod = mul_mag_small(bn, uint32_t(qt)); }
            std::vector<uint32_t> next = sub_mag(rem, prod);
            while (cmp_mag(next, bn) >= 0) {
                ++qt;
                next = sub_mag(next, bn);
            }
            rem = next;
            if (i < quo.size()) quo[i] = uint32_t(qt);
        }
        q.limbs_ = quo;
        q.trim();
        q.sign_ = q.limbs_.empty() ? 0 : a.sign_ * b.sign_;
        // undo the normalization on the remainder
        if (scale > 1) {
            uint64_t carry = 0;
            for (size_t i = rem.size(); i-- > 0;) {
                uint64_t cur = carry * kBase + rem[i];
                rem[i] = uint32_t(cur / scale);
                carry = cur % scale;
            }
        }
        r.limbs_ = rem;
        r.trim();
        r.sign_ = r.limbs_.empty() ? 0 : a.sign_;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.sign_ = a.limbs_.empty() ? 0 : 1;
        b.sign_ = b.limbs_.empty() ? 0 : 1;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    static BigInt pow(BigInt base, unsigned long long e) {
        BigInt r(1);
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    bool fits_int64() const {
        static const BigInt lo = BigInt::from_string("-9223372036854775808");
        static const BigInt hi = BigInt::from_string("9223372036854775807");
        return *this >= lo && *this <= hi;
    }
    long long to_int64() const {
        if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
        long long v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * (long long)kBase + limbs_[i];
        return sign_ < 0 ? -v : v;
    }

    double to_double() const {
        double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
        return sign_ < 0 ? -v : v;
    }
    long double to_long_double() const {
        long double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
        return sign_ < 0 ? -v : v;
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        std::string s = sign_ < 0 ? "-" : "";
        s += std::to_string(limbs_.back());
        char buf[16];
        for (size_t i = limbs_.size() - 1; i-- > 0;) {
            std::snprintf(buf, sizeof buf, "%09u", limbs_[i]);
            s += buf;
        }
        return s;
    }

    bool is_even() const { return limbs_.empty() || (limbs_[0] % 2 == 0); }

private:
    static constexpr uint32_t kBase = 1000000000u;
    std::vector<uint32_t> limbs_;  // little-endian, no leading zeros
    int sign_ = 0;

    void trim() { trim_vec(limbs_); if (limbs_.empty()) sign_ = 0; }
    static void trim_vec(std::vector<uint32_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    }
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r;
        r.reserve(std::max(a.size(), b.size()) + 1);
        uint64_t carry = 0;
        for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
            uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r.push_back(uint32_t(cur % kBase));
            carry = cur / kBase;
        }
        if (carry) r.push_back(uint32_t(carry));
        return r;
    }
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = (int64_t)r[i] - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) { cur += kBase; borrow = 1; } else borrow = 0;
            r[i] = uint32_t(cur);
        }
        trim_vec(r);
        return r;
    }
    static std::vector<uint32_t> mul_mag_small(const std::vector<uint32_t>& a, uint32_t m) {
        std::vector<uint32_t> r;
        r.reserve(a.size() + 1);
        uint64_t carry = 0;
        for (uint32_t l : a) {
            uint64_t cur = (uint64_t)l * m + carry;
            r.push_back(uint32_t(cur % kBase));
            carry = cur / kBase;
        }
        while (carry) { r.push_back(uint32_t(carry % kBase)); carry /= kBase; }
        trim_vec(r);
        return r;
    }
};

// Exact rational with normalized representation (den > 0, gcd(num,den) = 1).
class BigRat {
public:
    BigRat() : num_(0), den_(1) {}
    BigRat(long long v) : num_(v), den_(1) {}
    BigRat(BigInt n) : num_(std::move(n)), den_(1) {}
    BigRat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    BigRat(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static BigRat from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return BigRat(BigInt::from_string(s));
        return BigRat(BigInt::from_string(s.substr(0, slash)),
                      BigInt::from_string(s.substr(slash + 1)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }
    bool is_integer() const { return den_ == BigInt(1); }

    friend BigRat operator+(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRat operator-(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRat operator*(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        if (b.is_zero()) throw std::domain_error("BigRat: division by zero");
        return BigRat(a.num_ * b.den_, a.den_ * b.num_);
    }
    BigRat operator-() const { BigRat r = *this; r.num_ = -r.num_; return r; }

    friend bool operator==(const BigRat& a, const BigRat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const BigRat& a, const BigRat& b) { return !(a == b); }
    friend bool operator<(const BigRat& a, const BigRat& b) { return (a - b).sign() < 0; }
    friend bool operator>(const BigRat& a, const BigRat& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const BigRat& a, const BigRat& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const BigRat& a, const BigRat& b) { return (a - b).sign() >= 0; }

    double to_double() const {
        return double(num_.to_long_double() / den_.to_long_double());
    }

    std::string to_string() const {
        if (is_integer()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    BigInt num_, den_;
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("BigRat: zero denominator");
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        if (den_.sign() < 0) { num_ = -num_; den_ = -den_; }
        BigInt g = BigInt::gcd(num_, den_);
        num_ = num_ / g;
        den_ = den_ / g;
    }
};

}  // namespace ffrace
