#pragma once

// Arithmetic in F_q, q = p^k.  Elements are stored in a canonical packed
// code: the low ceil(k/2) base-p digits in the low bits, the remaining
// digits shifted above them.  Addition goes through two half-tables,
// multiplication through log/exp tables with a zero sentinel, so the
// reduction sweeps over residue fields stay branch-free.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffrace {

using felem = uint32_t;

struct WorkBoundError : std::runtime_error {
    std::string bound_name;
    WorkBoundError(std::string name, const std::string& msg)
        : std::runtime_error(msg), bound_name(std::move(name)) {}
};

struct WorkBounds {
    long long max_residue_field = 729;      // q_v cap for exhaustive point counts (3^6)
    long long max_field_size = 1ll << 21;   // cap for table-backed field construction
    int max_place_degree = 16;              // cap for place enumeration
};

inline bool is_prime_ll(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long long> prime_factors_ll(long long n) {
    std::vector<long long> out;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

class Fq {
public:
    Fq(long long p, int k, long long max_field_size = (1ll << 21)) : p_(p), k_(k) {
        if (!is_prime_ll(p)) throw std::invalid_argument("make_field: p is not prime");
        if (k < 1) throw std::invalid_argument("make_field: k must be >= 1");
        q_ = 1;
        for (int i = 0; i < k; ++i) {
            q_ *= p;
            if (q_ > max_field_size)
                throw WorkBoundError("max_field_size",
                                     "field F_" + std::to_string(p) + "^" + std::to_string(k) +
                                         " exceeds the table work bound");
        }
        choose_modulus();
        build_layout();
        build_add_tables();
        build_log_tables();
        if (p_ == 2) build_trace_table();
    }

    Fq(const Fq&) = delete;
    Fq& operator=(const Fq&) = delete;

    long long p() const { return p_; }
    int k() const { return k_; }
    long long q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    felem zero() const { return 0; }
    felem one() const { return one_; }

    // canonical enumeration order: dense index 0..q-1
    felem element(long long dense) const { return dense2code_[dense]; }
    long long dense(felem x) const { return code2dense_[x]; }

    felem from_digits(const std::vector<int>& d) const {
        long long v = 0;
        for (size_t i = k_; i-- > 0;) {
            int c = i < d.size() ? ((d[i] % (int)p_) + (int)p_) % (int)p_ : 0;
            v = v * p_ + c;
        }
        return dense2code_[v];
    }
    std::vector<int> digits(felem x) const {
        long long v = code2dense_[x];
        std::vector<int> d(k_);
        for (int i = 0; i < k_; ++i) { d[i] = int(v % p_); v /= p_; }
        return d;
    }
    felem scalar(long long c) const {
        c %= p_;
        if (c < 0) c += p_;
        return dense2code_[c];
    }

    felem add(felem a, felem b) const {
        return add_hi_[(a >> bits_) * phi_ + (b >> bits_)] |
               add_lo_[(a & mask_) * plo_ + (b & mask_)];
    }
    felem neg(felem a) const { return neg_[a]; }
    felem sub(felem a, felem b) const { return add(a, neg_[b]); }
    felem mul(felem a, felem b) const { return exp_[log_[a] + log_[b]]; }
    felem inv(felem a) const {
        if (a == 0) throw std::domain_error("field inverse of zero");
        return exp_[(uint32_t)(q_ - 1) - log_[a]];
    }
    felem pow(felem a, long long e) const {
        if (a == 0) {
            if (e == 0) return one_;
            if (e < 0) throw std::domain_error("field inverse of zero");
            return 0;
        }
        long long m = q_ - 1;
        long long r = e % m;
        if (r < 0) r += m;
        return exp_[(uint64_t)log_[a] * (uint64_t)r % (uint64_t)m];
    }
    felem frobenius(felem a) const { return pow(a, p_); }

    // quadratic character, p odd: +1 square, -1 nonsquare, 0 at zero
    int chi(felem a) const {
        if (p_ == 2) throw std::domain_error("quadratic character undefined in char 2");
        if (a == 0) return 0;
        return (log_[a] & 1) ? -1 : 1;
    }
    // absolute trace to F_2 (char 2 only)
    int trace2(felem a) const { return tr2_[a]; }

    // raw tables for sweep kernels
    uint32_t zlog() const { return zlog_; }
    const uint32_t* log_data() const { return log_.data(); }
    const felem* exp_data() const { return exp_.data(); }
    size_t code_span() const { return code_span_; }
    uint32_t log_of(felem a) const { return log_[a]; }
    felem exp_at(uint32_t i) const { return exp_[i]; }

    const std::vector<felem>& sq_table() const {
        if (sq_.empty()) {
            auto* self = const_cast<Fq*>(this);
            self->sq_.assign(code_span_, 0);
            self->cu_.assign(code_span_, 0);
            for (long long i = 0; i < q_; ++i) {
                felem x = dense2code_[i];
                felem s = mul(x, x);
                self->sq_[x] = s;
                self->cu_[x] = mul(s, x);
            }
        }
        return sq_;
    }
    const std::vector<felem>& cu_table() const { sq_table(); return cu_; }

    // image of each element of `base` (by dense index) inside this field;
    // requires same p and base.k | k
    std::vector<felem> embedding_of(const Fq& base) const {
        if (base.p_ != p_ || k_ % base.k_ != 0)
            throw std::invalid_argument("embedding: incompatible fields");
        // smallest root of the base modulus in this field
        felem rho = 0;
        bool found = false;
        for (long long i = 0; i < q_ && !found; ++i) {
            felem x = dense2code_[i];
            felem acc = 0;
            for (int j = base.k_; j >= 0; --j) acc = add(mul(acc, x), scalar(base.modulus_[j]));
            if (acc == 0) { rho = x; found = true; }
        }
        if (!found) throw std::logic_error("embedding: base modulus has no root");
        std::vector<felem> rho_pow(base.k_);
        rho_pow[0] = one_;
        for (int i = 1; i < base.k_; ++i) rho_pow[i] = mul(rho_pow[i - 1], rho);
        std::vector<felem> img(base.q_);
        for (long long i = 0; i < base.q_; ++i) {
            long long v = i;
            felem acc = 0;
            for (int j = 0; j < base.k_; ++j) {
                int c = int(v % base.p_);
                v /= base.p_;
                if (c) acc = add(acc, mul(scalar(c), rho_pow[j]));
            }
            img[i] = acc;
        }
        return img;
    }

private:
    long long p_, q_;
    int k_;
    std::vector<int> modulus_;  // k+1 ints, monic
    int hlo_ = 0;               // digits in the low half
    long long plo_ = 1, phi_ = 1;
    uint32_t bits_ = 0, mask_ = 0;
    size_t code_span_ = 0;
    felem one_ = 0;
    uint32_t zlog_ = 0;
    std::vector<felem> dense2code_;
    std::vector<uint32_t> code2dense_;
    std::vector<felem> add_lo_, add_hi_, neg_, exp_;
    std::vector<uint32_t> log_;
    std::vector<uint8_t> tr2_;
    std::vector<felem> sq_, cu_;

    // ---- digit-level helpers used only during construction ----
    using Digits = std::vector<int>;  // size k_

    Digits dig_add(const Digits& a, const Digits& b) const {
        Digits r(k_);
        for (int i = 0; i < k_; ++i) { r[i] = a[i] + b[i]; if (r[i] >= p_) r[i] -= (int)p_; }
        return r;
    }
    Digits dig_mul(const Digits& a, const Digits& b) const {
        std::vector<long long> t(2 * k_ - 1, 0);
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j) t[i + j] += (long long)a[i] * b[j];
        // reduce by the monic modulus
        for (int i = 2 * k_ - 2; i >= k_; --i) {
            long long c = t[i] % p_;
            if (c == 0) continue;
            for (int j = 0; j < k_; ++j) t[i - k_ + j] -= c * modulus_[j];
            t[i] = 0;
        }
        Digits r(k_);
        for (int i = 0; i < k_; ++i) r[i] = int(((t[i] % p_) + p_) % p_);
        return r;
    }
    long long dig_dense(const Digits& d) const {
        long long v = 0;
        for (int i = k_; i-- > 0;) v = v * p_ + d[i];
        return v;
    }
    Digits dense_dig(long long v) const {
        Digits d(k_);
        for (int i = 0; i < k_; ++i) { d[i] = int(v % p_); v /= p_; }
        return d;
    }

    void choose_modulus() {
        modulus_.assign(k_ + 1, 0);
        modulus_[k_] = 1;
        if (k_ == 1) return;  // t itself
        long long total = 1;
        for (int i = 0; i < k_; ++i) total *= p_;
        for (long long low = 0; low < total; ++low) {
            long long v = low;
            for (int i = 0; i < k_; ++i) { modulus_[i] = int(v % p_); v /= p_; }
            if (modulus_irreducible()) return;
        }
        throw std::logic_error("no irreducible modulus found");
    }
    // trial division by all monic polynomials of degree <= k/2
    bool modulus_irreducible() const {
        if (modulus_[0] == 0) return false;
        for (int dd = 1; dd <= k_ / 2; ++dd) {
            long long count = 1;
            for (int i = 0; i < dd; ++i) count *= p_;
            std::vector<int> g(dd + 1);
            g[dd] = 1;
            for (long long low = 0; low < count; ++low) {
                long long v = low;
                for (int i = 0; i < dd; ++i) { g[i] = int(v % p_); v /= p_; }
                // remainder of modulus_ mod g
                std::vector<long long> r(modulus_.begin(), modulus_.end());
                for (int i = k_; i >= dd; --i) {
                    long long c = ((r[i] % p_) + p_) % p_;
                    if (c == 0) continue;
                    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= c * g[j];
                }
                bool zero = true;
                for (int i = 0; i < dd; ++i)
                    if (((r[i] % p_) + p_) % p_ != 0) { zero = false; break; }
                if (zero) return false;
            }
        }
        return true;
    }

    void build_layout() {
        hlo_ = (k_ + 1) / 2;
        plo_ = 1;
        for (int i = 0; i < hlo_; ++i) plo_ *= p_;
        phi_ = q_ / plo_;
        bits_ = 1;
        while ((1ll << bits_) < plo_) ++bits_;
        mask_ = (1u << bits_) - 1;
        code_span_ = size_t((phi_ - 1) << bits_) + size_t(plo_);
        dense2code_.resize(q_);
        code2dense_.assign(code_span_, 0);
        for (long long v = 0; v < q_; ++v) {
            felem code = felem((v / plo_) << bits_ | (v % plo_));
            dense2code_[v] = code;
            code2dense_[code] = uint32_t(v);
        }
        one_ = dense2code_[1];
    }

    void build_add_tables() {
        add_lo_.assign(size_t(plo_ * plo_), 0);
        add_hi_.assign(size_t(phi_ * phi_), 0);
        neg_.assign(code_span_, 0);
        auto add_part = [&](long long x, long long y, long long ndig) {
            long long r = 0, mult = 1;
            for (int i = 0; i < ndig; ++i) {
                long long s = x % p_ + y % p_;
                if (s >= p_) s -= p_;
                r += s * mult;
                mult *= p_;
                x /= p_;
                y /= p_;
            }
            return r;
        };
        for (long long x = 0; x < plo_; ++x)
            for (long long y = 0; y < plo_; ++y)
                add_lo_[x * plo_ + y] = felem(add_part(x, y, hlo_));
        for (long long x = 0; x < phi_; ++x)
            for (long long y = 0; y < phi_; ++y)
                add_hi_[x * phi_ + y] = felem(add_part(x, y, k_ - hlo_) << bits_);
        for (long long v = 0; v < q_; ++v) {
            Digits d = dense_dig(v);
            for (auto& c : d) c = c ? int(p_) - c : 0;
            neg_[dense2code_[v]] = dense2code_[dig_dense(d)];
        }
    }

    void build_log_tables() {
        long long m = q_ - 1;
        zlog_ = uint32_t(2 * m);
        exp_.assign(size_t(4 * m + 2), 0);
        log_.assign(code_span_, zlog_);
        if (m == 0) { exp_[0] = one_; return; }  // F_2 edge: handled below anyway
        Digits g = find_generator();
        Digits cur(k_, 0);
        cur[0] = 1;
        for (long long i = 0; i < m; ++i) {
            felem code = dense2code_[dig_dense(cur)];
            log_[code] = uint32_t(i);
            exp_[i] = code;
            exp_[i + m] = code;
            cur = dig_mul(cur, g);
        }
        // indices >= 2m stay 0: they encode multiplication by zero
        log_[0] = zlog_;
    }

    Digits find_generator() const {
        long long m = q_ - 1;
        auto factors = prime_factors_ll(m);
        for (long long v = 1; v < q_; ++v) {
            Digits g = dense_dig(v);
            bool ok = true;
            for (long long f : factors) {
                if (dig_pow_is_one(g, m / f)) { ok = false; break; }
            }
            if (ok) return g;
        }
        throw std::logic_error("no generator found");
    }
    bool dig_pow_is_one(const Digits& g, long long e) const {
        Digits r(k_, 0);
        r[0] = 1;
        Digits b = g;
        while (e) {
            if (e & 1) r = dig_mul(r, b);
            b = dig_mul(b, b);
            e >>= 1;
        }
        for (int i = 1; i < k_; ++i)
            if (r[i] != 0) return false;
        return r[0] == 1;
    }

    void build_trace_table() {
        tr2_.assign(code_span_, 0);
        for (long long v = 0; v < q_; ++v) {
            felem x = dense2code_[v];
            felem acc = x, f = x;
            for (int i = 1; i < k_; ++i) {
                f = mul(f, f);  // p = 2
                acc = add(acc, f);
            }
            tr2_[x] = uint8_t(acc == one_ ? 1 : 0);
        }
    }
};

inline bool fits_work_bound(long long p, int extension_degree, long long cap) {
    long long v = 1;
    for (int i = 0; i < extension_degree; ++i) {
        v *= p;
        if (v > cap) return false;
    }
    return true;
}

}  // namespace ffrace
