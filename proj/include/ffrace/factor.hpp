#pragma once

// Factorization of polynomials over F_q (odd q): squarefree split,
// distinct-degree, then Cantor-Zassenhaus equal-degree splitting with a
// seeded generator so results are reproducible.

#include <cstdint>
#include <map>
#include <vector>

#include "ffrace/poly.hpp"

namespace ffrace {

namespace detail {

inline PolyFq random_poly(const Fq& F, int deg_bound, uint64_t& state) {
    std::vector<felem> c(deg_bound + 1);
    for (auto& x : c) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        x = F.element((long long)((state >> 33) % (uint64_t)F.q()));
    }
    return PolyFq(F, c);
}

// split a product of irreducibles of common degree d
inline void equal_degree(const PolyFq& f, int d, std::vector<PolyFq>& out, uint64_t& state) {
    const Fq& F = f.field();
    if (f.degree() == d) { out.push_back(f.monic()); return; }
    if (F.p() == 2) throw std::domain_error("factor: equal-degree splitting requires odd q");
    // exponent (q^d - 1)/2 as a bigint-free repeated squaring
    BigInt e = (BigInt::pow(BigInt(F.q()), (unsigned long long)d) - BigInt(1)) / BigInt(2);
    while (true) {
        PolyFq r = random_poly(F, f.degree() - 1, state);
        if (r.degree() < 1) continue;
        PolyFq g = PolyFq::gcd(r, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, out, state);
            equal_degree(f / g, d, out, state);
            return;
        }
        // r^e mod f via bit decomposition of e
        PolyFq acc = PolyFq::constant(F, F.one());
        PolyFq base = r % f;
        BigInt m = e;
        while (!m.is_zero()) {
            if (!m.is_even()) acc = (acc * base) % f;
            base = (base * base) % f;
            m = m / BigInt(2);
        }
        PolyFq h = PolyFq::gcd(acc - PolyFq::constant(F, F.one()), f);
        if (h.degree() > 0 && h.degree() < f.degree()) {
            equal_degree(h, d, out, state);
            equal_degree(f / h, d, out, state);
            return;
        }
    }
}

inline void factor_squarefree_monic(const PolyFq& f, std::vector<PolyFq>& out, uint64_t& state) {
    const Fq& F = f.field();
    PolyFq rest = f;
    PolyFq x = PolyFq::monomial(F, 1, F.one());
    PolyFq xq = x % rest;
    for (int d = 1; rest.degree() > 0 && d <= rest.degree(); ++d) {
        if (2 * d > rest.degree()) { out.push_back(rest.monic()); return; }
        xq = powmod(xq, F.q(), rest);
        PolyFq g = PolyFq::gcd(xq - x, rest);
        if (g.degree() > 0) {
            equal_degree(g, d, out, state);
            rest = rest / g;
            xq = xq % rest;
        }
    }
    if (rest.degree() > 0) out.push_back(rest.monic());
}

}  // namespace detail

// monic irreducible factors with multiplicities
inline std::map<long long, std::pair<PolyFq, int>> factor(const PolyFq& f, uint64_t seed = 0x5eedULL) {
    const Fq& F = f.field();
    if (f.is_zero()) throw std::domain_error("factor: zero polynomial");
    std::map<long long, std::pair<PolyFq, int>> result;  // keyed by dense key for determinism
    uint64_t state = seed;

    struct Item { PolyFq poly; int mult; };
    std::vector<Item> stack{{f.monic(), 1}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        PolyFq g = it.poly;
        if (g.degree() < 1) continue;
        PolyFq gp = g.derivative();
        if (gp.is_zero()) {
            // g = h(t)^p since F_q is perfect
            int p = int(F.p());
            std::vector<felem> hc(g.degree() / p + 1);
            long long root_pow = F.q() / F.p();  // c -> c^(q/p) is the inverse of Frobenius
            for (int i = 0; i * p <= g.degree(); ++i) hc[i] = F.pow(g.coeff(i * p), root_pow);
            stack.push_back({PolyFq(F, hc), it.mult * p});
            continue;
        }
        PolyFq sf = g / PolyFq::gcd(g, gp);  // squarefree part
        std::vector<PolyFq> irr;
        detail::factor_squarefree_monic(sf, irr, state);
        PolyFq cof = g;
        for (const PolyFq& pi : irr) {
            int mult = 0;
            while (true) {
                auto [q, r] = PolyFq::divmod(cof, pi);
                if (!r.is_zero()) break;
                cof = q;
                ++mult;
            }
            auto key = pi.dense_key();
            auto found = result.find(key);
            if (found == result.end())
                result.emplace(key, std::make_pair(pi, mult * it.mult));
            else
                found->second.second += mult * it.mult;
        }
        // factors whose multiplicity is divisible by p survive in the cofactor
        if (cof.degree() > 0) stack.push_back({cof, it.mult});
    }
    return result;
}

inline bool is_squarefree(const PolyFq& f) {
    if (f.is_zero()) return false;
    if (f.degree() == 0) return true;
    PolyFq d = f.derivative();
    if (d.is_zero()) return false;  // a p-th power
    return PolyFq::gcd(f, d).degree() == 0;
}

}  // namespace ffrace
