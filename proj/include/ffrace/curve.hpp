#pragma once

// Elliptic curves over F_q(t): Weierstrass models with polynomial
// coefficients, reduction at every place of P^1 (the infinite place via a
// second chart in u = 1/t), quadratic twists and the tame conductor.

#include <array>
#include <cmath>
#include <memory>
#include <optional>

#include "ffrace/factor.hpp"
#include "ffrace/poly.hpp"

namespace ffrace {

enum class ReductionType { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

inline const char* reduction_name(ReductionType t) {
    switch (t) {
        case ReductionType::Good: return "good";
        case ReductionType::SplitMultiplicative: return "split-multiplicative";
        case ReductionType::NonsplitMultiplicative: return "nonsplit-multiplicative";
        case ReductionType::Additive: return "additive";
    }
    return "?";
}

struct ReductionData {
    ReductionType type;
    long long a_v;    // Frobenius trace (good) or 1/-1/0 (bad)
    double theta_v;   // angle in [0, pi], good places only
    int degree;
    bool infinite;
    long long qv;
};

// a1,a2,a3,a4,a6 with their transformation weights
inline constexpr int kWeights[5] = {1, 2, 3, 4, 6};

struct ChartModel {
    std::array<PolyFq, 5> a;  // coefficients in u = 1/t
    PolyFq delta, c4;
    int e = 0;  // (x,y) -> (x/u^(2e), y/u^(3e)) scaling exponent
};

namespace detail {

inline PolyFq weierstrass_delta(const Fq& F, const std::array<PolyFq, 5>& a, PolyFq* c4_out) {
    auto C = [&](long long v) { return PolyFq::constant(F, F.scalar(v)); };
    const PolyFq &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    PolyFq b2 = a1 * a1 + C(4) * a2;
    PolyFq b4 = C(2) * a4 + a1 * a3;
    PolyFq b6 = a3 * a3 + C(4) * a6;
    PolyFq b8 = a1 * a1 * a6 + C(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    PolyFq delta = (b2 * b2 * b8).negated() - C(8) * b4 * b4 * b4 - C(27) * b6 * b6 + C(9) * b2 * b4 * b6;
    if (c4_out) *c4_out = b2 * b2 - C(24) * b4;
    return delta;
}

}  // namespace detail

class CurveModel {
public:
    CurveModel(const Fq& F, std::array<PolyFq, 5> coeffs) : F_(&F), a_(std::move(coeffs)) {
        delta_ = detail::weierstrass_delta(F, a_, &c4_);
        if (delta_.is_zero()) throw std::invalid_argument("make_curve: discriminant vanishes");
        check_nonconstant_j();
        build_chart();
    }

    static CurveModel from_ints(const Fq& F, const std::vector<std::vector<long long>>& a) {
        if (a.size() != 5) throw std::invalid_argument("curve needs coefficients a1,a2,a3,a4,a6");
        std::array<PolyFq, 5> c{PolyFq(F), PolyFq(F), PolyFq(F), PolyFq(F), PolyFq(F)};
        for (int i = 0; i < 5; ++i) c[i] = PolyFq::from_ints(F, a[i]);
        return CurveModel(F, c);
    }

    const Fq& field() const { return *F_; }
    // index by Weierstrass label: 1,2,3,4,6
    const PolyFq& a(int label) const { return a_[slot(label)]; }
    const std::array<PolyFq, 5>& coeffs() const { return a_; }
    const PolyFq& discriminant() const { return delta_; }
    const PolyFq& c4_poly() const { return c4_; }
    const ChartModel& chart() const { return chart_; }
    bool short_form() const {
        return a_[0].is_zero() && a_[1].is_zero() && a_[2].is_zero();
    }

private:
    const Fq* F_;
    std::array<PolyFq, 5> a_;
    PolyFq delta_, c4_;
    ChartModel chart_;

    static int slot(int label) {
        switch (label) {
            case 1: return 0;
            case 2: return 1;
            case 3: return 2;
            case 4: return 3;
            case 6: return 4;
        }
        throw std::invalid_argument("bad Weierstrass index");
    }

    void check_nonconstant_j() {
        // j = c4^3 / delta is constant iff c4^3 and delta are proportional
        PolyFq c43 = c4_ * c4_ * c4_;
        if (c43.is_zero())
            throw std::invalid_argument("make_curve: constant j-invariant (j = 0)");
        if (c43.degree() == delta_.degree()) {
            if (c43.scaled(delta_.lead()) == delta_.scaled(c43.lead()))
                throw std::invalid_argument("make_curve: constant j-invariant (isotrivial)");
        }
    }

    void build_chart() {
        int e = 1;
        for (int i = 0; i < 5; ++i) {
            if (a_[i].is_zero()) continue;
            int need = (a_[i].degree() + kWeights[i] - 1) / kWeights[i];
            e = std::max(e, need);
        }
        for (int i = 0; i < 5; ++i)
            chart_.a[i] = a_[i].is_zero() ? PolyFq(*F_) : a_[i].reversed(kWeights[i] * e);
        chart_.e = e;
        chart_.delta = delta_.reversed(12 * e);
        chart_.c4 = c4_.is_zero() ? PolyFq(*F_) : c4_.reversed(4 * e);
    }
};

// ---- fiber classification over a residue field ----

namespace detail {

struct FiberCoeffs {
    felem e1, e2, e3, e4, e6;
};

inline felem fiber_delta(const Fq& R, const FiberCoeffs& f) {
    felem b2 = R.add(R.mul(f.e1, f.e1), R.mul(R.scalar(4), f.e2));
    felem b4 = R.add(R.mul(R.scalar(2), f.e4), R.mul(f.e1, f.e3));
    felem b6 = R.add(R.mul(f.e3, f.e3), R.mul(R.scalar(4), f.e6));
    felem b8 = R.add(R.sub(R.add(R.mul(R.mul(f.e1, f.e1), f.e6), R.mul(R.scalar(4), R.mul(f.e2, f.e6))),
                           R.mul(f.e1, R.mul(f.e3, f.e4))),
                     R.sub(R.mul(f.e2, R.mul(f.e3, f.e3)), R.mul(f.e4, f.e4)));
    felem d = R.sub(R.zero(), R.mul(R.mul(b2, b2), b8));
    d = R.sub(d, R.mul(R.scalar(8), R.mul(b4, R.mul(b4, b4))));
    d = R.sub(d, R.mul(R.scalar(27), R.mul(b6, b6)));
    d = R.add(d, R.mul(R.scalar(9), R.mul(b2, R.mul(b4, b6))));
    return d;
}

// completed-square cubic z^2 = x^3 + A2 x^2 + A4 x + A6 (odd characteristic)
struct DepressedForm {
    felem A2, A4, A6;
};
inline DepressedForm complete_square(const Fq& R, const FiberCoeffs& f) {
    felem i2 = R.inv(R.scalar(2));
    felem i4 = R.mul(i2, i2);
    DepressedForm d;
    d.A2 = R.add(f.e2, R.mul(R.mul(f.e1, f.e1), i4));
    d.A4 = R.add(f.e4, R.mul(R.mul(f.e1, f.e3), i2));
    d.A6 = R.add(f.e6, R.mul(R.mul(f.e3, f.e3), i4));
    return d;
}

inline long long count_good_fiber(const Fq& R, const FiberCoeffs& f) {
    long long qv = R.q();
    if (R.p() != 2) {
        DepressedForm d = complete_square(R, f);
        const auto& SQ = R.sq_table();
        const auto& CU = R.cu_table();
        long long sum = 0;
        for (long long i = 0; i < qv; ++i) {
            felem x = R.element(i);
            felem g = R.add(R.add(CU[x], R.mul(d.A2, SQ[x])), R.add(R.mul(d.A4, x), d.A6));
            sum += R.chi(g);
        }
        return -sum;  // a_v
    }
    // char 2: y^2 + H y = f(x), H = e1 x + e3
    long long affine = 0;
    for (long long i = 0; i < qv; ++i) {
        felem x = R.element(i);
        felem H = R.add(R.mul(f.e1, x), f.e3);
        felem fx = R.add(R.add(R.mul(R.mul(x, x), R.add(x, f.e2)), R.mul(f.e4, x)), f.e6);
        if (H == 0) {
            affine += 1;  // y^2 = fx has exactly one root
        } else {
            felem hinv = R.inv(H);
            felem w = R.mul(fx, R.mul(hinv, hinv));
            if (R.trace2(w) == 0) affine += 2;
        }
    }
    return qv - affine;  // q_v + 1 - (affine + 1)
}

inline ReductionData classify_bad_fiber(const Fq& R, const FiberCoeffs& f) {
    ReductionData rd;
    rd.qv = R.q();
    rd.theta_v = 0.0;
    if (R.p() != 2) {
        DepressedForm d = complete_square(R, f);
        // singular point: double root of the cubic
        felem x0 = 0;
        bool found = false;
        for (long long i = 0; i < R.q(); ++i) {
            felem x = R.element(i);
            felem g = R.add(R.add(R.mul(R.mul(x, x), R.add(x, d.A2)), R.mul(d.A4, x)), d.A6);
            if (g != 0) continue;
            // g'(x) = 3x^2 + 2 A2 x + A4
            felem gp = R.add(R.add(R.mul(R.scalar(3), R.mul(x, x)), R.mul(R.scalar(2), R.mul(d.A2, x))), d.A4);
            if (gp == 0) { x0 = x; found = true; break; }
        }
        if (!found) throw std::logic_error("bad fiber without singular point");
        // third root: x0 + x0 + r = -A2
        felem r = R.sub(R.neg(d.A2), R.add(x0, x0));
        if (r == x0) {
            rd.type = ReductionType::Additive;
            rd.a_v = 0;
        } else {
            int chi = R.chi(R.sub(x0, r));
            rd.type = chi > 0 ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative;
            rd.a_v = chi;
        }
        return rd;
    }
    // char 2
    if (f.e1 != 0) {
        felem x0 = R.mul(f.e3, R.inv(f.e1));
        felem Q = R.add(x0, f.e2);  // x^2 coefficient of the shifted equation
        felem w = R.mul(Q, R.inv(R.mul(f.e1, f.e1)));
        int split = (R.trace2(w) == 0);
        rd.type = split ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative;
        rd.a_v = split ? 1 : -1;
        return rd;
    }
    // e1 = 0 forces e3 = 0 on a singular fiber: y^2 = cubic, a cusp
    rd.type = ReductionType::Additive;
    rd.a_v = 0;
    return rd;
}

}  // namespace detail

// Residue fields F_{q^d} = F_{p^{k d}} with embeddings of the base field,
// built once and shared.
class FieldCache {
public:
    explicit FieldCache(const Fq& base, WorkBounds wb = {}) : base_(&base), wb_(wb) {}

    const Fq& residue_field(int degree) {
        if (degree == 1) return *base_;
        auto it = fields_.find(degree);
        if (it == fields_.end()) {
            auto f = std::make_unique<Fq>(base_->p(), base_->k() * degree, wb_.max_field_size);
            it = fields_.emplace(degree, std::move(f)).first;
        }
        return *it->second;
    }
    const std::vector<felem>& embedding(int degree) {
        auto it = embeddings_.find(degree);
        if (it == embeddings_.end()) {
            std::vector<felem> img;
            if (degree == 1) {
                img.resize(base_->q());
                for (long long i = 0; i < base_->q(); ++i) img[i] = base_->element(i);
            } else {
                img = residue_field(degree).embedding_of(*base_);
            }
            it = embeddings_.emplace(degree, std::move(img)).first;
        }
        return it->second;
    }
    const Fq& base() const { return *base_; }
    const WorkBounds& bounds() const { return wb_; }
    void set_bounds(const WorkBounds& wb) { wb_ = wb; }

private:
    const Fq* base_;
    WorkBounds wb_;
    std::map<int, std::unique_ptr<Fq>> fields_;
    std::map<int, std::vector<felem>> embeddings_;
};

namespace detail {

// coefficients of `poly` pushed through the base->R embedding
inline std::vector<felem> embed_poly(const PolyFq& poly, const Fq& base, const Fq&,
                                     const std::vector<felem>& emb) {
    std::vector<felem> out(poly.coeffs().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = emb[base.dense(poly.coeffs()[i])];
    return out;
}

inline felem eval_embedded(const std::vector<felem>& coeffs, const Fq& R, felem x) {
    felem acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = R.add(R.mul(acc, x), coeffs[i]);
    return acc;
}

inline int valuation_at(const std::vector<felem>& coeffs, const Fq& R, felem tau) {
    // multiplicity of tau as a root, by synthetic division
    std::vector<felem> c = coeffs;
    while (!c.empty() && c.back() == 0) c.pop_back();
    int v = 0;
    while (!c.empty()) {
        // divide by (x - tau)
        felem rem = 0;
        std::vector<felem> qq(c.size() > 1 ? c.size() - 1 : 0);
        for (size_t i = c.size(); i-- > 0;) {
            felem cur = R.add(c[i], R.mul(rem, tau));
            if (i > 0) { qq[i - 1] = cur; rem = cur; }
            else rem = cur;
        }
        if (rem != 0) break;
        ++v;
        c = qq;
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    return v;
}

}  // namespace detail

struct NonMinimalModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// The (val Delta >= 12, val c4 >= 4) rejection certifies non-minimality in
// characteristic >= 5.  In characteristic 2 and 3 only a literal
// (x,y) -> (pi^2 x, pi^3 y) rescaling is accepted as a certificate.
inline void check_minimality(long long p, int val_delta, int val_c4,
                             const std::array<int, 5>& coeff_vals, const std::string& where) {
    if (val_delta < 12 || val_c4 < 4) return;
    if (p >= 5)
        throw NonMinimalModelError("non-minimal at place " + where);
    bool scalable = true;
    for (int i = 0; i < 5; ++i)
        if (coeff_vals[i] >= 0 && coeff_vals[i] < kWeights[i]) scalable = false;
    if (scalable) throw NonMinimalModelError("non-minimal at place " + where);
}

inline ReductionData reduce_fiber(const Fq& R, const FiberCoeffs& fib, long long max_qv,
                                  felem delta_val) {
    ReductionData rd;
    rd.qv = R.q();
    if (delta_val != 0) {
        if (R.q() > max_qv)
            throw WorkBoundError("max_residue_field",
                                 "residue field of size " + std::to_string(R.q()) +
                                     " exceeds the counting work bound");
        rd.type = ReductionType::Good;
        rd.a_v = count_good_fiber(R, fib);
        if (rd.a_v * rd.a_v > 4 * R.q()) throw std::logic_error("Hasse bound violated");
        rd.theta_v = std::acos(std::clamp((double)rd.a_v / (2.0 * std::sqrt((double)R.q())), -1.0, 1.0));
        return rd;
    }
    if (R.q() > max_qv)
        throw WorkBoundError("max_residue_field",
                             "residue field of size " + std::to_string(R.q()) +
                                 " exceeds the counting work bound");
    ReductionData bad = classify_bad_fiber(R, fib);
    bad.qv = R.q();
    return bad;
}

}  // namespace detail

inline ReductionData reduce_at(const CurveModel& E, const Place& v, FieldCache& cache) {
    const Fq& F = E.field();
    const WorkBounds& wb = cache.bounds();
    if (v.infinite) {
        const ChartModel& ch = E.chart();
        detail::FiberCoeffs fib;
        felem* slots[5] = {&fib.e1, &fib.e2, &fib.e3, &fib.e4, &fib.e6};
        std::array<int, 5> cvals;
        for (int i = 0; i < 5; ++i) {
            *slots[i] = ch.a[i].coeff(0);
            cvals[i] = ch.a[i].is_zero() ? -1 : detail::valuation_at(ch.a[i].coeffs(), F, F.zero());
        }
        int vd = detail::valuation_at(ch.delta.coeffs(), F, F.zero());
        int vc = ch.c4.is_zero() ? 99 : detail::valuation_at(ch.c4.coeffs(), F, F.zero());
        detail::check_minimality(F.p(), vd, vc, cvals, "inf");
        ReductionData rd = detail::reduce_fiber(F, fib, wb.max_residue_field,
                                                vd == 0 ? ch.delta.coeff(0) : 0);
        rd.degree = 1;
        rd.infinite = true;
        return rd;
    }
    int d = v.degree;
    const Fq& R = cache.residue_field(d);
    const auto& emb = cache.embedding(d);
    // root of the generator in R: smallest in enumeration order
    auto gen_emb = detail::embed_poly(v.gen, F, R, emb);
    felem tau = 0;
    bool found = false;
    for (long long i = 0; i < R.q() && !found; ++i) {
        felem x = R.element(i);
        if (detail::eval_embedded(gen_emb, R, x) == 0) { tau = x; found = true; }
    }
    if (!found) throw std::invalid_argument("reduce_at: generator has no root in its residue field");
    detail::FiberCoeffs fib;
    felem* slots[5] = {&fib.e1, &fib.e2, &fib.e3, &fib.e4, &fib.e6};
    std::array<int, 5> cvals;
    for (int i = 0; i < 5; ++i) {
        auto ce = detail::embed_poly(E.coeffs()[i], F, R, emb);
        *slots[i] = detail::eval_embedded(ce, R, tau);
        cvals[i] = E.coeffs()[i].is_zero() ? -1 : detail::valuation_at(ce, R, tau);
    }
    auto delta_emb = detail::embed_poly(E.discriminant(), F, R, emb);
    felem dval = detail::eval_embedded(delta_emb, R, tau);
    if (dval == 0) {
        int vd = detail::valuation_at(delta_emb, R, tau);
        auto c4_emb = detail::embed_poly(E.c4_poly(), F, R, emb);
        int vc = E.c4_poly().is_zero() ? 99 : detail::valuation_at(c4_emb, R, tau);
        detail::check_minimality(F.p(), vd, vc, cvals, v.gen.to_string());
    }
    ReductionData rd = detail::reduce_fiber(R, fib, wb.max_residue_field, dval);
    rd.degree = d;
    rd.infinite = false;
    return rd;
}

// product of the generators of the finite places of multiplicative reduction
inline PolyFq multiplicative_locus(const CurveModel& E, FieldCache& cache) {
    const Fq& F = E.field();
    PolyFq m = PolyFq::constant(F, F.one());
    bool any = false;
    for (auto& [key, fm] : factor(E.discriminant())) {
        Place v{false, fm.first, fm.first.degree()};
        ReductionData rd = reduce_at(E, v, cache);
        if (rd.type == ReductionType::SplitMultiplicative ||
            rd.type == ReductionType::NonsplitMultiplicative) {
            m = m * fm.first;
            any = true;
        }
    }
    if (!any)
        throw std::invalid_argument("no finite place of multiplicative reduction (twisting locus undefined)");
    return m;
}

inline CurveModel quadratic_twist(const CurveModel& E, const PolyFq& f, const PolyFq& mult_locus) {
    const Fq& F = E.field();
    if (F.p() < 5) throw std::invalid_argument("quadratic_twist: requires characteristic >= 5");
    if (!E.short_form()) throw std::invalid_argument("quadratic_twist: base model must be y^2 = x^3 + ax + b");
    if (f.degree() < 1) throw std::invalid_argument("quadratic_twist: f must be nonconstant");
    if (!is_squarefree(f)) throw std::invalid_argument("quadratic_twist: f is not squarefree");
    if (PolyFq::gcd(f, mult_locus).degree() != 0)
        throw std::invalid_argument("quadratic_twist: gcd(f, m) != 1");
    PolyFq f2 = f * f;
    std::array<PolyFq, 5> a{PolyFq(F), PolyFq(F), PolyFq(F), f2 * E.a(4), f2 * f * E.a(6)};
    return CurveModel(F, a);
}

// y^2 = x^3 - 27 c4 x - 54 c6 (isomorphic over F_q(t) when p >= 5)
inline CurveModel to_short_form(const CurveModel& E) {
    const Fq& F = E.field();
    if (F.p() < 5) throw std::invalid_argument("to_short_form: requires characteristic >= 5");
    auto C = [&](long long v) { return PolyFq::constant(F, F.scalar(v)); };
    const PolyFq &a1 = E.a(1), &a2 = E.a(2), &a3 = E.a(3), &a4 = E.a(4), &a6 = E.a(6);
    PolyFq b2 = a1 * a1 + C(4) * a2;
    PolyFq b4 = C(2) * a4 + a1 * a3;
    PolyFq b6 = a3 * a3 + C(4) * a6;
    PolyFq c4 = b2 * b2 - C(24) * b4;
    PolyFq c6 = (b2 * b2 * b2).negated() + C(36) * b2 * b4 - C(216) * b6;
    std::array<PolyFq, 5> a{PolyFq(F), PolyFq(F), PolyFq(F), C(-27) * c4, C(-54) * c6};
    return CurveModel(F, a);
}

struct ConductorInfo {
    int deg_conductor;  // deg(n_{E/K})
    int big_n;          // N_{E/K} = deg(n) - 4 over P^1
    struct BadPlaceInfo {
        std::string place;
        int degree;
        ReductionType type;
        int exponent;
    };
    std::vector<BadPlaceInfo> bad_places;
};

// Tame conductor: exponent 1 at multiplicative places, 2 at additive ones.
inline ConductorInfo conductor_degree(const CurveModel& E, FieldCache& cache) {
    const Fq& F = E.field();
    if (F.p() < 5)
        throw std::invalid_argument("wild ramification unsupported; supply degree explicitly");
    ConductorInfo info;
    info.deg_conductor = 0;
    auto record = [&](const std::string& name, int deg, ReductionType ty) {
        if (ty == ReductionType::Good) return;
        int f = (ty == ReductionType::Additive) ? 2 : 1;
        info.deg_conductor += f * deg;
        info.bad_places.push_back({name, deg, ty, f});
    };
    for (auto& [key, fm] : factor(E.discriminant())) {
        Place v{false, fm.first, fm.first.degree()};
        ReductionData rd = reduce_at(E, v, cache);
        record(fm.first.to_string(), fm.first.degree(), rd.type);
    }
    Place inf{true, PolyFq(F), 1};
    ReductionData rdi = reduce_at(E, inf, cache);
    record("inf", 1, rdi.type);
    info.big_n = info.deg_conductor - 4;
    return info;
}

}  // namespace ffrace
