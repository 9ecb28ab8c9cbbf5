#pragma once

// Per-degree reduction survey of a curve: the multiset of Frobenius traces
// over all places of a fixed degree.  Places of degree d are walked as
// Frobenius orbits of the residue field F_{q^d}, so no generator polynomials
// are materialized on the hot path; the trace at a good fiber is a
// quadratic-character sum evaluated through the field's packed tables.

#include <cstdint>
#include <map>
#include <vector>

#include "ffrace/curve.hpp"

namespace ffrace {

struct BadFiberData {
    ReductionType type;
    int a;
    bool infinite;
};

struct DegreeSurvey {
    int degree = 0;
    long long qv = 0;
    // trace value -> number of good places of this degree with that trace
    std::map<long long, long long> good_hist;
    std::vector<BadFiberData> bad;

    long long good_places() const {
        long long n = 0;
        for (auto& [a, c] : good_hist) n += c;
        return n;
    }
};

class CurveAnalyzer {
public:
    CurveAnalyzer(const CurveModel& E, WorkBounds wb = {})
        : E_(&E), wb_(wb), cache_(E.field(), wb) {}

    const CurveModel& curve() const { return *E_; }
    const WorkBounds& bounds() const { return wb_; }
    FieldCache& fields() { return cache_; }

    const DegreeSurvey& degree(int d) {
        auto it = surveys_.find(d);
        if (it == surveys_.end()) it = surveys_.emplace(d, sweep(d)).first;
        return it->second;
    }

    bool degree_feasible(int d) const {
        return fits_work_bound(E_->field().p(), E_->field().k() * d, wb_.max_residue_field);
    }

private:
    const CurveModel* E_;
    WorkBounds wb_;
    FieldCache cache_;
    std::map<int, DegreeSurvey> surveys_;

    DegreeSurvey sweep(int d) {
        const Fq& F = E_->field();
        if (!degree_feasible(d))
            throw WorkBoundError("max_residue_field",
                                 "degree-" + std::to_string(d) + " residue fields exceed the work bound");
        DegreeSurvey S;
        S.degree = d;
        const Fq& R = cache_.residue_field(d);
        S.qv = R.q();
        const auto& emb = cache_.embedding(d);

        std::array<std::vector<felem>, 5> ce;
        for (int i = 0; i < 5; ++i) ce[i] = detail::embed_poly(E_->coeffs()[i], F, R, emb);
        auto de = detail::embed_poly(E_->discriminant(), F, R, emb);
        auto c4e = detail::embed_poly(E_->c4_poly(), F, R, emb);

        const bool odd = F.p() != 2;
        // fast path: x^2 coefficient of the completed square constant, x coefficient zero
        bool fast = false;
        std::vector<felem> Gtab;
        if (odd) {
            const Fq& B = F;
            felem i2 = B.inv(B.scalar(2));
            felem i4 = B.mul(i2, i2);
            PolyFq A2p = E_->a(2) + (E_->a(1) * E_->a(1)).scaled(i4);
            PolyFq A4p = E_->a(4) + (E_->a(1) * E_->a(3)).scaled(i2);
            if (A2p.degree() <= 0 && A4p.is_zero()) {
                fast = true;
                felem A2r = emb[B.dense(A2p.coeff(0))];
                const auto& SQ = R.sq_table();
                const auto& CU = R.cu_table();
                Gtab.assign(R.code_span(), 0);
                for (long long i = 0; i < R.q(); ++i) {
                    felem x = R.element(i);
                    Gtab[x] = R.add(CU[x], R.mul(A2r, SQ[x]));
                }
            } else {
                R.sq_table();  // ensure built
            }
        }

        long long qbase = F.q();
        std::vector<bool> visited(R.q(), false);
        const auto& chi = odd ? chi_table(R) : dummy_chi_;
        felem i2r = odd ? R.inv(R.scalar(2)) : 0;
        felem i4r = odd ? R.mul(i2r, i2r) : 0;

        for (long long v0 = 0; v0 < R.q(); ++v0) {
            if (visited[v0]) continue;
            felem tau = R.element(v0);
            // walk the Frobenius orbit x -> x^qbase
            int orbit = 0;
            felem x = tau;
            do {
                visited[R.dense(x)] = true;
                x = R.pow(x, qbase);
                ++orbit;
            } while (x != tau && orbit <= d);
            if (orbit != d) continue;  // smaller-degree element (orbit size divides d)

            felem dval = detail::eval_embedded(de, R, tau);
            if (dval != 0) {
                long long a = fast ? fast_trace(R, Gtab, chi, detail::eval_embedded(ce[4], R, tau),
                                               detail::eval_embedded(ce[2], R, tau), i4r)
                                   : slow_trace(R, ce, tau, odd, i2r, i4r, chi);
                if (a * a > 4 * R.q()) throw std::logic_error("Hasse bound violated in survey");
                S.good_hist[a] += 1;
            } else {
                detail::FiberCoeffs fib;
                felem* slots[5] = {&fib.e1, &fib.e2, &fib.e3, &fib.e4, &fib.e6};
                std::array<int, 5> cvals;
                for (int i = 0; i < 5; ++i) {
                    *slots[i] = detail::eval_embedded(ce[i], R, tau);
                    cvals[i] = E_->coeffs()[i].is_zero() ? -1 : detail::valuation_at(ce[i], R, tau);
                }
                int vd = detail::valuation_at(de, R, tau);
                int vc = E_->c4_poly().is_zero() ? 99 : detail::valuation_at(c4e, R, tau);
                detail::check_minimality(F.p(), vd, vc, cvals, "degree-" + std::to_string(d) + " place");
                ReductionData rd = detail::classify_bad_fiber(R, fib);
                S.bad.push_back({rd.type, int(rd.a_v), false});
            }
        }

        if (d == 1) {
            // the place at infinity, via the second chart at u = 0
            Place inf{true, PolyFq(F), 1};
            ReductionData rd = reduce_at(*E_, inf, cache_);
            if (rd.type == ReductionType::Good)
                S.good_hist[rd.a_v] += 1;
            else
                S.bad.push_back({rd.type, int(rd.a_v), true});
        }
        return S;
    }

    // chi tables per residue field, built from log parity
    std::map<const Fq*, std::vector<int8_t>> chis_;
    std::vector<int8_t> dummy_chi_;
    const std::vector<int8_t>& chi_table(const Fq& R) {
        auto it = chis_.find(&R);
        if (it == chis_.end()) {
            std::vector<int8_t> t(R.code_span(), 0);
            for (long long i = 1; i < R.q(); ++i) {
                felem x = R.element(i);
                t[x] = int8_t((R.log_of(x) & 1) ? -1 : 1);
            }
            it = chis_.emplace(&R, std::move(t)).first;
        }
        return it->second;
    }

    static long long fast_trace(const Fq& R, const std::vector<felem>& Gtab,
                                const std::vector<int8_t>& chi, felem e6, felem e3, felem i4r) {
        // completed square adds e3^2/4 to the constant term
        felem c = R.add(e6, R.mul(R.mul(e3, e3), i4r));
        long long sum = 0;
        for (long long i = 0; i < R.q(); ++i) {
            felem x = R.element(i);
            sum += chi[R.add(Gtab[x], c)];
        }
        return -sum;
    }

    long long slow_trace(const Fq& R, const std::array<std::vector<felem>, 5>& ce, felem tau,
                         bool odd, felem i2r, felem i4r, const std::vector<int8_t>& chi) {
        detail::FiberCoeffs fib;
        fib.e1 = detail::eval_embedded(ce[0], R, tau);
        fib.e2 = detail::eval_embedded(ce[1], R, tau);
        fib.e3 = detail::eval_embedded(ce[2], R, tau);
        fib.e4 = detail::eval_embedded(ce[3], R, tau);
        fib.e6 = detail::eval_embedded(ce[4], R, tau);
        if (!odd) return detail::count_good_fiber(R, fib);
        felem A2 = R.add(fib.e2, R.mul(R.mul(fib.e1, fib.e1), i4r));
        felem A4 = R.add(fib.e4, R.mul(R.mul(fib.e1, fib.e3), i2r));
        felem A6 = R.add(fib.e6, R.mul(R.mul(fib.e3, fib.e3), i4r));
        const auto& SQ = R.sq_table();
        const auto& CU = R.cu_table();
        long long sum = 0;
        for (long long i = 0; i < R.q(); ++i) {
            felem x = R.element(i);
            felem g = R.add(R.add(CU[x], R.mul(A2, SQ[x])), R.add(R.mul(A4, x), A6));
            sum += chi[g];
        }
        return -sum;
    }
};

}  // namespace ffrace
