#pragma once

// Desk-scale survey over the quadratic twisting space: enumerate the
// squarefree polynomials of fixed degree coprime to the multiplicative
// locus, twist, rebuild each L-function from point counts, and tabulate
// spectra, ranks and density estimates.

#include <future>

#include "ffrace/limitlaw.hpp"
#include "ffrace/ulmer.hpp"

namespace ffrace {

// monic f with deg f = d, f squarefree, gcd(f, m) = 1, in dense-key order;
// seeded subsampling applies when the space exceeds `limit`
inline std::vector<PolyFq> twisting_space(const CurveModel& base, const PolyFq& m, int d,
                                          long long limit = -1, uint64_t seed = 1) {
    const Fq& F = base.field();
    if (F.p() < 5) throw std::invalid_argument("twisting_space: requires characteristic >= 5");
    if (!base.short_form()) throw std::invalid_argument("twisting_space: base must be in short form");
    std::vector<PolyFq> out;
    for_each_monic(F, d, [&](const PolyFq& f) {
        if (!is_squarefree(f)) return;
        if (PolyFq::gcd(f, m).degree() != 0) return;
        out.push_back(f);
    });
    if (limit > 0 && (long long)out.size() > limit) {
        Rng rng(seed);
        std::vector<PolyFq> sampled;
        std::vector<long long> idx(out.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = (long long)i;
        for (long long i = 0; i < limit; ++i) {
            long long j = i + (long long)(rng.next() % (idx.size() - i));
            std::swap(idx[i], idx[j]);
            sampled.push_back(out[idx[i]]);
        }
        std::sort(sampled.begin(), sampled.end(),
                  [](const PolyFq& a, const PolyFq& b) { return a.dense_key() < b.dense_key(); });
        return sampled;
    }
    return out;
}

struct TwistSample {
    PolyFq f;
    int big_n = -1;  // L-degree from the tame conductor
    LPolynomial L;
    Spectrum spec;
    int epsilon = 0;
    DeltaMC delta;
    bool li_plausible = false;
    std::string error;  // per-twist failures are recorded, not fatal
};

struct TwistSurvey {
    std::vector<TwistSample> rows;
    bool conductor_constant = true;
    int common_n = -1;
    double max_delta_dev = 0.0;   // max |delta - 1/2|
    double frac_rank_le_1 = 0.0;
    std::map<int, int> rank_hist;
    int failures = 0;
};

inline TwistSample analyze_twist(const CurveModel& base, const PolyFq& m, const PolyFq& f,
                                 const WorkBounds& wb, long long mc_samples, uint64_t seed,
                                 int stabilization_depth) {
    TwistSample s;
    s.f = f;
    try {
        CurveModel Ef = quadratic_twist(base, f, m);
        CurveAnalyzer an(Ef, wb);
        ConductorInfo ci = conductor_degree(Ef, an.fields());
        s.big_n = ci.big_n;
        auto lr = lpolynomial(an, ci.big_n, stabilization_depth);
        s.L = lr.L;
        s.spec = spectrum(s.L);
        s.epsilon = s.spec.epsilon;
        SpectralRV rv = build_rv(s.spec);
        if (rv.amps.empty()) {
            // atomic limit law: delta is the exact fraction of positive support
            double pos = (rv.v_even > 0) + (rv.v_odd > 0);
            s.delta = {pos / 2.0, 0.0, 0, seed};
        } else {
            s.delta = delta_mc(rv, mc_samples, seed);
        }
        s.li_plausible = !diagnose_rational_angles(s.spec).violated;
    } catch (const std::exception& e) {
        s.error = e.what();
    }
    return s;
}

inline TwistSurvey twist_survey(const CurveModel& base, int d, long long sample_cap, uint64_t seed,
                                WorkBounds wb, long long mc_samples = 20000, int threads = 1,
                                int stabilization_depth = 1) {
    FieldCache cache(base.field(), wb);
    PolyFq m = multiplicative_locus(base, cache);
    std::vector<PolyFq> fs = twisting_space(base, m, d, sample_cap, seed);
    TwistSurvey out;
    out.rows.resize(fs.size());
    int nth = std::max(1, threads);
    std::vector<std::future<void>> jobs;
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= fs.size()) break;
            out.rows[i] = analyze_twist(base, m, fs[i], wb, mc_samples, seed + 1000003 * (i + 1),
                                        stabilization_depth);
        }
    };
    if (nth == 1) {
        worker();
    } else {
        for (int t = 0; t < nth; ++t) jobs.push_back(std::async(std::launch::async, worker));
        for (auto& j : jobs) j.get();
    }

    long long rank_le_1 = 0, ok = 0;
    for (auto& s : out.rows) {
        if (!s.error.empty()) { ++out.failures; continue; }
        ++ok;
        if (out.common_n < 0) out.common_n = s.big_n;
        if (s.big_n != out.common_n) out.conductor_constant = false;
        out.rank_hist[s.spec.rank]++;
        if (s.spec.rank <= 1) ++rank_le_1;
        out.max_delta_dev = std::max(out.max_delta_dev, std::abs(s.delta.delta - 0.5));
    }
    out.frac_rank_le_1 = ok ? double(rank_le_1) / double(ok) : 0.0;
    return out;
}

}  // namespace ffrace
