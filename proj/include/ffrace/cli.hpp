#pragma once

// Unified command-line front end.  All subcommands write deterministic
// output for fixed inputs and seeds; work-bound violations exit with code 2
// and a structured error record on stderr.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "ffrace/chebyshev.hpp"
#include "ffrace/limitlaw.hpp"
#include "ffrace/serialize.hpp"
#include "ffrace/twist.hpp"
#include "ffrace/ulmer.hpp"

namespace ffrace {

namespace cli_detail {

inline ojson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    ojson j;
    in >> j;
    return j;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct CurveArgs {
    std::string path;
    long long max_qv = 729;
    WorkBounds bounds() const {
        WorkBounds wb;
        wb.max_residue_field = max_qv;
        wb.max_field_size = std::max((long long)(1ll << 21), 4 * max_qv);
        return wb;
    }
};

inline int cmd_places(long long q, int max_degree, bool csv, std::ostream& out) {
    auto [p, k] = split_prime_power(q);
    Fq F(p, k);
    WorkBounds wb;
    if (csv) out << "kind,generator,degree\n";
    ojson rows = ojson::array();
    for (int d = 1; d <= max_degree; ++d) {
        for (const Place& v : places_of_degree(F, d, wb)) {
            if (csv) {
                out << (v.infinite ? "infinite" : "finite") << "," << v.name() << "," << v.degree
                    << "\n";
            } else {
                ojson row;
                row["kind"] = v.infinite ? "infinite" : "finite";
                if (!v.infinite) {
                    ojson coeffs = ojson::array();
                    for (felem c : v.gen.coeffs()) coeffs.push_back((long long)F.dense(c));
                    row["generator"] = coeffs;
                }
                row["degree"] = v.degree;
                rows.push_back(row);
            }
        }
    }
    if (!csv) out << rows.dump(2) << "\n";
    return 0;
}

inline int cmd_reduce(const CurveArgs& ca, int max_degree, std::ostream& out) {
    LoadedCurve lc = curve_from_json(load_json_file(ca.path));
    FieldCache cache(*lc.field, ca.bounds());
    out << "place,degree,type,a_v,theta_v\n";
    for (int d = 1; d <= max_degree; ++d) {
        for (const Place& v : places_of_degree(*lc.field, d)) {
            ReductionData rd = reduce_at(*lc.curve, v, cache);
            out << v.name() << "," << d << "," << reduction_name(rd.type) << "," << rd.a_v << ",";
            if (rd.type == ReductionType::Good)
                out << fmt_double(rd.theta_v);
            out << "\n";
        }
    }
    return 0;
}

inline int cmd_lpoly(const CurveArgs& ca, int degree, int stab, std::ostream& out) {
    LoadedCurve lc = curve_from_json(load_json_file(ca.path));
    CurveAnalyzer an(*lc.curve, ca.bounds());
    int N = degree;
    if (N < 0) {
        if (lc.field->p() < 5)
            throw std::invalid_argument("characteristic 2 or 3: supply --degree explicitly");
        N = conductor_degree(*lc.curve, an.fields()).big_n;
    }
    auto lr = lpolynomial(an, N, stab);
    Spectrum sp = spectrum(lr.L);
    ojson j = lpoly_to_json(lr.L);
    j["N"] = sp.N;
    j["epsilon"] = sp.epsilon;
    j["rank"] = sp.rank;
    j["m_minus_q"] = sp.m_minus_q;
    ojson angles = ojson::array();
    for (auto& [theta, m] : sp.angles) angles.push_back(ojson::array({round_angle(theta), m}));
    j["angles"] = angles;
    j["purity_residual"] = sp.purity_residual;
    j["forced_zeros"] = sp.forced_zeros;
    j["stabilized_through"] = lr.stabilized_through;
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_race(const CurveArgs& ca, long long max_x, const std::string& method, int degree,
                    std::ostream& out) {
    LoadedCurve lc = curve_from_json(load_json_file(ca.path));
    CurveAnalyzer an(*lc.curve, ca.bounds());
    bool want_direct = method == "direct" || method == "both";
    bool want_explicit = method == "explicit" || method == "both";
    Spectrum sp;
    if (want_explicit) {
        int N = degree;
        if (N < 0) {
            if (lc.field->p() < 5)
                throw std::invalid_argument("characteristic 2 or 3: supply --degree explicitly");
            N = conductor_degree(*lc.curve, an.fields()).big_n;
        }
        sp = spectrum(lpolynomial(an, N).L);
    }
    out << "X,T_direct,T_explicit,sign\n";
    for (long long X = 1; X <= max_x; ++X) {
        double td = 0, te = 0;
        out << X << ",";
        if (want_direct) {
            td = T_direct(an, X);
            out << fmt_double(td);
        }
        out << ",";
        if (want_explicit) {
            te = T_explicit(sp, X);
            out << fmt_double(te);
        }
        double ref = want_direct ? td : te;
        out << "," << (ref > 0 ? "+" : (ref < 0 ? "-" : "0")) << "\n";
    }
    return 0;
}

inline int cmd_density(long long p, int k, long long d, const std::string& spec,
                       const std::string& mode, long long max_x, std::ostream& out) {
    if (!spec.empty()) {
        if (std::sscanf(spec.c_str(), "%lld,%d,%lld", &p, &k, &d) != 3)
            throw std::invalid_argument("--spec expects p,k,d");
    }
    UlmerStructure st = ulmer_structure(ulmer_validate(p, k, d));
    DensityReport rep;
    if (mode == "exact-periodic") {
        rep = ulmer_delta_exact(st);
    } else if (mode == "time-average") {
        rep = density_time_average([&](long long X) { return ulmer_t_per(st, X).to_double(); },
                                   max_x);
    } else {
        throw std::invalid_argument("density mode must be exact-periodic or time-average");
    }
    out << density_to_json(rep).dump(2) << "\n";
    return 0;
}

inline int cmd_sympower(const CurveArgs& ca, int m, int max_n, std::ostream& out) {
    LoadedCurve lc = curve_from_json(load_json_file(ca.path));
    CurveAnalyzer an(*lc.curve, ca.bounds());
    out << "m,N,S_prime,residual\n";
    for (int N = 1; N <= max_n; ++N) {
        BigInt sp = sym_power_sums(an, m, N);
        auto res = explicit_formula_residual(an, m, N);
        out << m << "," << N << "," << sp.to_string() << "," << fmt_double(res.residual) << "\n";
    }
    return 0;
}

inline int cmd_ulmer(long long p, int k, long long d, bool check_theorems, std::ostream& out) {
    UlmerSpec s = ulmer_validate(p, k, d);
    UlmerStructure st = ulmer_structure(s);
    ojson j;
    j["spec"] = ojson{{"p", s.p}, {"k", s.k}, {"d", s.d}, {"n", s.n}, {"q", s.q}};
    j["epsilon_d"] = st.eps;
    j["epsilon_prime_d"] = st.eps_prime;
    j["rank"] = st.rank();
    j["degree"] = st.degree();
    j["m_minus_q"] = st.m_minus_q();
    j["period"] = st.period();
    if (st.degree() <= 64) {
        j["L_coeffs"] = lpoly_to_json(closed_form_L(st))["coeffs"];
    } else {
        ojson groups = ojson::array();
        for (auto& g : st.groups) groups.push_back(ojson{{"order", g.o}, {"phi_total", g.phi}});
        j["L_factors"] = groups;
    }
    j["delta"] = density_to_json(ulmer_delta_exact(st));
    if (check_theorems) {
        ojson reps = ojson::array();
        for (const RegimeReport& r : ulmer_theorem_check(st)) {
            ojson e;
            e["regime"] = r.regime;
            e["applicable"] = r.applicable;
            ojson claims = ojson::array();
            for (auto& c : r.claims)
                claims.push_back(ojson{{"claim", c.description},
                                       {"status", c.status == 1 ? "holds"
                                                                : (c.status == 0 ? "fails" : "undecided")}});
            e["claims"] = claims;
            reps.push_back(e);
        }
        j["theorem_report"] = reps;
    }
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_ulmer_scan(long long p_max, int k_max, long long d_max, std::ostream& out) {
    out << "p,k,d,n,q,epsilon,epsilon_prime,rank,degree,period,delta_lo,delta_hi\n";
    for (long long p = 3; p <= p_max; ++p) {
        if (!is_prime_ll(p)) continue;
        for (int k = 1; k <= k_max; ++k) {
            for (long long d = 1; d <= d_max; ++d) {
                UlmerSpec s;
                try {
                    s = ulmer_validate(p, k, d);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                UlmerStructure st = ulmer_structure(s);
                DensityReport rep = ulmer_delta_exact(st);
                BigRat lo = rep.kind == DensityReport::Kind::Exact ? rep.value : rep.lo;
                BigRat hi = rep.kind == DensityReport::Kind::Exact ? rep.value : rep.hi;
                out << p << "," << k << "," << d << "," << s.n << "," << s.q << "," << st.eps << ","
                    << st.eps_prime << "," << st.rank() << "," << st.degree() << "," << st.period()
                    << "," << lo.to_string() << "," << hi.to_string() << "\n";
            }
        }
    }
    return 0;
}

inline int cmd_limitlaw(const std::string& spectrum_path, long long samples, uint64_t seed,
                        std::ostream& out) {
    Spectrum sp = spectrum_from_json(load_json_file(spectrum_path));
    SpectralRV rv = build_rv(sp);
    MeanVariance mv = mean_variance(sp);
    DeltaMC mc = delta_mc(rv, samples, seed);
    ojson j;
    j["samples"] = samples;
    j["seed"] = seed;
    j["delta_mc"] = mc.delta;
    j["se"] = mc.std_error;
    if (!rv.amps.empty()) {
        DeltaCF cf = delta_cf(rv);
        j["delta_cf"] = cf.delta;
        j["cf_truncation"] = cf.truncation_estimate;
    }
    j["mean"] = mv.mean;
    j["var"] = mv.variance_corrected;
    j["var_uncorrected"] = mv.variance_diagonal;
    GaussianDistance g = gaussian_distance(rv, std::max<long long>(samples, 10000), seed + 1);
    j["gaussian_sup_distance"] = g.sup_distance;
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_twists(const CurveArgs& ca, int d, long long sample, uint64_t seed, int threads,
                      std::ostream& out, std::ostream& err) {
    LoadedCurve lc = curve_from_json(load_json_file(ca.path));
    CurveModel base = lc.curve->short_form() ? *lc.curve : to_short_form(*lc.curve);
    TwistSurvey sv = twist_survey(base, d, sample, seed, ca.bounds(), 20000, threads, 1);
    out << "f,N,epsilon,rank,m_minus_q,delta,delta_se,li_plausible,error\n";
    for (const TwistSample& s : sv.rows) {
        out << s.f.to_string() << ",";
        if (s.error.empty()) {
            out << s.big_n << "," << s.epsilon << "," << s.spec.rank << "," << s.spec.m_minus_q
                << "," << fmt_double(s.delta.delta) << "," << fmt_double(s.delta.std_error) << ","
                << (s.li_plausible ? 1 : 0) << ",";
        } else {
            out << ",,,,,,," << s.error;
        }
        out << "\n";
    }
    ojson summary;
    summary["twists"] = sv.rows.size();
    {
        std::map<std::string, int> hist;
        for (const TwistSample& s : sv.rows) {
            if (!s.error.empty()) continue;
            char bucket[16];
            std::snprintf(bucket, sizeof bucket, "%.1f", std::round(s.delta.delta * 10) / 10);
            hist[bucket]++;
        }
        ojson h;
        for (auto& [b, n] : hist) h[b] = n;
        summary["delta_histogram"] = h;
    }
    summary["conductor_constant"] = sv.conductor_constant;
    summary["common_N"] = sv.common_n;
    summary["max_delta_dev"] = sv.max_delta_dev;
    summary["frac_rank_le_1"] = sv.frac_rank_le_1;
    summary["failures"] = sv.failures;
    err << summary.dump(2) << "\n";
    return 0;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"Hasse-Weil L-functions and Chebyshev-bias races over F_q(t)"};
    app.require_subcommand(1);

    // places
    auto* places = app.add_subcommand("places", "enumerate places of P^1 over F_q");
    long long places_q = 3;
    int places_maxd = 1;
    bool places_csv = false, places_json = false;
    places->add_option("--q", places_q, "field size (prime power)")->required();
    places->add_option("--max-degree", places_maxd)->required();
    places->add_flag("--csv", places_csv);
    places->add_flag("--json", places_json);

    CurveArgs reduce_ca;
    auto* reduce = app.add_subcommand("reduce", "reduction data at every place up to a degree");
    int reduce_maxd = 1;
    reduce->add_option("--curve", reduce_ca.path)->required();
    reduce->add_option("--max-degree", reduce_maxd)->required();
    reduce->add_option("--max-qv", reduce_ca.max_qv);

    CurveArgs lpoly_ca;
    auto* lp = app.add_subcommand("lpoly", "L-polynomial from point counts");
    int lpoly_degree = -1, lpoly_stab = 2;
    bool lpoly_json = false;
    lp->add_option("--curve", lpoly_ca.path)->required();
    lp->add_option("--degree", lpoly_degree);
    lp->add_option("--stab", lpoly_stab);
    lp->add_option("--max-qv", lpoly_ca.max_qv);
    lp->add_flag("--json", lpoly_json);

    CurveArgs race_ca;
    auto* race = app.add_subcommand("race", "the bias series T_E(X)");
    long long race_maxx = 10;
    int race_degree = -1;
    std::string race_method = "both";
    bool race_csv = false;
    race->add_option("--curve", race_ca.path)->required();
    race->add_option("--max-X", race_maxx)->required();
    race->add_option("--method", race_method)->check(CLI::IsMember({"direct", "explicit", "both"}));
    race->add_option("--degree", race_degree);
    race->add_option("--max-qv", race_ca.max_qv);
    race->add_flag("--csv", race_csv);

    auto* dens = app.add_subcommand("density", "bias density for an Ulmer curve");
    long long dens_p = 3, dens_d = 5, dens_maxx = 10000;
    int dens_k = 1;
    std::string dens_mode = "exact-periodic", dens_spec;
    dens->add_option("--spec", dens_spec, "packed p,k,d");
    dens->add_option("--p", dens_p);
    dens->add_option("--k", dens_k);
    dens->add_option("--d", dens_d);
    dens->add_option("--mode", dens_mode)->check(CLI::IsMember({"exact-periodic", "time-average"}));
    dens->add_option("--max-X", dens_maxx);

    CurveArgs sym_ca;
    auto* sym = app.add_subcommand("sympower", "symmetric-power power sums and residuals");
    int sym_m = 1, sym_maxn = 4;
    bool sym_csv = false;
    sym->add_option("--curve", sym_ca.path)->required();
    sym->add_option("--m", sym_m)->required();
    sym->add_option("--max-N", sym_maxn)->required();
    sym->add_option("--max-qv", sym_ca.max_qv);
    sym->add_flag("--csv", sym_csv);

    auto* ul = app.add_subcommand("ulmer", "closed-form data for y^2 + xy = x^3 - t^d");
    long long ul_p = 3, ul_d = 5;
    int ul_k = 1;
    bool ul_check = false, ul_json = false;
    ul->add_option("--p", ul_p)->required();
    ul->add_option("--k", ul_k);
    ul->add_option("--d", ul_d)->required();
    ul->add_flag("--check-theorems", ul_check);
    ul->add_flag("--json", ul_json);

    auto* uls = app.add_subcommand("ulmer-scan", "density table over a parameter box");
    long long uls_pmax = 7, uls_dmax = 30;
    int uls_kmax = 2;
    bool uls_csv = false;
    uls->add_option("--p-max", uls_pmax);
    uls->add_option("--d-max", uls_dmax);
    uls->add_option("--k-max", uls_kmax);
    uls->add_flag("--csv", uls_csv);

    auto* ll = app.add_subcommand("limitlaw", "limiting random variable diagnostics");
    std::string ll_spectrum;
    long long ll_samples = 100000;
    uint64_t ll_seed = 1;
    bool ll_json = false;
    ll->add_option("--spectrum", ll_spectrum)->required();
    ll->add_option("--samples", ll_samples);
    ll->add_option("--seed", ll_seed);
    ll->add_flag("--json", ll_json);

    CurveArgs tw_ca;
    auto* tw = app.add_subcommand("twists", "quadratic twist survey");
    int tw_d = 1, tw_threads = 1;
    long long tw_sample = -1;
    uint64_t tw_seed = 1;
    bool tw_csv = false;
    tw->add_option("--curve", tw_ca.path)->required();
    tw->add_option("--d", tw_d)->required();
    tw->add_option("--sample", tw_sample);
    tw->add_option("--seed", tw_seed);
    tw->add_option("--threads", tw_threads);
    tw->add_option("--max-qv", tw_ca.max_qv);
    tw->add_flag("--csv", tw_csv);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << "\n";
            return 0;
        }
        err << ojson{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }

    try {
        if (*places) return cmd_places(places_q, places_maxd, places_csv, out);
        if (*reduce) return cmd_reduce(reduce_ca, reduce_maxd, out);
        if (*lp) return cmd_lpoly(lpoly_ca, lpoly_degree, lpoly_stab, out);
        if (*race) return cmd_race(race_ca, race_maxx, race_method, race_degree, out);
        if (*dens) return cmd_density(dens_p, dens_k, dens_d, dens_spec, dens_mode, dens_maxx, out);
        if (*sym) return cmd_sympower(sym_ca, sym_m, sym_maxn, out);
        if (*ul) return cmd_ulmer(ul_p, ul_k, ul_d, ul_check, out);
        if (*uls) return cmd_ulmer_scan(uls_pmax, uls_kmax, uls_dmax, out);
        if (*ll) return cmd_limitlaw(ll_spectrum, ll_samples, ll_seed, out);
        if (*tw) return cmd_twists(tw_ca, tw_d, tw_sample, tw_seed, tw_threads, out, err);
    } catch (const WorkBoundError& e) {
        err << ojson{{"error", "work_bound"}, {"bound", e.bound_name}, {"message", e.what()}}.dump()
            << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << ojson{{"error", "failure"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace ffrace
