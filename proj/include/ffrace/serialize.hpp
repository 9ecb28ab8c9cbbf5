#pragma once

// JSON schemas for fields, curves, spectra and density reports.  Exact
// rationals travel as "num/den" strings; Q(sqrt q) values as {a, b} pairs
// of rational strings.

#include <json.hpp>

#include <memory>

#include "ffrace/curve.hpp"
#include "ffrace/lpoly.hpp"
#include "ffrace/race.hpp"

namespace ffrace {

using ojson = nlohmann::ordered_json;

inline ojson field_to_json(const Fq& F) {
    ojson j;
    j["p"] = F.p();
    j["k"] = F.k();
    j["modulus"] = F.modulus();
    return j;
}

inline ojson qsqrt_to_json(const QSqrt& v) {
    return ojson{{"a", v.a().to_string()}, {"b", v.b().to_string()}};
}

// q = p^k decomposed; prime powers factor uniquely
inline std::pair<long long, int> split_prime_power(long long q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    long long p = q;
    for (long long c = 2; c * c <= q; ++c)
        if (q % c == 0) { p = c; break; }
    int k = 0;
    long long v = q;
    while (v % p == 0) { v /= p; ++k; }
    if (v != 1) throw std::invalid_argument("q is not a prime power");
    return {p, k};
}

struct LoadedCurve {
    std::unique_ptr<Fq> field;
    std::unique_ptr<CurveModel> curve;
};

inline std::vector<felem> parse_coeff_list(const Fq& F, const ojson& arr) {
    std::vector<felem> out;
    for (const auto& entry : arr) {
        if (entry.is_number_integer()) {
            out.push_back(F.scalar(entry.get<long long>()));
        } else if (entry.is_array()) {
            std::vector<int> digits;
            for (const auto& d : entry) digits.push_back(d.get<int>());
            out.push_back(F.from_digits(digits));
        } else {
            throw std::invalid_argument("curve JSON: coefficient entries must be ints or digit arrays");
        }
    }
    return out;
}

// accepts {"p":..,"k":..,"a":[5 coefficient arrays]} or {"q":..,"a":[...]}
inline LoadedCurve curve_from_json(const ojson& j, long long max_field_size = (1ll << 21)) {
    long long p;
    int k;
    if (j.contains("p")) {
        p = j.at("p").get<long long>();
        k = j.contains("k") ? j.at("k").get<int>() : 1;
    } else if (j.contains("q")) {
        std::tie(p, k) = split_prime_power(j.at("q").get<long long>());
    } else {
        throw std::invalid_argument("curve JSON: needs p (and k) or q");
    }
    LoadedCurve lc;
    lc.field = std::make_unique<Fq>(p, k, max_field_size);
    const auto& arr = j.at("a");
    if (!arr.is_array() || arr.size() != 5)
        throw std::invalid_argument("curve JSON: \"a\" must list a1,a2,a3,a4,a6");
    std::array<PolyFq, 5> coeffs{PolyFq(*lc.field), PolyFq(*lc.field), PolyFq(*lc.field),
                                 PolyFq(*lc.field), PolyFq(*lc.field)};
    for (int i = 0; i < 5; ++i) coeffs[i] = PolyFq(*lc.field, parse_coeff_list(*lc.field, arr[i]));
    lc.curve = std::make_unique<CurveModel>(*lc.field, coeffs);
    return lc;
}

inline ojson curve_to_json(const CurveModel& E) {
    const Fq& F = E.field();
    ojson j;
    j["p"] = F.p();
    j["k"] = F.k();
    ojson arr = ojson::array();
    for (int i = 0; i < 5; ++i) {
        ojson ci = ojson::array();
        for (felem c : E.coeffs()[i].coeffs()) {
            if (F.k() == 1)
                ci.push_back((long long)F.dense(c));
            else
                ci.push_back(F.digits(c));
        }
        arr.push_back(ci);
    }
    j["a"] = arr;
    return j;
}

inline double round_angle(double theta) {
    // 15 significant digits, enough to reparse losslessly at our scales
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", theta);
    return std::strtod(buf, nullptr);
}

inline ojson spectrum_to_json(const Spectrum& sp) {
    ojson j;
    j["q"] = sp.q;
    j["N"] = sp.N;
    j["rank"] = sp.rank;
    j["m_minus_q"] = sp.m_minus_q;
    j["epsilon"] = sp.epsilon;
    ojson angles = ojson::array();
    for (auto& [theta, m] : sp.angles) angles.push_back(ojson::array({round_angle(theta), m}));
    j["angles"] = angles;
    j["forced_zeros"] = sp.forced_zeros;
    j["purity_residual"] = sp.purity_residual;
    return j;
}

inline Spectrum spectrum_from_json(const ojson& j) {
    Spectrum sp;
    sp.q = j.at("q").get<long long>();
    if (j.contains("N")) {
        sp.N = j.at("N").get<int>();
    } else {
        for (const auto& a : j.at("angles")) sp.N += a[1].get<int>();
    }
    sp.rank = j.at("rank").get<int>();
    sp.m_minus_q = j.at("m_minus_q").get<int>();
    sp.epsilon = j.value("epsilon", 1);
    for (const auto& a : j.at("angles"))
        sp.angles.push_back({a[0].get<double>(), a[1].get<int>()});
    if (j.contains("forced_zeros"))
        for (const auto& z : j.at("forced_zeros")) sp.forced_zeros.push_back(z.get<long long>());
    sp.purity_residual = j.value("purity_residual", 0.0);
    sp.nontrivial_count = sp.N - int(sp.forced_zeros.size());
    return sp;
}

inline ojson lpoly_to_json(const LPolynomial& L) {
    ojson coeffs = ojson::array();
    for (const auto& c : L.coeffs) {
        if (c.fits_int64())
            coeffs.push_back(c.to_int64());
        else
            coeffs.push_back(c.to_string());
    }
    return ojson{{"q", L.q}, {"coeffs", coeffs}};
}

inline ojson density_to_json(const DensityReport& rep) {
    ojson j;
    j["method"] = rep.method;
    switch (rep.kind) {
        case DensityReport::Kind::Exact:
            j["kind"] = "exact";
            j["value"] = rep.value.to_string();
            break;
        case DensityReport::Kind::Interval:
            j["kind"] = "interval";
            j["lo"] = rep.lo.to_string();
            j["hi"] = rep.hi.to_string();
            break;
        case DensityReport::Kind::Estimate:
            j["kind"] = "estimate";
            j["value"] = rep.estimate;
            j["std_error"] = rep.std_error;
            break;
    }
    if (rep.period) j["period"] = rep.period;
    if (!rep.boundary_classes.empty()) j["boundary_classes"] = rep.boundary_classes;
    return j;
}

}  // namespace ffrace
