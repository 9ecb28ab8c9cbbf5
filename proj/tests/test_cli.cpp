#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "ffrace/cli.hpp"

using namespace ffrace;

static std::string data_path(const std::string& name) {
    std::vector<std::string> candidates;
    if (const char* dir = std::getenv("FFRACE_DATA_DIR")) candidates.push_back(dir);
    candidates.push_back("../data");
    candidates.push_back("../../data");
    candidates.push_back("data");
    for (const auto& dir : candidates) {
        std::string path = dir + "/" + name;
        if (std::ifstream(path).good()) return path;
    }
    FAIL("data file not found: ", name);
    return name;
}

struct RunResult {
    int code;
    std::string out, err;
};

static RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

TEST_CASE("places outputs q + 1 rows at degree 1") {
    RunResult r = run({"places", "--q", "3", "--max-degree", "1", "--csv"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "kind,generator,degree\n"
          "infinite,inf,1\n"
          "finite,t,1\n"
          "finite,t+1,1\n"
          "finite,t+2,1\n");
}

TEST_CASE("ulmer subcommand reports the exact density") {
    RunResult r = run({"ulmer", "--p", "3", "--k", "5", "--d", "5", "--json"});
    REQUIRE(r.code == 0);
    ojson j = ojson::parse(r.out);
    CHECK(j["delta"]["kind"] == "exact");
    CHECK(j["delta"]["value"] == "1/2");
    CHECK(j["rank"] == 1);
    CHECK(j["L_coeffs"][4] == -3486784401ll);  // -(3^5)^4
}

TEST_CASE("lpoly reproduces the closed form for the degree-4 instance") {
    RunResult r = run({"lpoly", "--curve", data_path("ulmer_d5_q3.json"), "--degree", "4", "--json"});
    REQUIRE(r.code == 0);
    ojson j = ojson::parse(r.out);
    CHECK(j["coeffs"] == ojson::array({1, 0, 0, 0, -81}));
    CHECK(j["epsilon"] == -1);
    CHECK(j["rank"] == 1);
}

TEST_CASE("reduce emits the known degree-1 table") {
    RunResult r = run({"reduce", "--curve", data_path("ulmer_d5_q3.json"), "--max-degree", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("inf,1,additive,0") != std::string::npos);
    CHECK(r.out.find("t,1,split-multiplicative,1") != std::string::npos);
    CHECK(r.out.find("t+1,1,good,-2,") != std::string::npos);  // t+1 = t-2 over F_3
    CHECK(r.out.find("t+2,1,good,1,") != std::string::npos);
}

TEST_CASE("density subcommand in both modes") {
    RunResult ex = run({"density", "--p", "5", "--d", "3", "--mode", "exact-periodic"});
    REQUIRE(ex.code == 0);
    ojson j = ojson::parse(ex.out);
    CHECK(j["kind"] == "exact");
    CHECK(j["value"] == "1");
    RunResult ta = run({"density", "--p", "5", "--d", "3", "--mode", "time-average", "--max-X", "500"});
    REQUIRE(ta.code == 0);
    CHECK(ojson::parse(ta.out)["value"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("race CSV has the expected header and first row") {
    RunResult r = run({"race", "--curve", data_path("ulmer_d5_q3.json"), "--max-X", "3",
                       "--method", "direct", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "X,T_direct,T_explicit,sign");
    std::getline(lines, line);
    CHECK(line.substr(0, 2) == "1,");
    CHECK(line.find("0.333333333333333") != std::string::npos);
}

TEST_CASE("byte-identical reruns") {
    auto args = std::vector<std::string>{"limitlaw", "--spectrum", data_path("spectrum_d5_q3.json"),
                                         "--samples", "20000", "--seed", "9", "--json"};
    RunResult a = run(args);
    RunResult b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    ojson j = ojson::parse(a.out);
    CHECK(j["delta_mc"].get<double>() == doctest::Approx(0.75).epsilon(0.02));
    CHECK(j["mean"].get<double>() == doctest::Approx(1.18301).epsilon(1e-4));
}

TEST_CASE("round trip: emitted curve JSON is accepted back") {
    Fq F5(5, 1);
    std::array<PolyFq, 5> a{PolyFq(F5), PolyFq::from_ints(F5, {-1, -1}), PolyFq(F5),
                            PolyFq::from_ints(F5, {0, 1}), PolyFq(F5)};
    CurveModel E(F5, a);
    ojson j = curve_to_json(E);
    LoadedCurve lc = curve_from_json(j);
    CHECK(lc.curve->coeffs()[1] == PolyFq::from_ints(*lc.field, {-1, -1}));
    CHECK(lc.curve->discriminant().degree() == E.discriminant().degree());
    // the q form is accepted too
    ojson j2 = j;
    j2.erase("p");
    j2.erase("k");
    ojson j3;
    j3["q"] = 5;
    j3["a"] = j2["a"];
    LoadedCurve lc2 = curve_from_json(j3);
    CHECK(lc2.field->q() == 5);
}

TEST_CASE("work bound violations exit with code 2") {
    RunResult r = run({"lpoly", "--curve", data_path("ulmer_d10_q3.json"), "--degree", "9",
                       "--max-qv", "729", "--json"});
    CHECK(r.code == 2);
    ojson e = ojson::parse(r.err);
    CHECK(e["error"] == "work_bound");
    CHECK(e["bound"] == "max_residue_field");
}

TEST_CASE("unknown flags are rejected") {
    RunResult r = run({"places", "--q", "3", "--max-degree", "1", "--frobulate"});
    CHECK(r.code == 1);
    CHECK(r.err.find("usage") != std::string::npos);
}

TEST_CASE("ulmer-scan emits a density table") {
    RunResult r = run({"ulmer-scan", "--p-max", "5", "--d-max", "10", "--k-max", "1", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "p,k,d,n,q,epsilon,epsilon_prime,rank,degree,period,delta_lo,delta_hi");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows > 5);
    CHECK(r.out.find("3,1,5,2,3,0,0,1,4,4,1/2,1") != std::string::npos);
}

TEST_CASE("spectra emitted by lpoly feed back into limitlaw") {
    RunResult lp = run({"lpoly", "--curve", data_path("ulmer_d5_q3.json"), "--degree", "4", "--json"});
    REQUIRE(lp.code == 0);
    std::string tmp = "roundtrip_spectrum.json";
    {
        std::ofstream out(tmp);
        out << lp.out;
    }
    RunResult ll = run({"limitlaw", "--spectrum", tmp, "--samples", "5000", "--seed", "3", "--json"});
    std::remove(tmp.c_str());
    REQUIRE(ll.code == 0);
    ojson j = ojson::parse(ll.out);
    CHECK(j["delta_mc"].get<double>() == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("density accepts the packed spec form") {
    RunResult r = run({"density", "--spec", "3,5,5"});
    REQUIRE(r.code == 0);
    CHECK(ojson::parse(r.out)["value"] == "1/2");
}

TEST_CASE("theorem report through the CLI") {
    RunResult r = run({"ulmer", "--p", "17", "--k", "4", "--d", "273", "--check-theorems", "--json"});
    REQUIRE(r.code == 0);
    ojson j = ojson::parse(r.out);
    CHECK(j["delta"]["value"] == "1");
    CHECK(j["rank"] == 92);
    bool extreme_applicable = false, rank_family_applicable = true;
    for (const auto& rep : j["theorem_report"]) {
        if (rep["regime"] == "extreme-bias") extreme_applicable = rep["applicable"];
        if (rep["regime"] == "rank-density-family") rank_family_applicable = rep["applicable"];
    }
    CHECK(extreme_applicable);
    CHECK_FALSE(rank_family_applicable);
}

TEST_CASE("sympower CSV") {
    RunResult r = run({"sympower", "--curve", data_path("ulmer_d5_q3.json"), "--m", "1", "--max-N",
                       "3", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "m,N,S_prime,residual");
    std::getline(lines, line);
    CHECK(line.substr(0, 6) == "1,1,0,");
}
