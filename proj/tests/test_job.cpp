#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/job.hpp"

using namespace parisian;
using nlohmann::json;

namespace {

const char* kClExp = R"("model": {"premium": 2, "intensity": 1, "claims": {"law": "exponential", "rate": 1}})";

struct Outcome {
    int code;
    std::string out, diag;
};

Outcome run_text(const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / "parisian_job_test.json";
    std::ofstream(path) << text;
    std::ostringstream out, diag;
    const int code = job::run_config(path.string(), {}, out, diag);
    return {code, out.str(), diag.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

// Field types every ruin/sweep record must carry.
void check_record_schema(const json& r) {
    REQUIRE(r.is_object());
    CHECK(r.at("status").is_string());
    if (r.at("status") != "ok") return;
    CHECK(r.at("x").is_number());
    CHECK(r.at("zeta").is_number());
    CHECK(r.at("probability").is_number());
    CHECK(r.at("probability").get<double>() >= 0.0);
    CHECK(r.at("probability").get<double>() <= 1.0);
    const auto route = r.at("route").get<std::string>();
    CHECK((route == "ClosedFormExp" || route == "ClosedFormBM" || route == "TheoremAssemblyBV" || route == "HybridMC"));
    CHECK(r.at("err_est").get<double>() >= 0.0);
    CHECK(r.at("constant_used").is_number());
    CHECK(r.at("diagnostics").is_object());
}

}  // namespace

TEST_CASE("ruin command on the exponential model") {
    const auto o = run_text(std::string("{") + kClExp + R"(, "command": "ruin", "x": [1], "zeta": [1]})");
    REQUIRE(o.code == 0);
    const auto doc = json::parse(o.out);
    REQUIRE(doc.at("records").size() == 1);
    const auto& r = doc.at("records")[0];
    check_record_schema(r);
    CHECK(r.at("route") == "ClosedFormExp");
}

TEST_CASE("sweep emits the grid product as CSV") {
    const auto o = run_text(std::string("{") + kClExp +
                            R"(, "command": "sweep", "x": [0, 1, 2], "zeta": [0.5, 1], "output": {"format": "csv"}})");
    REQUIRE(o.code == 0);
    const auto l = lines(o.out);
    REQUIRE(l.size() == 7);
    CHECK(l[0] == "x,zeta,probability,route,err_est,constant_used,status");
    CHECK(l[1].rfind("0,0.5,", 0) == 0);
    CHECK(l[2].rfind("0,1,", 0) == 0);
    CHECK(l[3].rfind("1,0.5,", 0) == 0);
    CHECK(l[6].rfind("2,1,", 0) == 0);
    // numbers survive the text round trip
    const auto j = run_text(std::string("{") + kClExp + R"(, "command": "sweep", "x": [0, 1, 2], "zeta": [0.5, 1]})");
    const auto doc = json::parse(j.out);
    for (std::size_t i = 0; i < 6; ++i) {
        check_record_schema(doc["records"][i]);
        std::istringstream row(l[i + 1]);
        std::string a, b, p;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, p, ',');
        CHECK(std::stod(p) == doc["records"][i]["probability"].get<double>());
    }
}

TEST_CASE("simulate is reproducible") {
    const std::string text = std::string("{") + kClExp +
                             R"(, "command": "simulate", "x": [0.5, 1], "zeta": [1],
                                "numerics": {"mc": {"n_paths": 10000, "seed": 42}}})";
    const auto a = run_text(text), b = run_text(text);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto doc = json::parse(a.out);
    CHECK(doc["records"][0]["n_paths"] == 10000);
    const auto c = run_text(text.substr(0, text.find("42")) + "43}}}");
    CHECK(c.out != a.out);
}

TEST_CASE("sweep output does not depend on threads") {
    const std::string base = R"({"model": {"premium": 1, "intensity": 0.5, "sigma": 1,
                                 "claims": {"law": "exponential", "rate": 1}},
                                 "command": "sweep", "x": [0, 1], "zeta": [0.5],
                                 "numerics": {"mc": {"n_paths": 10000, "threads": )";
    const auto one = run_text(base + "1}}}"), four = run_text(base + "4}}}");
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
    CHECK(json::parse(one.out)["records"][0]["route"] == "HybridMC");
}

TEST_CASE("other commands") {
    const auto cl = run_text(std::string("{") + kClExp + R"(, "command": "classical", "x": [1]})");
    CHECK(json::parse(cl.out)["records"][0]["probability"].get<double>() == doctest::Approx(0.5 * std::exp(-0.5)));
    const auto k = run_text(std::string("{") + kClExp + R"(, "command": "constant", "zeta": [1]})");
    CHECK(json::parse(k.out)["records"][0]["route"] == "TheoremAssemblyBV");
    const auto cr = run_text(std::string("{") + kClExp + R"(, "command": "asympt-cramer", "x": [1, 2], "zeta": [1]})");
    CHECK(cr.code == 0);
    CHECK(json::parse(cr.out)["records"].size() == 2);
    CHECK(json::parse(cr.out)["records"][0]["gamma"].get<double>() == doctest::Approx(0.5));
    const auto cv = run_text(std::string("{") + kClExp + R"(, "command": "asympt-conv", "alpha_c": 0.3, "x": [5], "zeta": [1]})");
    CHECK(cv.code == 0);
    const auto sc = run_text(std::string("{") + kClExp + R"(, "command": "scale", "q": [0, 1], "x": [0, 1]})");
    const auto doc = json::parse(sc.out);
    CHECK(doc["records"].size() == 4);
    CHECK(doc["records"][1]["W"].get<double>() == doctest::Approx(1 - 0.5 * std::exp(-0.5)));
}

TEST_CASE("exit codes") {
    CHECK(run_text("{not json").code == 2);
    CHECK(run_text(std::string("{") + kClExp + R"(, "command": "fly", "x": [1], "zeta": [1]})").code == 2);
    CHECK(run_text(std::string("{") + kClExp + R"(, "command": "ruin", "x": [], "zeta": [1]})").code == 2);
    CHECK(run_text(std::string("{") + kClExp + R"(, "command": "ruin", "x": [-1], "zeta": [1]})").code == 2);
    CHECK(run_text(std::string("{") + kClExp + R"(, "command": "ruin", "x": [1], "zeta": [1], "extra": 3})").code == 2);
    CHECK(run_text(R"({"model": {"premium": 0.5, "intensity": 1, "claims": {"law": "exponential", "rate": 1}},
                       "command": "ruin", "x": [1], "zeta": [1]})").code == 2);
    // Cramér asymptotics on heavy tails is a domain error, reported per row
    const auto heavy = run_text(R"({"model": {"premium": 2, "intensity": 1, "claims": {"law": "pareto", "shape": 3, "scale": 1}},
                                    "command": "asympt-cramer", "x": [1], "zeta": [1]})");
    CHECK(heavy.code == 2);
    CHECK(json::parse(heavy.out)["records"][0]["status"].get<std::string>().rfind("domain_error", 0) == 0);
    // a low-order inversion with a wide error ladder fails numerically and names the route
    const auto starved = run_text(R"({"model": {"premium": 3, "intensity": 1, "claims": {"law": "pareto", "shape": 1.5, "scale": 1}},
                                      "command": "ruin", "x": [1], "zeta": [1],
                                      "numerics": {"inversion": {"method": "gaver-stehfest", "terms": 8, "cross_check": true}}})");
    CHECK(starved.code == 3);
    CHECK(starved.diag.find("numerical failure in route") != std::string::npos);
}

TEST_CASE("overrides") {
    const auto path = std::filesystem::temp_directory_path() / "parisian_job_override.json";
    const auto out_path = std::filesystem::temp_directory_path() / "parisian_job_override.out";
    std::ofstream(path) << std::string("{") + kClExp +
                               R"(, "command": "simulate", "x": [1], "zeta": [1], "numerics": {"mc": {"n_paths": 10000}}})";
    std::ostringstream out, diag;
    job::Overrides ov;
    ov.seed = 42;
    ov.output_path = out_path.string();
    CHECK(job::run_config(path.string(), ov, out, diag) == 0);
    CHECK(out.str().empty());
    std::ifstream f(out_path);
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(json::parse(buf.str())["records"][0]["n_paths"] == 10000);
    CHECK(job::run_config("/nonexistent/job.json", {}, out, diag) == 2);
}
