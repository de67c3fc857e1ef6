#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mamreal/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const fs::path kData = MAMREAL_TEST_DATA;
const fs::path kGolden = MAMREAL_TEST_GOLDEN;
const std::string kTool = MAMREALIZE_PATH;

struct Run {
    int code = -1;
    std::string out;
    std::string err;

    json parsed() const { return json::parse(out); }
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("mamrealize_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const auto base = scratch_dir() / std::to_string(counter++);
    const auto out = base.string() + ".out", err = base.string() + ".err";
    const std::string cmd = env + " '" + kTool + "' " + args + " > '" + out + "' 2> '" + err + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string data(const char* name) { return "'" + (kData / name).string() + "'"; }

fs::path write_temp(const std::string& name, const json& j) {
    const auto p = scratch_dir() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

// Structure and strings must match exactly; numbers to a relative tolerance.
bool near_equal(const json& a, const json& b, double rel, std::string& where) {
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>(), y = b.get<double>();
        if (std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y))) return true;
        where = std::to_string(x) + " vs " + std::to_string(y);
        return false;
    }
    if (a.type() != b.type()) {
        where = "type mismatch: " + a.dump() + " vs " + b.dump();
        return false;
    }
    if (a.is_object()) {
        if (a.size() != b.size()) {
            where = "key count";
            return false;
        }
        auto ib = b.begin();
        for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
            if (ia.key() != ib.key()) {
                where = "key " + ia.key() + " vs " + ib.key();
                return false;
            }
            if (!near_equal(ia.value(), ib.value(), rel, where)) {
                where = ia.key() + "." + where;
                return false;
            }
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            where = "array length";
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!near_equal(a[i], b[i], rel, where)) {
                where = "[" + std::to_string(i) + "]." + where;
                return false;
            }
        return true;
    }
    if (a != b) where = a.dump() + " vs " + b.dump();
    return a == b;
}

// Set MAMREAL_UPDATE_GOLDEN=1 to rewrite the golden files from the current tool.
void check_golden(const std::string& name, const Run& r) {
    const auto path = kGolden / name;
    if (std::getenv("MAMREAL_UPDATE_GOLDEN")) std::ofstream(path) << r.out;
    REQUIRE(fs::exists(path));
    std::string where;
    const bool same = near_equal(r.parsed(), json::parse(slurp(path)), 1e-9, where);
    INFO(name << ": " << where);
    CHECK(same);
}

double round4(double x) { return std::round(x * 1e4) / 1e4; }

}  // namespace

TEST_CASE("realize") {
    SUBCASE("inner three-compartment example") {
        const auto r = run("realize " + data("inner3_tf.json"));
        REQUIRE(r.code == 0);
        const auto j = r.parsed();
        CHECK(j["verdict"] == "UNIQUE_POSITIVE_REALIZATION");
        CHECK(round4(j["params"]["k10"].get<double>()) == doctest::Approx(0.0030));
        CHECK(round4(j["params"]["k_from_center"][0].get<double>()) == doctest::Approx(0.0015));
        CHECK(round4(j["params"]["k_from_center"][1].get<double>()) == doctest::Approx(0.0027));
        check_golden("realize_inner3.json", r);
    }
    SUBCASE("closed form") {
        const auto r = run("realize --order3 " + data("inner3_tf.json"));
        CHECK(r.code == 0);
        CHECK(r.parsed()["conditions"].back()["id"] == "alpha_sign_pattern");
        CHECK(run("realize --order3 " + data("printed_pkpd_tf.json")).code == 1);
    }
    SUBCASE("exit codes") {
        const auto complex = run("realize " + data("complex_numerator_tf.json"));
        CHECK(complex.code == 3);
        CHECK(complex.parsed()["verdict"] == "NO_REALIZATION");
        CHECK(complex.parsed()["params"].is_null());
        check_golden("realize_complex.json", complex);

        const auto signed_roots = run("realize " + data("positive_roots_tf.json"));
        CHECK(signed_roots.code == 2);
        CHECK(signed_roots.parsed()["verdict"] == "UNIQUE_REALIZATION");

        const auto bad = run("realize " + data("malformed.json"));
        CHECK(bad.code == 1);
        CHECK(bad.out.empty());
        CHECK(bad.err.find("parse error") != std::string::npos);

        CHECK(run("realize /nonexistent/file.json").code == 1);
        CHECK(run("realize").code == 1);
        CHECK(run("").code == 1);
    }
}

TEST_CASE("tolerance overrides are applied and echoed") {
    const auto flag = run("realize --tol-sep 0.95 " + data("inner3_tf.json"));
    CHECK(flag.code == 3);
    CHECK(flag.parsed()["tolerances"]["separation"] == 0.95);

    const auto env = run("realize " + data("inner3_tf.json"), "MAMREALIZE_TOL_SEP=0.95");
    CHECK(env.code == 3);
    CHECK(env.parsed()["tolerances"]["separation"] == 0.95);

    const auto verify = run("realize --tol-verify 1e-6 --tol-im 1e-8 " + data("inner3_tf.json"));
    CHECK(verify.code == 0);
    CHECK(verify.parsed()["tolerances"]["verify"] == 1e-6);
    CHECK(verify.parsed()["tolerances"]["imag"] == 1e-8);

    CHECK(run("realize --tol-sep -1 " + data("inner3_tf.json")).code == 1);
}

TEST_CASE("pkpd") {
    SUBCASE("reference ke0") {
        const auto r = run("pkpd " + data("printed_pkpd_tf.json") + " --ref-ke0 0.0077");
        REQUIRE(r.code == 0);
        const auto j = r.parsed();
        REQUIRE(j.contains("selected"));
        const auto& p = j["branches"][j["selected"].get<std::size_t>()]["params"];
        CHECK(round4(p["ke0"].get<double>()) == doctest::Approx(0.0076));
        CHECK(round4(p["k13"].get<double>()) == doctest::Approx(0.0062));
        CHECK(p["k21"].get<double>() < p["k31"].get<double>());
        check_golden("pkpd_printed_ref.json", r);
    }
    SUBCASE("no reference") {
        const auto r = run("pkpd " + data("printed_pkpd_tf.json"));
        REQUIRE(r.code == 0);
        const auto j = r.parsed();
        CHECK_FALSE(j.contains("selected"));
        CHECK(j["accepted_count"] == 2);
    }
    SUBCASE("wrong order") {
        const auto r = run("pkpd " + data("inner3_tf.json"));
        CHECK(r.code == 1);
        CHECK(r.err.find("order 4") != std::string::npos);
    }
    SUBCASE("no realization") {
        const auto p = write_temp("pkpd_reldeg1.json", {{"num", {1, 0.0012, 1.1e-7, 1e-12}},
                                                        {"den", {1, 0.02482, 0.000143, 8.963e-8, 3.232e-12}}});
        const auto r = run("pkpd '" + p.string() + "'");
        CHECK(r.code == 3);
        CHECK(r.parsed()["verdict"] == "NO_REALIZATION");
    }
}

TEST_CASE("forward") {
    SUBCASE("two compartments") {
        const auto r = run("forward " + data("two_compartment_params.json"));
        REQUIRE(r.code == 0);
        CHECK(r.parsed()["num"] == json::parse("[1.0, 1.0]"));
        CHECK(r.parsed()["den"] == json::parse("[1.0, 3.0, 1.0]"));
    }
    SUBCASE("Schnider fixture") {
        const auto r = run("forward " + data("schnider_params.json"));
        REQUIRE(r.code == 0);
        const auto h = mamreal::io::transfer_function_from_json(mamreal::io::json::parse(r.out));
        CHECK(mamreal::coefficient_residual(h, mamreal::transfer_function(mamreal::schnider_fixture())) == 0.0);
        check_golden("forward_schnider.json", r);
    }
    SUBCASE("relabelled peripherals") {
        const auto r = run("forward " + data("unordered_params.json"));
        REQUIRE(r.code == 0);
        CHECK(r.err.find("warning") != std::string::npos);
        CHECK(r.parsed()["warnings"].size() == 1);
        CHECK(r.parsed()["num"][1] == 0.55);
    }
    SUBCASE("duplicates") {
        const auto r = run("forward " + data("duplicate_params.json"));
        CHECK(r.code == 1);
        CHECK(r.err.find("duplicate") != std::string::npos);
    }
}

TEST_CASE("simulate") {
    SUBCASE("Schnider fixture row count") {
        const auto out = scratch_dir() / "schnider.csv";
        const auto r = run("simulate " + data("schnider_params.json") + " --T 2000 --dt 1 --out '" + out.string() + "'");
        REQUIRE(r.code == 0);
        std::ifstream in(out);
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,y,x1,x2,x3,x4");
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 2001);
    }
    SUBCASE("stdout and decay") {
        const auto r = run("simulate " + data("two_compartment_params.json") + " --T 1 --dt 0.5");
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("t,y,x1,x2\n0,1,1,0\n", 0) == 0);
    }
    SUBCASE("bad grid") {
        CHECK(run("simulate " + data("two_compartment_params.json") + " --T 1 --dt 0").code == 1);
        CHECK(run("simulate " + data("two_compartment_params.json") + " --T 0.1 --dt 1").code == 1);
    }
}

TEST_CASE("check") {
    const auto pk = run("check " + data("printed_pkpd_tf.json"));
    CHECK(pk.code == 0);
    CHECK(pk.parsed()["mode"] == "pkpd");
    CHECK(pk.parsed()["branches"].size() == 4);

    const auto mm = run("check " + data("inner3_tf.json"));
    CHECK(mm.code == 0);
    CHECK(mm.parsed()["mode"] == "mammillary");

    const auto o3 = run("check --mode order3 " + data("inner3_tf.json"));
    CHECK(o3.code == 0);
    CHECK(o3.parsed()["mode"] == "order3");

    CHECK(run("check " + data("positive_roots_tf.json")).code == 2);
    CHECK(run("check " + data("complex_numerator_tf.json")).code == 3);
    CHECK(run("check --mode nonsense " + data("inner3_tf.json")).code == 1);
    check_golden("check_printed_pkpd.json", pk);
}

TEST_CASE("forward then realize reproduces the parameters") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = oracle::random_mammillary(rng, 2 + trial % 6);
        const auto params = write_temp("pipeline_params.json", mamreal::io::to_json(p));
        const auto fwd = run("forward '" + params.string() + "'");
        REQUIRE(fwd.code == 0);
        const auto tf = scratch_dir() / "pipeline_tf.json";
        std::ofstream(tf) << fwd.out;
        const auto r = run("realize '" + tf.string() + "'");
        REQUIRE(r.code == 0);
        const auto q = std::get<mamreal::MammillaryParamsd>(mamreal::io::params_from_json(
            mamreal::io::json::parse(r.out)["params"]));
        CHECK(oracle::max_relative_error(q, p) < 1e-8);
    }
}
