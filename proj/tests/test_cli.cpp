#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zptower/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() { return ZPTOWER_CLI_PATH; }

int run(const std::string& cmdline) {
    int rc = std::system((cmdline + " > cli_stdout.txt 2> cli_stderr.txt").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_spec(const std::string& name, const std::string& content) {
    fs::path dir = "cli_work";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
}

const char* kFlagship = R"({
  "p": 2, "r": 1, "domain": "A1", "f": [0,0,0,1],
  "precision": {"a": 12, "n_max": 3}
})";

}  // namespace

TEST_CASE("cli: points table") {
    auto spec = write_spec("flag.json", kFlagship);
    REQUIRE(run(cli() + " points --spec " + spec.string() + " --n 1 --out cli_work/pts") == 0);
    std::string tsv = slurp("cli_work/pts/points.tsv");
    CHECK(tsv == "# minpoly\tdegree\tfrobenius\nx\t1\t0\nx+1\t1\t1\n");

    // D = 0 gives an empty table
    REQUIRE(run(cli() + " points --spec " + spec.string() + " --n 0 --out cli_work/pts0") == 0);
    CHECK(slurp("cli_work/pts0/points.tsv") == "# minpoly\tdegree\tfrobenius\n");

    // the torus listing excludes the point x
    auto torus = write_spec("torus.json", R"({
      "p": 2, "r": 1, "domain": "Gm", "f": [0,1], "f_neg": [1],
      "precision": {"a": 8, "n_max": 2}
    })");
    REQUIRE(run(cli() + " points --spec " + torus.string() + " --n 1 --out cli_work/ptsT") == 0);
    std::string t = slurp("cli_work/ptsT/points.tsv");
    CHECK(t.find("\nx\t") == std::string::npos);
    CHECK(t.find("x+1\t") != std::string::npos);
}

TEST_CASE("cli: lfun writes the polynomial and its polygon") {
    auto spec = write_spec("flag.json", kFlagship);
    REQUIRE(run(cli() + " lfun --spec " + spec.string() + " --n 1 --out cli_work/lf") == 0);
    json j = json::parse(slurp("cli_work/lf/lfun_n1.json"));
    CHECK(j["ell"] == 2);
    CHECK(j["e"] == 1);
    REQUIRE(j["coeffs"].size() == 3);
    CHECK(j["coeffs"][0][0] == 1);
    CHECK(j["coeffs"][1][0] == 0);
    CHECK(j["coeffs"][2][0] == 2);
    std::string np = slurp("cli_work/lf/newton_n1.tsv");
    CHECK(np == "# index\tvaluation_num\tvaluation_den\n0\t0\t1\n2\t1\t1\n");

    // n = 0: the zeta series of U, no degree
    REQUIRE(run(cli() + " lfun --spec " + spec.string() + " --n 0 --out cli_work/lf0") == 0);
    json j0 = json::parse(slurp("cli_work/lf0/lfun_n0.json"));
    CHECK(j0["ell"].is_null());

    // n beyond n_max is a precision refusal (exit 2)
    CHECK(run(cli() + " lfun --spec " + spec.string() + " --n 4 --out cli_work/lf4") == 2);
}

TEST_CASE("cli: zeta with the point-count oracle") {
    auto spec = write_spec("flag.json", kFlagship);
    REQUIRE(run(cli() + " zeta --spec " + spec.string() + " --n 1 --out cli_work/z") == 0);
    json j = json::parse(slurp("cli_work/z/zeta_n1.json"));
    CHECK(j["degree"] == 2);
    CHECK(j["oracle"]["h1"] == 3);
    CHECK(j["oracle"]["match"] == true);
    CHECK(j["oracle"]["counts"] == json::array({3, 9}));
}

TEST_CASE("cli: verify exits 0 and reports byte-identically") {
    auto spec = write_spec("flag.json", kFlagship);
    REQUIRE(run(cli() + " verify --spec " + spec.string() + " --out cli_work/v1") == 0);
    REQUIRE(run(cli() + " verify --spec " + spec.string() + " --out cli_work/v2") == 0);
    std::string r1 = slurp("cli_work/v1/report.json");
    std::string r2 = slurp("cli_work/v2/report.json");
    CHECK(!r1.empty());
    CHECK(r1 == r2);
    json j = json::parse(r1);
    CHECK(j["all_ok"] == true);
    CHECK(j["lambda_nonzero"] == false);
    CHECK(j["mu"] == 0);
    CHECK(j["lambda"] == 0);
}

TEST_CASE("cli: bad specs exit 4") {
    auto bad = write_spec("bad.json", "{ not json");
    CHECK(run(cli() + " verify --spec " + bad.string() + " --out cli_work/b1") == 4);

    auto notprime = write_spec("np.json", R"({"p": 4, "f": [0,1]})");
    CHECK(run(cli() + " verify --spec " + notprime.string() + " --out cli_work/b2") == 4);

    auto badgcd = write_spec("gcd.json", R"({"p": 2, "f": [0,0,1]})");
    CHECK(run(cli() + " verify --spec " + badgcd.string() + " --out cli_work/b3") == 4);

    CHECK(run(cli() + " verify --spec cli_work/missing.json --out cli_work/b4") == 4);
}

TEST_CASE("cli: tadic dump") {
    auto spec = write_spec("flag.json", kFlagship);
    REQUIRE(run(cli() + " tadic --spec " + spec.string() + " --out cli_work/td") == 0);
    json j = json::parse(slurp("cli_work/td/tadic.json"));
    CHECK(j["p"] == 2);
    CHECK(j["b_s"] == 14);
    // s^0 coefficient 1, s^1 coefficient 2 + T
    CHECK(j["s_coeffs"][0][0] == 1);
    CHECK(j["s_coeffs"][1][0] == 2);
    CHECK(j["s_coeffs"][1][1] == 1);
}

TEST_CASE("cli: tower spec JSON round-trips") {
    auto spec = write_spec("flag.json", kFlagship);
    // load -> serialize -> load -> serialize must be a fixed point
    auto s1 = zptower::io::load_tower_spec(spec.string());
    auto j1 = zptower::io::tower_spec_to_json(s1);
    auto s2 = zptower::io::tower_spec_from_json(j1);
    auto j2 = zptower::io::tower_spec_to_json(s2);
    CHECK(j1.dump() == j2.dump());

    // a generated report also parses as JSON with the documented keys
    REQUIRE(run(cli() + " verify --spec " + spec.string() + " --out cli_work/rt") == 0);
    json rep = json::parse(slurp("cli_work/rt/report.json"));
    for (const char* key : {"tower", "mu", "lambda", "lambda_nonzero", "nu", "c", "per_n",
                            "telescoping_ok", "routes_agree", "all_ok"})
        CHECK(rep.contains(key));
    for (const char* key : {"n", "ell", "slopes", "v_L1", "identity_ok", "ram_lower_bound",
                            "conj4_threshold", "v_h"})
        CHECK(rep["per_n"][0].contains(key));
}

TEST_CASE("cli: precision overrides") {
    auto spec = write_spec("flag.json", kFlagship);
    // shrinking b_s below ell(1) + 1 makes degree detection refuse
    CHECK(run(cli() + " lfun --spec " + spec.string() +
              " --n 1 --prec-bs 2 --out cli_work/ov1") == 2);
    // lowering n_max re-derives b_T; level 1 still works
    CHECK(run(cli() + " lfun --spec " + spec.string() +
              " --n 1 --nmax 1 --out cli_work/ov2") == 0);
    json j = json::parse(slurp("cli_work/ov2/lfun_n1.json"));
    CHECK(j["ell"] == 2);
}

TEST_CASE("cli: scan census with skip logging") {
    auto spec = write_spec("flag.json", kFlagship);
    auto fam = write_spec("family.json", R"([[0,0,0,1], [0,0,1], [0,1,0,1]])");
    REQUIRE(run(cli() + " scan --spec " + spec.string() + " --family " + fam.string() +
                " --out cli_work/sc") == 0);
    std::string census = slurp("cli_work/sc/census.tsv");
    CHECK(census.find("x^3\tok\t0\t0") != std::string::npos);
    CHECK(census.find("x^2\tskipped") != std::string::npos);  // gcd(2, 2) != 1
    CHECK(census.find("x^3+x\tok") != std::string::npos);
}
