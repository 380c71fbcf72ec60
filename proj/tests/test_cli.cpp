#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "canlift/canlift.hpp"
#include "canlift/moddata.hpp"
#include "canlift/witt.hpp"
#include "canlift/zring.hpp"

// Drives the installed binary through its public surface and checks the JSON
// documents against direct library calls and frozen values.

using json = nlohmann::json;
using namespace canlift;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    json doc;  // parsed stdout when it is valid JSON
};

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("CANLIFT_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    CliResult res{WEXITSTATUS(status), out, json()};
    if (!out.empty() && (out[0] == '{' || out[0] == '['))
        res.doc = json::parse(out, nullptr, false);
    return res;
}

std::string cache_path(const std::string& name) {
    const char* dir = std::getenv("CANLIFT_CACHE");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("data validate") {
    CliResult r = run_cli("data validate --p 5");
    REQUIRE(r.exit_code == 0);
    REQUIRE(!r.doc.is_discarded());
    CHECK(r.doc["schema"] == "canlift-cli-v1");
    CHECK(r.doc["status"] == "ok");
    CHECK(r.doc["payload"]["p"] == 5);
    CHECK(r.doc["payload"]["phi_degree"] == 6);
    CHECK(r.doc["payload"]["checks"].size() == 7);
    CHECK(r.doc["payload"]["ss_poly"]["pretty"] == "j");

    CliResult bad = run_cli("data validate --p 11");
    CHECK(bad.exit_code == 3);
    CHECK(bad.doc["status"] == "MissingData");
    CHECK(!bad.doc.contains("payload"));
    CHECK(bad.doc.contains("error"));
}

TEST_CASE("data ss-poly") {
    CliResult r = run_cli("data ss-poly --p 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["pretty"] == "j + 1");
    CHECK(r.doc["payload"]["coeffs"] == json({"1", "1"}));

    CliResult r13 = run_cli("data ss-poly --p 13");
    CHECK(r13.doc["payload"]["pretty"] == "j + 8");
}

TEST_CASE("witt over Z echoes ghost components") {
    CliResult r = run_cli("witt add --p 2 --n 2 1,0 1,0 --ring Z");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["coords"] == json({"2", "-1"}));
    CHECK(r.doc["payload"]["ghost"] == json({"2", "2"}));

    CliResult g = run_cli("witt ghost --p 2 --n 3 1,1,1 --ring Z");
    CHECK(g.doc["payload"]["ghost"] == json({"1", "3", "7"}));
}

TEST_CASE("witt over Zp omits ghost") {
    CliResult r = run_cli("witt mul --p 2 --n 2 --ring Zp --prec 4 1,1 1,1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["coords"] == json({"1", "4"}));
    CHECK(!r.doc["payload"].contains("ghost"));
    CHECK(r.doc["payload"]["prec"] == 4);
}

TEST_CASE("witt frobenius, verschiebung, teichmuller") {
    CliResult f = run_cli("witt frob --p 2 --n 2 1,1");
    REQUIRE(f.exit_code == 0);
    CHECK(f.doc["payload"]["coords"] == json({"3"}));

    CliResult v = run_cli("witt ver --p 2 --n 2 1,1");
    CHECK(v.doc["payload"]["coords"] == json({"0", "1", "1"}));

    CliResult t = run_cli("witt teich --p 3 --n 2 2");
    CHECK(t.doc["payload"]["coords"] == json({"2", "0"}));
}

TEST_CASE("witt delta matches the library") {
    CliResult r = run_cli("witt delta --p 2 --m 2 --n 1 1,2,3");
    REQUIRE(r.exit_code == 0);
    ZRing Z(2);
    auto grid = plethysm_delta(Z, 2, 2u, 1u, {1, 2, 3});
    REQUIRE(r.doc["payload"]["grid"].size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(r.doc["payload"]["grid"][i].size() == grid[i].size());
        for (std::size_t k = 0; k < grid[i].size(); ++k)
            CHECK(r.doc["payload"]["grid"][i][k] == grid[i][k].get_str());
    }
}

TEST_CASE("witt over a Galois ring") {
    CliResult r = run_cli("witt ghost --p 2 --n 2 --ring GR --prec 2 --r 2 1:0,0:1");
    REQUIRE(r.exit_code == 0);
    json expect = json::array({json({"1", "0"}), json({"1", "2"})});
    CHECK(r.doc["payload"]["ghost"] == expect);
}

TEST_CASE("witt input errors") {
    CHECK(run_cli("witt add --p 2 --n 2 1 1,0").exit_code == 2);
    CHECK(run_cli("witt add --p 4 --n 2 1,0 1,0").exit_code == 2);
    CHECK(run_cli("witt add --p 2 --n 2 1,x 1,0").exit_code == 2);
    CHECK(run_cli("witt frob --p 2 --n 1 1").exit_code == 2);
    CHECK(run_cli("witt mul --p 2 --n 2 --ring Zp 1,1 1,1").exit_code == 2);
    CHECK(run_cli("witt add --p 2 --n 2 --ring Q 1,0 1,0").exit_code == 2);
    CliResult gr = run_cli("witt teich --p 2 --n 2 --ring GR --prec 2 --r 2 1");
    CHECK(gr.exit_code == 2);
    CHECK(gr.doc["status"] == "PrecisionMismatch");
}

TEST_CASE("universal psi") {
    CliResult r = run_cli("universal psi --p 2 --prec 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["num"] == json({"0", "0", "1"}));
    CHECK(r.doc["payload"]["fExp"] == 0);
    CHECK(r.doc["payload"]["auxExp"] == 0);
    CHECK(r.doc["cache"]["enabled"] == true);

    CliResult bound = run_cli("universal psi --p 13 --prec 6");
    CHECK(bound.exit_code == 2);
    CHECK(bound.doc["status"] == "PrecisionBound");
    CHECK(!bound.doc.contains("cache"));
}

TEST_CASE("universal psi warm cache is byte-identical") {
    run_cli("universal psi --p 3 --prec 3");
    CliResult a = run_cli("universal psi --p 3 --prec 3");
    CliResult b = run_cli("universal psi --p 3 --prec 3");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.doc["cache"]["disk_hit"] == true);
}

TEST_CASE("universal coords") {
    CliResult r = run_cli("universal coords --p 5 --len 2 --prec 2");
    REQUIRE(r.exit_code == 0);
    auto coords = r.doc["payload"]["coords"];
    REQUIRE(coords.size() == 2);
    CHECK(coords[0]["num"] == json({"0", "1"}));
    CHECK(coords[0]["fExp"] == 0);

    UniversalWittCoords uc = universal_witt_coords(5, 2, 2);
    json expect = json::array();
    for (u64 c : uc.coords[1].num) expect.push_back(std::to_string(c));
    CHECK(coords[1]["num"] == expect);
    CHECK(coords[1]["fExp"] == uc.coords[1].fExp);
    CHECK(coords[1]["auxExp"] == uc.coords[1].auxExp);

    CHECK(run_cli("universal coords --p 2 --len 5 --prec 1").exit_code == 2);
}

TEST_CASE("universal --out writes the same document") {
    std::string path = cache_path("cli_out_probe.json");
    std::remove(path.c_str());
    CliResult r = run_cli("universal psi --p 3 --prec 2 --out " + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string fileContents((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    CHECK(fileContents == r.out);
    std::remove(path.c_str());
}

TEST_CASE("lift j at CM points") {
    CliResult r = run_cli("lift j --p 7 --r 1 --j 0 --prec 6 --coords");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["jlift"] == json({"0"}));
    auto ws = r.doc["payload"]["witt_coords"];
    REQUIRE(ws.size() == 6);
    for (const auto& w : ws) CHECK(w == json({"0"}));

    CliResult s = run_cli("lift j --p 5 --r 1 --j 3 --prec 6");
    CHECK(s.doc["payload"]["jlift"] == json({"1728"}));

    CliResult ss = run_cli("lift j --p 5 --r 1 --j 0 --prec 4");
    CHECK(ss.exit_code == 2);
    CHECK(ss.doc["status"] == "SupersingularPoint");
}

TEST_CASE("lift j over an extension with trace") {
    GaloisRing F(5, 1, 2);
    std::vector<u64> jbar;
    for (u64 idx = 2; idx < 25; ++idx) {
        GaloisRing::Elem c = F.element_from_index(idx);
        if (F.eq(F.frobenius(c), c)) continue;
        if (!is_ordinary_j(F, c)) continue;
        jbar = c;
        break;
    }
    REQUIRE(jbar.size() == 2);
    std::string jarg = std::to_string(jbar[0]) + ":" + std::to_string(jbar[1]);
    CliResult r =
        run_cli("lift j --p 5 --r 2 --prec 3 --j " + jarg + " --coords --trace");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["jbar"] ==
          json({std::to_string(jbar[0]), std::to_string(jbar[1])}));
    CHECK(r.doc["payload"]["witt_coords"][0] == r.doc["payload"]["jbar"]);
    CHECK(r.doc["payload"]["psi_fix_valuation"].get<unsigned>() >= 3);
    CHECK(r.doc["payload"]["phi_fix_valuation"].get<unsigned>() >= 3);
    CHECK(r.doc["payload"]["iterations"].get<unsigned>() >= 1);
    auto steps = r.doc["payload"]["step_valuations"];
    REQUIRE(steps.size() == r.doc["payload"]["iterations"].get<std::size_t>());
}

TEST_CASE("lift curve") {
    CliResult r = run_cli("lift curve --p 5 --r 1 --prec 3 --a 1 --b 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.doc["payload"]["j"] == json({"103"}));  // 1728 mod 5^3
    CHECK(r.doc["payload"]["count"] == "4");
    CHECK(r.doc["payload"]["frobenius_trace"] == "2");

    CliResult sing = run_cli("lift curve --p 5 --r 1 --prec 2 --a 0 --b 0");
    CHECK(sing.exit_code == 2);
    CHECK(sing.doc["status"] == "Error");

    CliResult p3 = run_cli("lift curve --p 3 --r 1 --prec 2 --a 1 --b 1");
    CHECK(p3.exit_code == 2);
    CHECK(p3.doc["status"] == "UnsupportedResidue");
}

TEST_CASE("argument parsing exits") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("lift j --p 5 --r 1 --j 1 --prec 3 --bogus").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("lift j --p 5 --r 1 --prec 3").exit_code == 2);
}
