#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "ghostsim/scenario.hpp"

using namespace ghostsim;

namespace {

const std::string kGood =
    "# demo scenario\n"
    "[source]\n"
    "sigma = 1.0\n"
    "omega = 20.0\n"
    "hbar = 1.0\n"
    "mass = 1.0\n"
    "[slits]\n"
    "y0 = 1.0\n"
    "epsilon = 0.25   # slit width\n"
    "[kinematics]\n"
    "mode = time\n"
    "t0 = 0.1\n"
    "t = 0.5\n";

std::string scenario_dir() { return GHOSTSIM_SCENARIO_DIR; }

}  // namespace

TEST_CASE("well-formed scenario parses with comments and whitespace") {
    const Scenario sc = parse_scenario_text(kGood, "demo");
    CHECK(sc.source.omega == 20.0);
    CHECK(sc.slits.epsilon == 0.25);
    CHECK(sc.kinematics.mode == KinematicsMode::TimeDomain);
    CHECK(sc.kinematics.t == 0.5);
    CHECK_FALSE(sc.grid.has_value());
    CHECK_FALSE(sc.scan.has_value());
}

TEST_CASE("bundled scenarios load") {
    const Scenario fig2 = parse_scenario(scenario_dir() + "/fig2.cfg");
    CHECK(fig2.kinematics.mode == KinematicsMode::DistanceDomain);
    CHECK(fig2.kinematics.D() == doctest::Approx(3.0));
    REQUIRE(fig2.scan.has_value());
    CHECK(fig2.scan->count == 2001);

    const Scenario bench = parse_scenario(scenario_dir() + "/benchmark.cfg");
    REQUIRE(bench.grid.has_value());
    CHECK(bench.grid->n1 == 512);
    CHECK(bench.grid->boundary_floor == 1e-7);

    const Scenario fringe = parse_scenario(scenario_dir() + "/fringe_benchmark.cfg");
    REQUIRE(fringe.grid.has_value());
    CHECK(fringe.grid->boundary_floor == 1e-8);  // default applies
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
    CHECK_THROWS_WITH_AS(parse_scenario_text(kGood + "[detector]\nx = 1\n", "f"),
                         doctest::Contains("unknown section"), ConfigError);
    try {
        parse_scenario_text(kGood + "frobnicate = 3\n", "f");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("f:14") != std::string::npos);
        CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
    }
}

TEST_CASE("syntax problems carry file/line context") {
    CHECK_THROWS_WITH_AS(parse_scenario_text("[source\nsigma=1\n", "f"),
                         doctest::Contains("f:1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_text("sigma = 1\n", "f"),
                         doctest::Contains("outside any"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[source]\nsigma = 1\nsigma = 2\n", "f"),
        doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text(
            "[source]\nsigma = abc\nomega = 20\nhbar = 1\nmass = 1\n", "f"),
        doctest::Contains("invalid number"), ConfigError);
}

TEST_CASE("missing keys and invalid physics become config errors") {
    CHECK_THROWS_WITH_AS(
        parse_scenario_text("[source]\nsigma=1\nomega=20\nhbar=1\n", "f"),
        doctest::Contains("missing required key"), ConfigError);
    // negative width: module invariant surfaces as a ConfigError
    std::string bad = kGood;
    bad.replace(bad.find("epsilon = 0.25"), 14, "epsilon = -0.2");
    CHECK_THROWS_AS(parse_scenario_text(bad, "f"), ConfigError);
    // bad mode
    std::string badmode = kGood;
    badmode.replace(badmode.find("mode = time"), 11, "mode = warp");
    CHECK_THROWS_WITH_AS(parse_scenario_text(badmode, "f"),
                         doctest::Contains("mode must be"), ConfigError);
    // distance keys in time mode are flagged as unused
    CHECK_THROWS_WITH_AS(parse_scenario_text(kGood + "L1 = 2\n", "f"),
                         doctest::Contains("not valid"), ConfigError);
}

TEST_CASE("scan section round-trips, including the marginal sentinel") {
    const std::string text = kGood +
                             "[scan]\n"
                             "particle = P1\n"
                             "fixed = marginal\n"
                             "min = -5\n"
                             "max = 5\n"
                             "count = 101\n";
    const Scenario sc = parse_scenario_text(text, "f");
    REQUIRE(sc.scan.has_value());
    CHECK(sc.scan->particle == Particle::P1);
    CHECK(sc.scan->marginal);
    CHECK(sc.scan->count == 101);

    std::string toofew = text;
    toofew.replace(toofew.find("count = 101"), 11, "count = 10");
    CHECK_THROWS_WITH_AS(parse_scenario_text(toofew, "f"),
                         doctest::Contains(">= 64"), ConfigError);
}

TEST_CASE("CSV serialization is exact and bit-stable") {
    ScanResult s;
    s.scanned_particle = Particle::P2;
    s.positions = {-1.0e-3, 0.0, 1.0 / 3.0, 2.5};
    s.densities = {0.125, 7.25e-300, 3.0, 1.0e17};
    const std::string a = scan_csv_string(s);
    const std::string b = scan_csv_string(s);
    CHECK(a == b);
    CHECK(a.substr(0, 32) == "# ghostsim v1\nposition_m,density");

    const std::string path = "roundtrip.csv";
    write_scan_csv(s, path);
    const ScanResult back = read_scan_csv(path);
    REQUIRE(back.positions.size() == s.positions.size());
    for (size_t i = 0; i < s.positions.size(); ++i) {
        CHECK(back.positions[i] == s.positions[i]);  // exact round trip
        CHECK(back.densities[i] == s.densities[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed CSV is rejected with line numbers") {
    auto write_file = [](const std::string& path, const std::string& text) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    };
    const std::string path = "bad.csv";

    write_file(path, "position_m,density\n0,1\n");
    CHECK_THROWS_WITH_AS(read_scan_csv(path), doctest::Contains("bad header"),
                         ConfigError);

    write_file(path, "# ghostsim v1\nposition_m,density\n0;1\n");
    CHECK_THROWS_WITH_AS(read_scan_csv(path), doctest::Contains(":3"), ConfigError);

    write_file(path, "# ghostsim v1\nposition_m,density\n0,1\n0,2\n");
    CHECK_THROWS_WITH_AS(read_scan_csv(path),
                         doctest::Contains("strictly increasing"), ConfigError);

    write_file(path, "# ghostsim v1\nposition_m,density\n1,xyz\n");
    CHECK_THROWS_WITH_AS(read_scan_csv(path), doctest::Contains("invalid number"),
                         ConfigError);
    std::remove(path.c_str());
}
