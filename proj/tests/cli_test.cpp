// End-to-end tests of the relmaps command-line tool: every subcommand is run
// as a subprocess; JSON outputs are checked against the published schemas.
#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "relmaps/json_io.hpp"
#include "relmaps/twisted.hpp"
#include "support/fixtures.hpp"
#include "support/schema_check.hpp"

#ifndef RELMAPS_BIN_PATH
#error "RELMAPS_BIN_PATH must point at the relmaps executable"
#endif
#ifndef RELMAPS_SOURCE_DIR
#error "RELMAPS_SOURCE_DIR must point at the repository root"
#endif

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, const std::string& stdin_data = "") {
    const std::string dir = std::filesystem::temp_directory_path().string();
    static int counter = 0;
    const std::string in_file = dir + "/relmaps_cli_in_" + std::to_string(++counter);
    std::string cmd = std::string(RELMAPS_BIN_PATH) + " " + args;
    if (!stdin_data.empty()) {
        std::ofstream(in_file) << stdin_data;
        cmd += " < " + in_file;
    }
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (!stdin_data.empty()) std::filesystem::remove(in_file);
    return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path =
        (std::filesystem::temp_directory_path() / ("relmaps_" + name)).string();
    std::ofstream(path) << content;
    return path;
}

json load_schema(const std::string& name) {
    const std::string path =
        std::string(RELMAPS_SOURCE_DIR) + "/schemas/" + name + ".schema.json";
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

void expect_schema(const json& value, const std::string& schema_name) {
    auto violations = relmaps::schemacheck::schema_violations(value, load_schema(schema_name));
    for (const auto& v : violations) { INFO(schema_name << ": " << v); }
    CHECK(violations.empty());
}

std::string comb_graph_text() {
    return relmaps::to_json(relmaps::fixtures::comb(3)).dump();
}

}  // namespace

TEST_CASE("cli: validate") {
    const std::string good = write_temp("valid_graph.json", comb_graph_text());
    RunResult ok = run("validate " + good);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("valid") == 0);

    RunResult js = run("--json validate " + good);
    CHECK(js.exit_code == 0);
    json report = json::parse(js.out);
    expect_schema(report, "validation-report");
    CHECK(report["valid"] == true);

    // A structurally broken graph: wrong degree sum.
    relmaps::DualMapGraph bad = relmaps::fixtures::comb(3);
    bad.degree = 7;
    const std::string bad_path = write_temp("invalid_graph.json", relmaps::to_json(bad).dump());
    RunResult no = run("--json validate " + bad_path);
    CHECK(no.exit_code == 1);
    json bad_report = json::parse(no.out);
    expect_schema(bad_report, "validation-report");
    CHECK(bad_report["valid"] == false);
    CHECK(!bad_report["issues"].empty());

    // Unreadable input and malformed JSON are input errors.
    CHECK(run("validate /nonexistent/nope.json").exit_code == 2);
    const std::string garbage = write_temp("garbage.json", "{not json");
    CHECK(run("validate " + garbage).exit_code == 2);
}

TEST_CASE("cli: check") {
    const std::string graph = write_temp("check_graph.json", comb_graph_text());
    const std::string gamma = write_temp(
        "check_gamma.json",
        relmaps::to_json(relmaps::fixtures::comb_gamma(3)).dump());

    RunResult ok = run("check " + graph + " " + gamma);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("smoothable") != std::string::npos);

    RunResult js = run("--json check " + graph + " " + gamma);
    CHECK(js.exit_code == 0);
    json report = json::parse(js.out);
    expect_schema(report, "check-report");
    CHECK(report["is_K"] == true);
    CHECK(report["is_N"] == false);  // contracted component over the point

    SECTION("inline tangency specs replace the gamma file") {
        RunResult inline_ok = run("check " + graph + " --gamma \"(1,1,1)@inf\"");
        CHECK(inline_ok.exit_code == 0);
        // Wrong multiset: an input error, not a negative verdict.
        CHECK(run("check " + graph + " --gamma \"(2,1)@inf\"").exit_code == 2);
        CHECK(run("check " + graph + " --gamma \"(nope)@inf\"").exit_code == 2);
        CHECK(run("check " + graph).exit_code == 2);  // no tangency data at all
    }
    SECTION("a failing graph exits 1 with witnesses in the report") {
        const std::string failing = write_temp(
            "check_failing.json",
            relmaps::to_json(relmaps::fixtures::ramified_mark_graph()).dump());
        const std::string failing_gamma = write_temp(
            "check_failing_gamma.json",
            relmaps::to_json(relmaps::fixtures::ramified_mark_gamma()).dump());
        RunResult no = run("--json check " + failing + " " + failing_gamma);
        CHECK(no.exit_code == 1);
        json rep = json::parse(no.out);
        expect_schema(rep, "check-report");
        CHECK(rep["is_K"] == false);
        bool has_witness = false;
        for (const auto& point : rep["points"])
            for (const auto& cond : point["conditions"])
                if (!cond["witnesses"].empty()) has_witness = true;
        CHECK(has_witness);
    }
    SECTION("graphs can arrive on stdin") {
        RunResult piped = run("check - --gamma \"(1,1,1)@inf\"", comb_graph_text());
        CHECK(piped.exit_code == 0);
    }
}

TEST_CASE("cli: reduce") {
    const std::string chain = write_temp(
        "chain_graph.json", relmaps::to_json(relmaps::fixtures::contracted_chain()).dump());
    RunResult js = run("--json reduce " + chain);
    CHECK(js.exit_code == 0);
    json reduced = json::parse(js.out);
    expect_schema(reduced, "graph");
    CHECK(reduced["vertices"].size() == 3);
    CHECK(reduced["edges"].size() == 2);

    RunResult table = run("reduce " + chain);
    CHECK(table.exit_code == 0);
    CHECK(table.out.find("4 -> 3 vertices") != std::string::npos);
}

TEST_CASE("cli: recipe") {
    const std::string star = write_temp(
        "star_graph.json",
        relmaps::to_json(relmaps::fixtures::fiber_star({2, 3}, {5})).dump());

    RunResult js = run("--json recipe " + star + " --point inf");
    CHECK(js.exit_code == 0);
    json rec = json::parse(js.out);
    expect_schema(rec, "recipe");
    CHECK(rec["verify"]["pass"] == true);
    REQUIRE(rec["components"].size() == 1);
    CHECK(rec["components"][0]["a"] == "6");

    RunResult table = run("recipe " + star + " --point inf");
    CHECK(table.exit_code == 0);
    CHECK(table.out.find("a = 6") != std::string::npos);
    CHECK(table.out.find("A_") != std::string::npos);
    CHECK(table.out.find("all identities hold") != std::string::npos);

    SECTION("divisibility targets are honored and echoed") {
        RunResult mult = run("--json recipe " + star + " --point inf --multiples 1:5");
        CHECK(mult.exit_code == 0);
        json j = json::parse(mult.out);
        CHECK(j["multipliers"]["1"] == 5);
        CHECK(j["components"][0]["a"] == "30");
        CHECK(j["verify"]["pass"] == true);
    }
    SECTION("--no-verify omits the verification block") {
        RunResult quick = run("--json recipe " + star + " --point inf --no-verify");
        CHECK(quick.exit_code == 0);
        json j = json::parse(quick.out);
        CHECK(!j.contains("verify"));
    }
    SECTION("an unbalanced fiber fails verification with exit 1") {
        const std::string bad = write_temp(
            "unbalanced_graph.json",
            relmaps::to_json(relmaps::fixtures::fiber_star({2, 3}, {4})).dump());
        RunResult no = run("--json recipe " + bad + " --point inf");
        CHECK(no.exit_code == 1);
        json j = json::parse(no.out);
        CHECK(j["verify"]["pass"] == false);
    }
    SECTION("unknown points and unreduced graphs are input errors") {
        CHECK(run("recipe " + star + " --point nowhere").exit_code == 2);
        const std::string chain = write_temp(
            "chain_graph2.json",
            relmaps::to_json(relmaps::fixtures::contracted_chain()).dump());
        CHECK(run("recipe " + chain + " --point inf").exit_code == 2);
        CHECK(run("recipe " + star + " --point inf --multiples nope").exit_code == 2);
    }
}

TEST_CASE("cli: hurwitz") {
    RunResult yes = run("--json hurwitz --degree 3 --profile inf:3 --profile z:3");
    CHECK(yes.exit_code == 0);
    json j = json::parse(yes.out);
    expect_schema(j, "hurwitz-report");
    CHECK(j["exists"] == true);
    CHECK(j["covers"] == "1");
    CHECK(j["completions"].size() == 1);
    CHECK(j["completions"][0]["weighted"] == "1/3");

    RunResult no = run("hurwitz --degree 2 --profile inf:2 --profile a:2 --profile b:2");
    CHECK(no.exit_code == 1);
    CHECK(no.out.find("not realizable") != std::string::npos);

    SECTION("partial prescriptions are completed") {
        RunResult partial = run("--json hurwitz --degree 4 --profile inf:2");
        CHECK(partial.exit_code == 0);
        json pj = json::parse(partial.out);
        expect_schema(pj, "hurwitz-report");
        CHECK(pj["partial"] == true);
        CHECK(pj["completions"].size() == 2);
    }
    SECTION("the degree cap guards the factorial search") {
        CHECK(run("hurwitz --degree 9").exit_code == 3);
        RunResult raised = run("--json hurwitz --degree 8 --dmax 8 --no-covers --profile inf:8");
        CHECK(raised.exit_code == 0);
        json rj = json::parse(raised.out);
        CHECK(rj["covers"].is_null());
    }
    SECTION("bad profiles are input errors") {
        CHECK(run("hurwitz --degree 3 --profile inf:4").exit_code == 2);
        CHECK(run("hurwitz --degree 3 --profile nope").exit_code == 2);
        CHECK(run("hurwitz --degree 0").exit_code == 2);
    }
    SECTION("the seed is echoed into metadata") {
        RunResult seeded = run("--json --seed 42 hurwitz --degree 2 --profile inf:2");
        json sj = json::parse(seeded.out);
        CHECK(sj["meta"]["seed"] == 42);
        RunResult unseeded = run("--json hurwitz --degree 2 --profile inf:2");
        CHECK(!json::parse(unseeded.out)["meta"].contains("seed"));
    }
}

TEST_CASE("cli: enumerate") {
    const std::string base = "enumerate --gamma \"(1,1)@inf\" --degree 2";
    RunResult table = run(base);
    CHECK(table.exit_code == 0);
    CHECK(table.out.find("2 stratum/strata") != std::string::npos);

    RunResult js = run("--json " + base);
    CHECK(js.exit_code == 0);
    json j = json::parse(js.out);
    expect_schema(j, "strata");
    CHECK(j["count"] == 2);
    CHECK(j["moduli_dimension"] == 2);

    SECTION("thread count never changes the bytes") {
        const std::string cmd = "--json enumerate --gamma \"(2,1,1)@inf\" --degree 4";
        RunResult one = run(cmd + " --jobs 1");
        RunResult four = run(cmd + " --jobs 4");
        CHECK(one.exit_code == 0);
        CHECK(four.exit_code == 0);
        // The jobs count is echoed in metadata, so compare the strata only.
        json a = json::parse(one.out), b = json::parse(four.out);
        a.erase("meta");
        b.erase("meta");
        CHECK(a.dump() == b.dump());
        CHECK(json::parse(one.out)["meta"]["jobs"] == 1);
        CHECK(json::parse(four.out)["meta"]["jobs"] == 4);
    }
    SECTION("dot bundles carry one graph per stratum") {
        RunResult dot = run(base + " --format dot-bundle");
        CHECK(dot.exit_code == 0);
        CHECK(dot.out.find("graph g {") != std::string::npos);
        CHECK(dot.out.find("// stratum 0") != std::string::npos);
        CHECK(dot.out.find("// stratum 1") != std::string::npos);
    }
    SECTION("gamma files work like inline specs") {
        const std::string gamma = write_temp(
            "enum_gamma.json", relmaps::to_json(relmaps::fixtures::comb_gamma(2)).dump());
        RunResult from_file = run("--json enumerate --gamma-file " + gamma + " --degree 2");
        CHECK(from_file.exit_code == 0);
        json a = json::parse(from_file.out), b = json::parse(js.out);
        a.erase("meta");
        b.erase("meta");
        CHECK(a.dump() == b.dump());
    }
    SECTION("degree beyond the cap is a capacity error") {
        CHECK(run("enumerate --gamma \"(7)@inf\" --degree 7").exit_code == 3);
        CHECK(run("enumerate --gamma \"(7)@inf\" --degree 7 --dmax 7").exit_code == 0);
    }
    SECTION("mismatched totals are input errors") {
        CHECK(run("enumerate --gamma \"(1)@inf\" --degree 2").exit_code == 2);
    }
}

TEST_CASE("cli: elliptic") {
    json config{{"schema", 1},
                {"components", json::array({{{"id", 0},
                                             {"j_degree", 12},
                                             {"marked_fibers", {"I2", "I3", "I7"}}}})},
                {"edges", json::array()}};
    const std::string path = write_temp("elliptic.json", config.dump());

    RunResult yes = run("elliptic " + path);
    CHECK(yes.exit_code == 0);
    CHECK(yes.out.find("smoothable") != std::string::npos);

    RunResult js = run("--json elliptic " + path);
    CHECK(js.exit_code == 0);
    json j = json::parse(js.out);
    expect_schema(j, "elliptic-translation");
    CHECK(j["smoothable"] == true);
    expect_schema(j["graph"], "graph");
    expect_schema(j["gamma"], "gamma");

    SECTION("non-smoothable configurations exit 1") {
        json bad{{"schema", 1},
                 {"components",
                  json::array({{{"id", 0}, {"constant_j", true}, {"marked_fibers", {1, 1}}},
                               {{"id", 1}, {"j_degree", 2}, {"marked_fibers", {1}}}})},
                 {"edges", json::array({{{"id", 0}, {"components", {0, 1}}}})}};
        const std::string bad_path = write_temp("elliptic_bad.json", bad.dump());
        RunResult no = run("--json elliptic " + bad_path);
        CHECK(no.exit_code == 1);
        CHECK(json::parse(no.out)["smoothable"] == false);
    }
    SECTION("additive fibers are input errors") {
        json additive = config;
        additive["components"][0]["marked_fibers"] = {"II*"};
        const std::string add_path = write_temp("elliptic_add.json", additive.dump());
        CHECK(run("elliptic " + add_path).exit_code == 2);
    }
    SECTION("configs can arrive on stdin") {
        RunResult piped = run("elliptic -", config.dump());
        CHECK(piped.exit_code == 0);
    }
}

TEST_CASE("cli: target") {
    RunResult plain = run("target --wps 4,6");
    CHECK(plain.exit_code == 0);
    CHECK(plain.out.find("P(4,6)") != std::string::npos);

    RunResult js = run("--json target --wps 4,6 --reduce");
    CHECK(js.exit_code == 0);
    json j = json::parse(js.out);
    expect_schema(j, "target");
    CHECK(j["coprime_reduction"]["a"] == 2);
    CHECK(j["coprime_reduction"]["b"] == 3);
    CHECK(j["coprime_reduction"]["k"] == 2);

    RunResult reduced_text = run("target --wps 4,6 --reduce");
    CHECK(reduced_text.out.find("P(2,3)") != std::string::npos);

    CHECK(run("target --wps 0,6").exit_code == 2);
    CHECK(run("target --wps nope").exit_code == 2);
}

TEST_CASE("cli: argument errors") {
    CHECK(run("").exit_code == 2);                  // a subcommand is required
    CHECK(run("frobnicate").exit_code == 2);        // unknown subcommand
    CHECK(run("recipe missing-arg").exit_code == 2);  // --point is required
    CHECK(run("--jobs 0 enumerate --gamma \"(2)@inf\" --degree 2").exit_code == 2);
    RunResult help = run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("relmaps") != std::string::npos);
}
