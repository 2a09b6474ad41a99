// End-to-end tests against the installed binary (path in env DIHEDRAL_CLI).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("DIHEDRAL_CLI");
    REQUIRE_MESSAGE(p != nullptr, "DIHEDRAL_CLI must point at the binary");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("dihedral_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kZigzag = R"({"vertices": [[0,0,0],[1,0,0],[1,1,0],[2,1,0]]})";
const char* kCrossing = R"({"vertices": [[0,0,0],[2,0,0],[2,1,0],[1,-1,0]]})";

}  // namespace

TEST_CASE("validate reports simplicity and exit code") {
    const auto chain = write_file("zigzag.json", kZigzag);
    const auto r = run("validate " + chain.string());
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["version"] == 1);
    CHECK(j["vertices"] == 4);
    CHECK(j["segments"] == 3);
    CHECK(j["simple"] == true);

    const auto bad = write_file("crossing.json", kCrossing);
    const auto rb = run("validate " + bad.string());
    CHECK(rb.code == 3);
    const json jb = json::parse(rb.out);
    CHECK(jb["simple"] == false);
    CHECK(jb["offending"][0] == 0);
    CHECK(jb["offending"][1] == 2);

    // the same crossing declared as intentional passes
    const auto ok = write_file(
        "crossing_ok.json",
        R"({"vertices": [[0,0,0],[2,0,0],[2,1,0],[1,-1,0]], "allowed_overlaps": [[0,2]]})");
    CHECK(run("validate " + ok.string()).code == 0);
}

TEST_CASE("malformed inputs exit with code 2") {
    const auto trunc = write_file("trunc.json", R"({"vertices": [[0,0,0],[1,)");
    CHECK(run("validate " + trunc.string()).code == 2);

    const auto one = write_file("one.json", R"({"vertices": [[0,0,0]]})");
    CHECK(run("validate " + one.string()).code == 2);

    CHECK(run("validate " + scratch().string() + "/does_not_exist.json").code == 2);

    const auto chain = write_file("zigzag.json", kZigzag);
    CHECK(run("query " + chain.string() + " --edge 99 --angle 1.0").code == 2);
    CHECK(run("query " + chain.string()).code == 2);          // missing required flags
    CHECK(run("frobnicate " + chain.string()).code == 2);     // unknown subcommand
}

TEST_CASE("query reports feasibility both ways") {
    const auto chain = write_file("zigzag.json", kZigzag);
    const auto ok = run("query " + chain.string() + " --edge 1 --angle 3.14159265358979");
    CHECK(ok.code == 0);
    const json j = json::parse(ok.out);
    CHECK(j["feasible"] == true);
    CHECK(j["pairTests"] == 1);
    CHECK(j["exemptions"] == 0);

    // arms cross after three quarters of a counterclockwise full turn
    const auto cross = write_file(
        "arms.json", R"({"vertices": [[1,0,0.5],[0,0,0],[0,0,1],[0,1,0.4]]})");
    const auto bad = run("query " + cross.string() + " --edge 1 --angle 6.283185307179586");
    CHECK(bad.code == 3);
    const json jb = json::parse(bad.out);
    CHECK(jb["feasible"] == false);
    CHECK(jb["witness"]["movingSegment"] == 2);
    CHECK(jb["witness"]["staticSegment"] == 0);
    CHECK(std::abs(jb["witness"]["tFraction"].get<double>() - 0.75) < 1e-9);
}

TEST_CASE("dynamic query writes the rotated chain and reverses cleanly") {
    const auto chain = write_file("roundtrip.json", kZigzag);
    const auto rotated = scratch() / "rotated.json";
    const auto r1 = run("query " + chain.string() + " --edge 1 --angle 0.7 --dynamic --output " +
                        rotated.string());
    CHECK(r1.code == 0);
    CHECK(json::parse(r1.out)["wroteChain"] == rotated.string());
    REQUIRE(fs::exists(rotated));

    // rotating back in place restores the original coordinates
    const auto r2 = run("query " + rotated.string() + " --edge 1 --angle -0.7 --dynamic");
    CHECK(r2.code == 0);
    const json back = json::parse(slurp(rotated));
    const json orig = json::parse(kZigzag);
    for (size_t i = 0; i < 4; ++i)
        for (size_t k = 0; k < 3; ++k)
            CHECK(std::abs(back["vertices"][i][k].get<double>() -
                           orig["vertices"][i][k].get<double>()) < 1e-9);

    // an infeasible dynamic query must leave the file alone
    const auto arms = write_file(
        "arms2.json", R"({"vertices": [[1,0,0.5],[0,0,0],[0,0,1],[0,1,0.4]]})");
    const std::string before = slurp(arms);
    CHECK(run("query " + arms.string() + " --edge 1 --angle 6.28318530718 --dynamic").code == 3);
    CHECK(slurp(arms) == before);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const auto chain = write_file("sim.json", kZigzag);
    const auto a = run("simulate " + chain.string() + " --steps 40 --seed 7");
    const auto b = run("simulate " + chain.string() + " --steps 40 --seed 7");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);  // byte-identical
    const auto c = run("simulate " + chain.string() + " --steps 40 --seed 8");
    CHECK(c.out != a.out);

    const json j = json::parse(a.out);
    CHECK(j["steps"] == 40);
    CHECK(j["trace"].size() == 40);
    CHECK(j["finalChain"]["vertices"].size() == 4);
}

TEST_CASE("a crowded chain rejects some proposals") {
    const auto chain = write_file(
        "arms_sim.json", R"({"vertices": [[1,0,0.5],[0,0,0],[0,0,1],[0,1,0.4]]})");
    const auto r = run("simulate " + chain.string() + " --steps 60 --seed 1");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["accepted"].get<std::size_t>() < 60);
    bool sawReject = false;
    for (const auto& step : j["trace"])
        if (step["feasible"] == false) sawReject = true;
    CHECK(sawReject);
}

TEST_CASE("seed falls back to DIHEDRAL_SEED") {
    const auto chain = write_file("sim_env.json", kZigzag);
    const std::string base = cli_path() + " simulate " + chain.string() + " --steps 25";
    const auto flagged = run("simulate " + chain.string() + " --steps 25 --seed 99");

    FILE* pipe = popen(("DIHEDRAL_SEED=99 " + base + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string envOut;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) envOut.append(buf, got);
    pclose(pipe);
    CHECK(envOut == flagged.out);
}

TEST_CASE("a collinear chain accepts every proposal") {
    const auto chain = write_file(
        "line.json", R"({"vertices": [[0,0,0],[1,0,0],[2,0,0],[3,0,0]]})");
    const auto r = run("simulate " + chain.string() + " --steps 30 --seed 3");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["accepted"] == 30);
    CHECK(j["acceptanceRatio"] == doctest::Approx(1.0));
}

TEST_CASE("reduce answers in both modes and is reproducible") {
    const auto sets = write_file("sets.json", R"({"A": [-1], "B": [0], "C": [1]})");
    for (const std::string mode : {"static", "dynamic"}) {
        const auto r = run("reduce " + sets.string() + " --mode " + mode);
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["version"] == 1);
        CHECK(j["mode"] == mode);
        CHECK(j["answer"]["triple"] == json::array({-1, 0, 1}));
        const auto again = run("reduce " + sets.string() + " --mode " + mode);
        CHECK(again.out == r.out);
    }

    const auto no = write_file("sets_no.json", R"({"A": [1], "B": [4], "C": [7]})");
    const auto r = run("reduce " + no.string());
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["answer"]["triple"].is_null());

    // single-set form
    const auto single = write_file("sets_single.json", R"({"S": [-5, 2, 3]})");
    const auto rs = run("reduce " + single.string());
    CHECK(rs.code == 0);
    const json js = json::parse(rs.out);
    REQUIRE(js["answer"]["triple"].is_array());
    long long sum = 0;
    for (const auto& v : js["answer"]["triple"]) sum += v.get<long long>();
    CHECK(sum == 0);

    const auto badSets = write_file("sets_bad.json", R"({"A": [1.5], "B": [0], "C": [0]})");
    CHECK(run("reduce " + badSets.string()).code == 2);
}

TEST_CASE("bench counters match the advertised bounds") {
    const auto tree = run("bench --structure tree --n 1024 --k 200 --seed 1");
    REQUIRE(tree.code == 0);
    const json jt = json::parse(tree.out);
    CHECK(jt["records"][0]["nodeTouches"]["max"].get<std::size_t>() <= 22);
    CHECK(jt["records"][0]["flushApplications"] == 1024);

    const auto brute = run("bench --structure brute --n 16 64");
    REQUIRE(brute.code == 0);
    const json jb = json::parse(brute.out);
    for (const auto& rec : jb["records"]) {
        CHECK(rec["pairTests"] == rec["closedForm"]);
        const std::size_t n = rec["n"].get<std::size_t>();
        CHECK(rec["closedForm"] == (n / 2) * ((n - 1) / 2));
    }
}

TEST_CASE("render emits a two-view SVG") {
    const auto chain = write_file(
        "overlap.json",
        R"({"vertices": [[0,0,0],[2,0,0],[2,1,0],[1,-1,0]], "allowed_overlaps": [[0,2]]})");
    const auto svg = scratch() / "chain.svg";
    const auto r = run("render " + chain.string() + " --svg " + svg.string());
    CHECK(r.code == 0);
    const std::string text = slurp(svg);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("polyline") != std::string::npos);
    CHECK(text.find("top view") != std::string::npos);
    CHECK(text.find("side view") != std::string::npos);
    CHECK(text.find("stroke-dasharray") != std::string::npos);  // overlap styling
    CHECK(text.find("</svg>") != std::string::npos);

    // no annotations when there is nothing to annotate
    const auto plain = write_file("plain.json", kZigzag);
    const auto svg2 = scratch() / "plain.svg";
    CHECK(run("render " + plain.string() + " --svg " + svg2.string()).code == 0);
    CHECK(slurp(svg2).find("stroke-dasharray") == std::string::npos);
}
