// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit if any
// fails. Each criterion checks the implementation against an independent
// oracle or an exact closed form; wall-clock limits are asserted only where
// a criterion states one.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dihedral/chain.hpp"
#include "dihedral/geom3.hpp"
#include "dihedral/motiontree.hpp"
#include "dihedral/reduction.hpp"
#include "dihedral/sweep.hpp"
#include "oracles.hpp"

using namespace dihedral;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(bool ok, const char* name, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long long draw(std::mt19937_64& rng, long long bound) {
    return static_cast<long long>(rng() % (2 * bound + 1)) - bound;
}

ThreeSumInstance random_instance(std::mt19937_64& rng, std::size_t minSize,
                                 std::size_t maxSize, long long bound, bool plant) {
    auto fill = [&](std::vector<long long>& v) {
        const std::size_t sz = minSize + rng() % (maxSize - minSize + 1);
        for (std::size_t i = 0; i < sz; ++i) v.push_back(draw(rng, bound));
    };
    ThreeSumInstance inst;
    fill(inst.A);
    fill(inst.B);
    fill(inst.C);
    if (plant) {
        const long long a = draw(rng, bound), b = draw(rng, bound);
        inst.A.back() = a;
        inst.B.back() = b;
        inst.C.back() = -(a + b);
    }
    return inst;
}

bool member(const std::vector<long long>& v, long long x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

Chain helix(std::size_t vertexCount) {
    Chain c;
    c.vertices.reserve(vertexCount);
    for (std::size_t i = 0; i < vertexCount; ++i) {
        const double t = 0.7 * double(i);
        c.vertices.push_back({std::cos(t), std::sin(t), 0.25 * double(i)});
    }
    return c;
}

// 1. flat-construction reduction answers must match brute force
void criterion_static_reduction() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int agree = 0, yes = 0;
    bool witnessesSum = true;
    const int total = 200;
    for (int it = 0; it < total; ++it) {
        const auto inst = random_instance(rng, 3, 12, 50, false);
        const auto expect = solve_threesum_oracle(inst);
        const auto got = run_static_reduction(inst);
        if (got.answer.has_value() == expect.has_value()) ++agree;
        if (got.answer) {
            ++yes;
            const auto& t = *got.answer;
            if (t[0] + t[1] + t[2] != 0 || !member(inst.A, t[0]) ||
                !member(inst.B, t[1]) || !member(inst.C, t[2]))
                witnessesSum = false;
        }
    }
    const double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d verdicts agree, %d yes-instances, witnesses sum to 0: %s, %.1fs",
                  agree, total, yes, witnessesSum ? "yes" : "NO", dt);
    verdict(agree == total && witnessesSum && dt < 30.0,
            "static reduction equals the 3SUM oracle", buf);
}

// 2. folded-construction reduction: verdict agreement, clean folds, n probes
void criterion_dynamic_reduction() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2002);
    int agree = 0, foldFail = 0, probeMismatch = 0;
    const int total = 100;
    for (int it = 0; it < total; ++it) {
        const std::size_t n = 3 + rng() % 6;  // padded size in [3, 8]
        const auto inst = random_instance(rng, 1, n, 50, it % 2 == 0);
        const auto expect = solve_threesum_oracle(inst);
        const auto got = run_dynamic_reduction(inst, n);
        if (got.answer.has_value() == expect.has_value()) ++agree;
        std::size_t probes = 0;
        for (const auto& q : got.queries) {
            if (q.phase == "probe") ++probes;
            else if (!q.feasible) ++foldFail;
        }
        if (probes != n || got.probeRotations != n) ++probeMismatch;
    }
    const double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d/%d verdicts agree, %d infeasible folds, %d probe-count mismatches, %.1fs",
                  agree, total, foldFail, probeMismatch, dt);
    verdict(agree == total && foldFail == 0 && probeMismatch == 0 && dt < 120.0,
            "folded reduction equals the 3SUM oracle", buf);
}

// 3. lazy motion tree tracks an eager recomputation
void criterion_motion_tree() {
    const std::size_t n = 1024;
    const std::size_t k = 1000;
    std::mt19937_64 rng(3003);
    const Chain start = helix(n);
    MotionTree tree(start);
    Chain eager = start;
    std::size_t maxTouch = 0, overBudget = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t e = rng() % (n - 1);
        const double phi = (double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * kPi;
        tree.rotate_lazy(EdgeRef{e}, phi);
        eager.vertices = oracles::rotated_suffix(eager, EdgeRef{e}, phi);
        maxTouch = std::max(maxTouch, tree.last_rotation_touches());
        if (tree.last_rotation_touches() > 22) ++overBudget;
    }
    const Chain flushed = tree.flush();
    double maxDev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        maxDev = std::max(maxDev, distance(flushed.vertices[i], eager.vertices[i]));
    const bool oneApplyPerLeaf = tree.last_flush_applications() == n;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "n=1024, k=1000: max deviation %.2e, max touches %zu, flush applications %zu",
                  maxDev, maxTouch, tree.last_flush_applications());
    verdict(maxDev <= 1e-6 && overBudget == 0 && oneApplyPerLeaf,
            "motion tree matches eager rotation", buf);
}

// 4. a feasible rotation followed by its inverse restores the chain
void criterion_inverse_restoration() {
    std::mt19937_64 rng(4004);
    int done = 0, restored = 0;
    double worst = 0.0;
    while (done < 100) {
        const Chain c = oracles::random_simple_chain(rng, 4 + rng() % 9);
        const std::size_t e = 1 + rng() % (c.segment_count() - 2);
        const double phi = (double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * kPi;
        const auto fwd = dyn_rotate(c, DihedralQuery{EdgeRef{e}, phi});
        if (!fwd.applied) continue;
        ++done;
        const auto back = dyn_rotate(fwd.chain, DihedralQuery{EdgeRef{e}, -phi});
        if (!back.applied) continue;
        double dev = 0.0;
        for (std::size_t i = 0; i < c.vertex_count(); ++i)
            dev = std::max(dev, distance(back.chain.vertices[i], c.vertices[i]));
        worst = std::max(worst, dev);
        if (dev <= 1e-9) ++restored;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/100 restored, worst deviation %.2e", restored, worst);
    verdict(restored == 100, "inverse rotation restores coordinates", buf);
}

// 5. the sweep never contradicts dense time sampling
void criterion_ccd_vs_sampling() {
    std::mt19937_64 rng(5005);
    int falseFeasible = 0, unexplainedInfeasible = 0, infeasibleSeen = 0;
    const int total = 500;
    for (int it = 0; it < total; ++it) {
        const Chain c = oracles::random_simple_chain(rng, 4 + rng() % 17);  // <= 20 edges
        const std::size_t e = 1 + rng() % (c.segment_count() - 2);
        const double phi = (double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * 3.0 * kPi;
        const auto rep = dihedral_feasible(c, DihedralQuery{EdgeRef{e}, phi});
        const auto sampled = oracles::sample_sweep(c, EdgeRef{e}, phi, 2000);
        if (sampled.penetration && rep.feasible) ++falseFeasible;
        if (!rep.feasible) {
            ++infeasibleSeen;
            if (sampled.minClearance > 2.0 * c.eps()) ++unexplainedInfeasible;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d cases: %d sampled-hit-but-feasible, %d/%d infeasible lacking clearance",
                  total, falseFeasible, unexplainedInfeasible, infeasibleSeen);
    verdict(falseFeasible == 0 && unexplainedInfeasible == 0,
            "sweep agrees with 2000-step sampling", buf);
}

// 6. the integer targets keep the zero-triple relation exactly
void criterion_scaling_identity() {
    std::mt19937_64 rng(6006);
    int checked = 0, zeros = 0, broken = 0;
    while (checked < 10000) {
        const auto inst = random_instance(rng, 1, 6, 60, rng() % 2 == 0);
        const auto s = pad_and_scale(inst);
        for (int pick = 0; pick < 25 && checked < 10000; ++pick, ++checked) {
            const std::size_t i = rng() % s.A.size();
            const std::size_t j = rng() % s.B.size();
            const std::size_t k = rng() % s.C.size();
            const bool zero = s.A[i] + s.B[j] + s.C[k] == 0;
            const bool folded = s.dynAnum[i] + s.dynCnum[k] == 2 * s.dynBnum[j];
            const bool flat = s.staticA[i] + s.B[j] + s.staticC[k] == 0;
            if (zero) ++zeros;
            if (zero != folded || zero != flat) ++broken;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d triples (%d zero-sum), %d identity violations",
                  checked, zeros, broken);
    verdict(broken == 0 && zeros > 0, "scaled targets are exactly equivalent", buf);
}

// 7. exact pair counts for the brute query; logarithmic growth for the tree
void criterion_counters() {
    bool pairExact = true;
    std::string pairDetail;
    for (std::size_t n : {16u, 64u, 256u, 1024u}) {
        Chain c = helix(n + 1);  // n edges
        const auto rep = dihedral_feasible(c, DihedralQuery{EdgeRef{n / 2}, kPi});
        const std::size_t want = (n / 2) * ((n - 1) / 2);
        if (rep.pairTests != want || rep.exemptions != 0) pairExact = false;
        pairDetail += std::to_string(n) + ":" + std::to_string(rep.pairTests) + " ";
    }

    std::mt19937_64 rng(7007);
    bool growthOk = true;
    std::size_t prev = 0;
    std::string touchDetail;
    for (std::size_t n = 16; n <= 1024; n *= 2) {
        MotionTree tree(helix(n));
        std::size_t worst = 0;
        for (int i = 0; i < 200; ++i) {
            tree.rotate_lazy(EdgeRef{rng() % (n - 1)}, 0.01);
            worst = std::max(worst, tree.last_rotation_touches());
        }
        if (prev != 0 && worst > prev + 1) growthOk = false;
        prev = worst;
        touchDetail += std::to_string(worst) + (n < 1024 ? "," : "");
    }
    verdict(pairExact && growthOk,
            "pair counts exact, tree touches grow logarithmically",
            "pairTests " + pairDetail + "| max touches 16..1024: " + touchDetail);
}

// 8. the CLI is byte-deterministic for reduce and simulate
struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("DIHEDRAL_CLI");
    if (!cli) return {};
    FILE* pipe = popen((std::string(cli) + " " + args + " 2>/dev/null").c_str(), "r");
    if (!pipe) return {};
    RunResult r;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void criterion_cli_determinism() {
    if (!std::getenv("DIHEDRAL_CLI")) {
        verdict(false, "CLI reruns are byte-identical", "DIHEDRAL_CLI not set");
        return;
    }
    const fs::path dir =
        fs::temp_directory_path() / ("dihedral_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path sets = dir / "sets.json";
    {
        std::ofstream out(sets);
        out << R"({"A": [-12, 5, 7], "B": [0, 3], "C": [5, 12, -8]})";
    }
    const fs::path chain = dir / "chain.json";
    {
        std::ofstream out(chain);
        out << R"({"vertices": [[0,0,0],[1,0,0],[1,1,0],[2,1,0],[2,1,1]]})";
    }

    bool ok = true;
    std::string detail;
    for (const std::string mode : {"static", "dynamic"}) {
        const auto a = run_cli("reduce " + sets.string() + " --mode " + mode);
        const auto b = run_cli("reduce " + sets.string() + " --mode " + mode);
        if (a.code != 0 || a.out.empty() || a.out != b.out) {
            ok = false;
            detail += "reduce --mode " + mode + " differs; ";
        }
    }
    const auto s1 = run_cli("simulate " + chain.string() + " --steps 50 --seed 31415");
    const auto s2 = run_cli("simulate " + chain.string() + " --steps 50 --seed 31415");
    if (s1.code != 0 || s1.out.empty() || s1.out != s2.out) {
        ok = false;
        detail += "simulate differs; ";
    }
    if (detail.empty()) detail = "reduce (both modes) and simulate byte-identical";
    verdict(ok, "CLI reruns are byte-identical", detail);
    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion_static_reduction();
    criterion_dynamic_reduction();
    criterion_motion_tree();
    criterion_inverse_restoration();
    criterion_ccd_vs_sampling();
    criterion_scaling_identity();
    criterion_counters();
    criterion_cli_determinism();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
