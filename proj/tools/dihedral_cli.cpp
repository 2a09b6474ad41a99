// Command-line front end: validation, feasibility queries, Monte Carlo
// simulation, the two hardness-reduction drivers, counter benchmarks, and a
// two-view SVG renderer. Every output is JSON (or SVG) and a pure function
// of the inputs, flags, and seed.
//
// Exit codes: 0 success/feasible, 3 infeasible/not-simple, 2 input error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dihedral/chain.hpp"
#include "dihedral/chain_io.hpp"
#include "dihedral/motiontree.hpp"
#include "dihedral/reduction.hpp"
#include "dihedral/reduction_io.hpp"
#include "dihedral/sweep.hpp"

using nlohmann::json;
using namespace dihedral;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

// Deterministic uniform draws; the 53-bit mantissa mapping avoids any
// library-dependent distribution quirks.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    double unit() { return double(g() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(g() % n); }
};

std::uint64_t env_seed() {
    if (const char* s = std::getenv("DIHEDRAL_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("DIHEDRAL_SEED is not an unsigned integer");
        }
    }
    return 0;
}

void emit(const std::string& text, const std::string& outputPath) {
    std::cout << text << "\n";
    if (!outputPath.empty()) {
        std::ofstream out(outputPath);
        if (!out) throw std::invalid_argument("cannot open output file: " + outputPath);
        out << text << "\n";
    }
}

json chain_json(const Chain& c) { return json::parse(chain_to_json(c)); }

json witness_json(const CollisionEvent& w) {
    return json{{"tFraction", w.tFraction},
                {"angleAtContact", w.angleAtContact},
                {"movingSegment", w.movingSegment},
                {"staticSegment", w.staticSegment},
                {"contact", {w.contact.x, w.contact.y, w.contact.z}}};
}

// Non-self-intersecting helix used by the benchmarks: consecutive segments
// occupy disjoint height slabs, so only adjacent ones can touch.
Chain helix_chain(std::size_t vertexCount) {
    Chain c;
    c.vertices.reserve(vertexCount);
    for (std::size_t i = 0; i < vertexCount; ++i) {
        const double a = 0.7 * double(i);
        c.vertices.push_back(Point3{std::cos(a), std::sin(a), 0.25 * double(i)});
    }
    return c;
}

int cmd_validate(const std::string& chainPath, const std::string& outputPath) {
    Chain c = read_chain_file(chainPath);
    SimplicityReport rep = is_simple(c);
    json j;
    j["version"] = 1;
    j["vertices"] = c.vertex_count();
    j["segments"] = c.segment_count();
    j["simple"] = rep.simple;
    if (!rep.simple) j["offending"] = {rep.offending.first, rep.offending.second};
    emit(j.dump(2), outputPath);
    return rep.simple ? kExitOk : kExitInfeasible;
}

int cmd_query(const std::string& chainPath, std::size_t edge, double angle, bool dynamic,
              unsigned jobs, double tolerance, const std::string& outputPath) {
    Chain c = read_chain_file(chainPath);
    if (tolerance > 0.0) c.tolerance = tolerance;
    if (edge >= c.segment_count())
        throw std::invalid_argument("edge index " + std::to_string(edge) +
                                    " out of range (chain has " +
                                    std::to_string(c.segment_count()) + " segments)");

    const DihedralQuery q{EdgeRef{edge}, angle};
    json j;
    j["version"] = 1;
    FeasibilityReport rep;
    if (dynamic) {
        RotateOutcome out = dyn_rotate(c, q, jobs);
        rep = out.report;
        if (out.applied) {
            const std::string target = outputPath.empty() ? chainPath : outputPath;
            write_chain_file(out.chain, target);
            j["wroteChain"] = target;
        }
    } else {
        rep = dihedral_feasible(c, q, jobs);
    }
    j["feasible"] = rep.feasible;
    j["pairTests"] = rep.pairTests;
    j["exemptions"] = rep.exemptions;
    if (rep.collision) j["witness"] = witness_json(*rep.collision);
    std::cout << j.dump(2) << "\n";
    return rep.feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const std::string& chainPath, std::size_t steps, std::uint64_t seed,
                 double maxAngle, unsigned jobs, double tolerance,
                 const std::string& outputPath) {
    Chain c = read_chain_file(chainPath);
    if (tolerance > 0.0) c.tolerance = tolerance;

    Rng rng(seed);
    json trace = json::array();
    std::size_t accepted = 0;
    for (std::size_t step = 0; step < steps; ++step) {
        const std::size_t edge = rng.index(c.segment_count());
        const double angle = rng.uniform(-maxAngle, maxAngle);
        RotateOutcome out = dyn_rotate(c, DihedralQuery{EdgeRef{edge}, angle}, jobs);
        if (out.applied) {
            c = std::move(out.chain);
            ++accepted;
        }
        trace.push_back(json{{"step", step},
                             {"edge", edge},
                             {"angle", angle},
                             {"feasible", out.report.feasible}});
    }

    json j;
    j["version"] = 1;
    j["steps"] = steps;
    j["seed"] = seed;
    j["maxAngle"] = maxAngle;
    j["accepted"] = accepted;
    j["acceptanceRatio"] = steps == 0 ? 1.0 : double(accepted) / double(steps);
    j["trace"] = std::move(trace);
    j["finalChain"] = chain_json(c);
    emit(j.dump(2), outputPath);
    return kExitOk;
}

int cmd_reduce(const std::string& setsPath, const std::string& mode,
               const std::string& outputPath) {
    ThreeSumInstance inst = read_sets_file(setsPath);
    ReductionTranscript t =
        mode == "dynamic" ? run_dynamic_reduction(inst) : run_static_reduction(inst);
    emit(transcript_to_json(t), outputPath);
    return kExitOk;
}

int cmd_bench(const std::string& structure, const std::vector<std::size_t>& sizes,
              std::size_t k, std::uint64_t seed, unsigned jobs,
              const std::string& outputPath) {
    json records = json::array();
    for (std::size_t n : sizes) {
        if (n < 2) throw std::invalid_argument("bench sizes must be at least 2");
        const auto t0 = std::chrono::steady_clock::now();
        json rec;
        rec["n"] = n;
        if (structure == "tree") {
            // n counts vertices; touches are node-motion writes per rotation
            Rng rng(seed);
            MotionTree tree(helix_chain(n));
            std::size_t maxTouch = 0, totalTouch = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t edge = rng.index(n - 1);
                tree.rotate_lazy(EdgeRef{edge}, rng.uniform(-kPi, kPi));
                maxTouch = std::max(maxTouch, tree.last_rotation_touches());
                totalTouch += tree.last_rotation_touches();
            }
            tree.flush();
            rec["k"] = k;
            rec["nodeTouches"] = {{"mean", k == 0 ? 0.0 : double(totalTouch) / double(k)},
                                  {"max", maxTouch}};
            rec["flushApplications"] = tree.last_flush_applications();
        } else {
            // n counts edges; query the middle edge of a helix of n segments
            Chain c = helix_chain(n + 1);
            const std::size_t edge = n / 2;
            FeasibilityReport rep = dihedral_feasible(c, DihedralQuery{EdgeRef{edge}, kPi}, jobs);
            rec["edge"] = edge;
            rec["pairTests"] = rep.pairTests;
            rec["closedForm"] = (n / 2) * ((n - 1) / 2);
            rec["exemptions"] = rep.exemptions;
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec["wallMs"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        records.push_back(std::move(rec));
    }
    json j;
    j["version"] = 1;
    j["structure"] = structure;
    j["seed"] = seed;
    j["records"] = std::move(records);
    emit(j.dump(2), outputPath);
    return kExitOk;
}

void svg_polyline(std::string& svg, const Chain& c, double ox, double oy, double scale,
                  bool topView) {
    auto px = [&](const Point3& p) { return ox + scale * p.x; };
    auto py = [&](const Point3& p) { return oy - scale * (topView ? p.z : p.y); };
    char buf[160];
    svg += "  <polyline fill=\"none\" stroke=\"#1f3d7a\" stroke-width=\"1\" points=\"";
    for (const Point3& p : c.vertices) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g ", px(p), py(p));
        svg += buf;
    }
    svg += "\"/>\n";
    for (const auto& [a, b] : c.allowed_overlaps) {
        for (std::size_t s : {a, b}) {
            const Point3 p0 = c.segment_start(s), p1 = c.segment_end(s);
            std::snprintf(buf, sizeof buf,
                          "  <line x1=\"%.6g\" y1=\"%.6g\" x2=\"%.6g\" y2=\"%.6g\" ", px(p0),
                          py(p0), px(p1), py(p1));
            svg += buf;
            svg += "stroke=\"#c0392b\" stroke-width=\"2\" stroke-dasharray=\"4 3\"/>\n";
        }
    }
}

int cmd_render(const std::string& chainPath, const std::string& svgPath) {
    Chain c = read_chain_file(chainPath);
    double loX = c.vertices[0].x, hiX = loX;
    double loY = c.vertices[0].y, hiY = loY;
    double loZ = c.vertices[0].z, hiZ = loZ;
    for (const Point3& p : c.vertices) {
        loX = std::min(loX, p.x), hiX = std::max(hiX, p.x);
        loY = std::min(loY, p.y), hiY = std::max(hiY, p.y);
        loZ = std::min(loZ, p.z), hiZ = std::max(hiZ, p.z);
    }
    const double spanX = std::max(hiX - loX, 1e-9);
    const double span = std::max({hiY - loY, hiZ - loZ, spanX * 0.2, 1e-9});
    const double scale = 720.0 / spanX;
    const double viewH = scale * span + 60.0;
    const double width = 800.0;

    std::string svg;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  width, 2 * viewH, width, 2 * viewH);
    svg = buf;
    svg += "  <text x=\"12\" y=\"20\" font-family=\"monospace\" font-size=\"14\">top view "
           "(x-z)</text>\n";
    svg_polyline(svg, c, 40.0 - scale * loX, viewH - 30.0 + scale * loZ, scale, true);
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"12\" y=\"%.6g\" font-family=\"monospace\" font-size=\"14\">side "
                  "view (x-y)</text>\n",
                  viewH + 20.0);
    svg += buf;
    svg_polyline(svg, c, 40.0 - scale * loX, 2 * viewH - 30.0 + scale * loY, scale, false);
    svg += "</svg>\n";

    std::ofstream out(svgPath);
    if (!out) throw std::invalid_argument("cannot open SVG output: " + svgPath);
    out << svg;
    std::cout << "wrote " << svgPath << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dihedral rotation toolkit for open polygonal chains"};
    app.require_subcommand(1);

    std::string chainPath, setsPath, outputPath, svgPath;
    std::string mode = "static", structure = "tree";
    std::size_t edge = 0, steps = 100, benchK = 100;
    double angle = 0.0, maxAngle = kPi, tolerance = 0.0;
    bool dynamic = false;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::vector<std::size_t> sizes;

    auto* validate = app.add_subcommand("validate", "check a chain file for self-intersection");
    validate->add_option("chain", chainPath, "chain JSON file")->required();
    validate->add_option("--output", outputPath, "also write the report here");

    auto* query = app.add_subcommand("query", "test one dihedral rotation for feasibility");
    query->add_option("chain", chainPath, "chain JSON file")->required();
    query->add_option("--edge", edge, "edge index to rotate about")->required();
    query->add_option("--angle", angle, "signed rotation angle in radians")->required();
    query->add_flag("--dynamic", dynamic, "apply the rotation and write the chain if feasible");
    query->add_option("--jobs", jobs, "worker threads for pair tests");
    query->add_option("--tolerance", tolerance, "absolute geometric tolerance override");
    query->add_option("--output", outputPath, "target for --dynamic (default: in place)");

    auto* simulate = app.add_subcommand("simulate", "random dihedral moves, rejecting collisions");
    simulate->add_option("chain", chainPath, "chain JSON file")->required();
    simulate->add_option("--steps", steps, "number of proposed rotations");
    auto* simSeed = simulate->add_option("--seed", seed, "RNG seed (env DIHEDRAL_SEED fallback)");
    simulate->add_option("--max-angle", maxAngle, "angles drawn uniform in [-a, a]");
    simulate->add_option("--jobs", jobs, "worker threads for pair tests");
    simulate->add_option("--tolerance", tolerance, "absolute geometric tolerance override");
    simulate->add_option("--output", outputPath, "also write the stats here");

    auto* reduce = app.add_subcommand("reduce", "decide 3SUM via chain collision queries");
    reduce->add_option("sets", setsPath, "sets JSON file ({A,B,C} or {S})")->required();
    reduce->add_option("--mode", mode, "construction to run")
        ->check(CLI::IsMember({"static", "dynamic"}));
    reduce->add_option("--output", outputPath, "also write the transcript here");

    auto* bench = app.add_subcommand("bench", "counter benchmarks for the two query paths");
    bench->add_option("--structure", structure, "tree (lazy motions) or brute (pair sweeps)")
        ->check(CLI::IsMember({"tree", "brute"}));
    bench->add_option("--n", sizes, "chain sizes")->required()->expected(-1);
    bench->add_option("--k", benchK, "rotations per size (tree)");
    auto* benchSeed = bench->add_option("--seed", seed, "RNG seed (env DIHEDRAL_SEED fallback)");
    bench->add_option("--jobs", jobs, "worker threads for pair tests");
    bench->add_option("--output", outputPath, "also write the report here");

    auto* render = app.add_subcommand("render", "draw top and side views as SVG");
    render->add_option("chain", chainPath, "chain JSON file")->required();
    render->add_option("--svg", svgPath, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (validate->parsed()) return cmd_validate(chainPath, outputPath);
        if (query->parsed()) {
            return cmd_query(chainPath, edge, angle, dynamic, jobs, tolerance, outputPath);
        }
        if (simulate->parsed()) {
            if (simSeed->count() == 0) seed = env_seed();
            return cmd_simulate(chainPath, steps, seed, maxAngle, jobs, tolerance, outputPath);
        }
        if (reduce->parsed()) return cmd_reduce(setsPath, mode, outputPath);
        if (bench->parsed()) {
            if (benchSeed->count() == 0) seed = env_seed();
            return cmd_bench(structure, sizes, benchK, seed, jobs, outputPath);
        }
        if (render->parsed()) return cmd_render(chainPath, svgPath);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitInput;
}
