#include "dihedral/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "dihedral/geom3.hpp"

namespace dihedral {

namespace {

std::vector<long long> dedup_sorted(const std::vector<long long>& v) {
    std::set<long long> s(v.begin(), v.end());
    return std::vector<long long>(s.begin(), s.end());
}

long long max_abs(const std::vector<long long>& v, long long seed) {
    long long m = seed;
    for (long long x : v) m = std::max(m, std::llabs(x));
    return m;
}

}  // namespace

std::optional<std::array<long long, 3>> solve_threesum_oracle(const ThreeSumInstance& inst) {
    const auto A = dedup_sorted(inst.A);
    const auto B = dedup_sorted(inst.B);
    const auto C = dedup_sorted(inst.C);
    for (long long a : A)
        for (long long b : B)
            for (long long c : C)
                if (a + b + c == 0) return std::array<long long, 3>{a, b, c};
    return std::nullopt;
}

std::optional<std::array<long long, 3>> threesum_quadratic(const ThreeSumInstance& inst) {
    const auto A = dedup_sorted(inst.A);
    const auto B = dedup_sorted(inst.B);
    const std::unordered_set<long long> setC(inst.C.begin(), inst.C.end());
    for (long long a : A)
        for (long long b : B)
            if (setC.count(-(a + b))) return std::array<long long, 3>{a, b, -(a + b)};
    return std::nullopt;
}

ThreeSumInstance three_sets_from_single(const std::vector<long long>& S) {
    return ThreeSumInstance{S, S, S};
}

std::vector<long long> single_from_three_sets(const ThreeSumInstance& inst) {
    // Shift so the groups can only cancel one-per-set: with M beyond 3*maxabs,
    // the shift part k1*M + 2*k2*M - 3*k3*M of any 3-pick vanishes only for
    // k1 = k2 = k3 = 1.
    long long mx = max_abs(inst.A, 0);
    mx = max_abs(inst.B, mx);
    mx = max_abs(inst.C, mx);
    const long long M = 3 * mx + 1;
    std::set<long long> s;
    for (long long a : inst.A) s.insert(a + M);
    for (long long b : inst.B) s.insert(b + 2 * M);
    for (long long c : inst.C) s.insert(c - 3 * M);
    return std::vector<long long>(s.begin(), s.end());
}

ScaledSets pad_and_scale(const ThreeSumInstance& inst, std::size_t minSize) {
    auto prep = [](const std::vector<long long>& v, const char* name) {
        if (v.empty()) throw std::invalid_argument(std::string("set ") + name + " is empty");
        for (long long x : v)
            if (std::llabs(x) > kValueBound)
                throw std::invalid_argument("value " + std::to_string(x) +
                                            " exceeds the certified bound of " +
                                            std::to_string(kValueBound));
        return dedup_sorted(v);
    };
    ScaledSets out;
    out.A = prep(inst.A, "A");
    out.B = prep(inst.B, "B");
    out.C = prep(inst.C, "C");

    out.m0 = std::max<long long>(1, max_abs(out.C, max_abs(out.B, max_abs(out.A, 0))));
    const std::size_t n =
        std::max(minSize, std::max({out.A.size(), out.B.size(), out.C.size()}));
    auto pad = [&](std::vector<long long>& v) {
        long long next = 7 * out.m0 + 1;  // sentinels: any sum using one is positive
        while (v.size() < n) v.push_back(next++);
        std::sort(v.begin(), v.end());
    };
    pad(out.A);
    pad(out.B);
    pad(out.C);
    out.m = std::max<long long>(1, max_abs(out.C, max_abs(out.B, max_abs(out.A, 0))));

    for (long long a : out.A) {
        out.staticA.push_back(a - 3 * out.m);
        out.dynAnum.push_back(2 * a - 10 * out.m);
    }
    for (long long b : out.B) out.dynBnum.push_back(-b);
    for (long long c : out.C) {
        out.staticC.push_back(c + 3 * out.m);
        out.dynCnum.push_back(2 * c + 10 * out.m);
    }
    return out;
}

// ---- flat construction ----

namespace {

// Measured lower bound on pairwise distance of non-adjacent segments.
double min_non_adjacent_distance(const Chain& c) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t nseg = c.segment_count();
    for (std::size_t i = 0; i + 2 < nseg; ++i)
        for (std::size_t j = i + 2; j < nseg; ++j)
            best = std::min(best, segment_distance(c.segment_start(i), c.segment_end(i),
                                                   c.segment_start(j), c.segment_end(j)));
    return best;
}

}  // namespace

StaticConstruction build_static_chain(const ScaledSets& s) {
    const double q = 0.25;  // tooth half-width; forces |a+b+c| <= 1/2 at contact
    const std::size_t K = s.B.size();
    const double step = 1.5 / double(K);

    // staircase verticals at x = -b/2, walked in ascending x (descending b)
    std::vector<std::pair<double, long long>> stair;
    for (std::size_t i = K; i-- > 0;) stair.emplace_back(-0.5 * double(s.B[i]), s.B[i]);

    std::vector<Point3> v;
    auto to = [&](double x, double y) { v.push_back(Point3{x, y, 0.0}); };
    auto seg = [&] { return v.size() - 2; };  // index of the edge just closed

    StaticConstruction out;

    // left comb: teeth of height 1 standing on the floor y = 0
    for (std::size_t i = 0; i < s.staticA.size(); ++i) {
        const double X = double(s.staticA[i]);
        to(X - q, 0.0);  // first call seeds the start vertex, later ones close a spine edge
        to(X - q, 1.0);
        out.toothMap[seg()] = s.A[i];
        to(X + q, 1.0);
        out.toothMap[seg()] = s.A[i];
        to(X + q, 0.0);
        out.toothMap[seg()] = s.A[i];
    }
    to(stair.front().first, 0.0);

    for (std::size_t k = 0; k < K; ++k) {
        const double topY = (k + 1 == K) ? 1.5 : double(k + 1) * step;
        to(stair[k].first, topY);
        out.featureMap.emplace_back(stair[k].second, EdgeRef{seg()});
        if (k + 1 < K) to(stair[k + 1].first, topY);
    }

    // right comb: teeth hanging from the ceiling y = 3/2 down to 1/2
    for (std::size_t i = 0; i < s.staticC.size(); ++i) {
        const double X = double(s.staticC[i]);
        to(X - q, 1.5);
        to(X - q, 0.5);
        out.toothMap[seg()] = s.C[i];
        to(X + q, 0.5);
        out.toothMap[seg()] = s.C[i];
        to(X + q, 1.5);
        out.toothMap[seg()] = s.C[i];
    }

    out.chain = Chain{std::move(v), {}, {}};
    out.chain.validate();

    auto rep = is_simple(out.chain);
    if (!rep.simple)
        throw std::logic_error("flat construction self-intersects at segments " +
                               std::to_string(rep.offending.first) + "," +
                               std::to_string(rep.offending.second));

    out.minNonAdjacentDistance = min_non_adjacent_distance(out.chain);
    const double mD = double(s.m);
    if (out.minNonAdjacentDistance < std::min(q, step) - 1e-9)
        throw std::logic_error("flat construction clearance below min(1/4, step)");
    if (stair.back().first - stair.front().first > mD + 1e-9)
        throw std::logic_error("staircase wider than m");
    const double leftEdge = double(s.staticA.back()) + q;
    const double rightEdge = double(s.staticC.front()) - q;
    if (stair.front().first - leftEdge < 1.5 * mD - q - 1e-9 ||
        rightEdge - stair.back().first < 1.5 * mD - q - 1e-9)
        throw std::logic_error("staircase too close to a comb");
    return out;
}

ReductionTranscript run_static_reduction(const ThreeSumInstance& inst) {
    const ScaledSets scaled = pad_and_scale(inst);
    const StaticConstruction sc = build_static_chain(scaled);

    ReductionTranscript t;
    t.mode = "static";
    for (const auto& [b, riser] : sc.featureMap) {
        const FeasibilityReport rep = dihedral_feasible(sc.chain, DihedralQuery{riser, kTwoPi});
        t.queries.push_back(
            QueryRecord{"probe", riser.index, kTwoPi, rep.feasible, rep.collision, rep.pairTests});
        ++t.probeRotations;
        t.pairTestsTotal += rep.pairTests;
        if (!rep.feasible && !t.answer) {
            const CollisionEvent& w = *rep.collision;
            const long long a = sc.toothMap.at(w.staticSegment);
            const long long c = sc.toothMap.at(w.movingSegment);
            if (a + b + c != 0)
                throw std::logic_error("collision witness does not name a zero triple");
            t.answer = std::array<long long, 3>{a, b, c};
        }
    }
    return t;
}

// ---- folded construction ----

CanonicalChain build_canonical_chain(std::size_t n) {
    if (n == 0) throw std::invalid_argument("canonical chain needs at least one tooth");

    CanonicalChain cc;
    cc.teeth = n;
    const double h = 1.5 / double(n + 1);
    const double bump = std::min(0.1, 0.5 * h);
    cc.stepHeight = h;
    cc.bump = bump;

    std::vector<Point3> v;
    std::set<std::pair<std::size_t, std::size_t>> allowed;
    auto to = [&](double x, double y) { v.push_back(Point3{x, y, 0.0}); };
    auto seg = [&] { return v.size() - 2; };

    std::size_t pending = static_cast<std::size_t>(-1);
    auto openHinge = [&](std::string name, std::size_t p1, std::size_t jog, double span) {
        cc.hinges.push_back(Hinge{std::move(name), EdgeRef{p1}, EdgeRef{jog}, EdgeRef{0}, span});
        pending = cc.hinges.size() - 1;
    };
    auto borrowPivot2 = [&](std::size_t e) {
        cc.hinges[pending].pivot2 = EdgeRef{e};
        pending = static_cast<std::size_t>(-1);
    };

    // lead-in crank; its far pivot is borrowed from the first tooth
    to(-7.0, -0.5 * bump);
    to(-7.0, -bump);
    const std::size_t startJog = seg();
    to(-5.5, -bump);
    to(-5.5, -0.5 * bump);
    const std::size_t leadJog = seg();
    to(-4.0, -0.5 * bump);
    openHinge("lead-in", startJog, leadJog, 3.0);

    // left comb: needle teeth rising to 1, retraced down past the spine level
    for (std::size_t i = 0; i < n; ++i) {
        const double t = -4.0 + 2.0 * double(i);
        const std::size_t approach = seg();  // edge arriving at the tooth foot
        to(t, 1.0);
        const std::size_t up = seg();
        to(t, -bump);
        const std::size_t down = seg();
        cc.leftTeeth.push_back({up, down});
        allowed.insert({up, down});        // the needle retraces itself
        allowed.insert({approach, down});  // the retrace passes the approach level
        borrowPivot2(up);
        if (i + 1 < n) {
            to(t + 1.0, -bump);
            to(t + 1.0, -0.5 * bump);
            const std::size_t jog = seg();
            to(t + 2.0, -0.5 * bump);
            openHinge("left-spine-" + std::to_string(i + 1), down, jog, 2.0);
        } else {
            to(t + 3.5, -bump);
            to(t + 3.5, -0.5 * bump);
            const std::size_t jog = seg();
            to(2.0 * double(n) + 1.0, -0.5 * bump);
            openHinge("left-to-stairs", down, jog, 7.0);
        }
    }

    // staircase: n probe risers plus one structural riser topping out at 3/2
    for (std::size_t k = 1; k <= n + 1; ++k) {
        const double x = 2.0 * double(n) + double(k);
        const double top = (k <= n) ? double(k) * h + bump : 1.5;
        to(x, top);
        const std::size_t riser = seg();
        borrowPivot2(riser);
        if (k <= n) {
            cc.probeRisers.push_back(EdgeRef{riser});
            to(x + 0.5, top);
            to(x + 0.5, double(k) * h + 0.5 * bump);
            const std::size_t jog = seg();
            to(x + 1.0, double(k) * h + 0.5 * bump);
            openHinge("stair-" + std::to_string(k), riser, jog, 1.0);
        } else {
            cc.structuralRiser = EdgeRef{riser};
        }
    }

    // exit crank to the right comb; the extra landing+jog keep the arm off
    // the staircase exit level while preserving equal half-spans of 4
    {
        const double xr = 3.0 * double(n) + 1.0;
        to(xr + 1.0, 1.5);
        to(xr + 1.0, 1.5 + bump);
        to(xr + 4.0, 1.5 + bump);
        to(xr + 4.0, 1.5 + 0.5 * bump);
        const std::size_t jog = seg();
        to(xr + 8.0, 1.5 + 0.5 * bump);
        openHinge("stairs-to-right", cc.structuralRiser.index, jog, 8.0);
    }

    // right comb: needles hanging to 1/2, retraced up past the spine level
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = 3.0 * double(n) + 9.0 + 2.0 * double(i);
        const std::size_t approach = seg();
        to(cx, 0.5);
        const std::size_t down = seg();
        to(cx, 1.5 + bump);
        const std::size_t up = seg();
        cc.rightTeeth.push_back({up, down});
        allowed.insert({down, up});
        allowed.insert({approach, up});
        borrowPivot2(down);
        if (i + 1 < n) {
            to(cx + 1.0, 1.5 + bump);
            to(cx + 1.0, 1.5 + 0.5 * bump);
            const std::size_t jog = seg();
            to(cx + 2.0, 1.5 + 0.5 * bump);
            openHinge("right-spine-" + std::to_string(i + 1), up, jog, 2.0);
        }
    }

    if (pending != static_cast<std::size_t>(-1))
        throw std::logic_error("canonical chain left a hinge without its far pivot");

    cc.chain = Chain{std::move(v), std::move(allowed), {}};
    cc.chain.validate();
    if (cc.chain.segment_count() != 14 * n + 7)
        throw std::logic_error("canonical chain has " +
                               std::to_string(cc.chain.segment_count()) +
                               " segments, expected " + std::to_string(14 * n + 7));
    if (cc.hinges.size() != 3 * n + 1)
        throw std::logic_error("canonical chain hinge registry is incomplete");

    auto rep = is_simple(cc.chain);
    if (!rep.simple)
        throw std::logic_error("canonical chain self-intersects at segments " +
                               std::to_string(rep.offending.first) + "," +
                               std::to_string(rep.offending.second));
    return cc;
}

HingeFoldPlan make_fold_plan(const CanonicalChain& cc, std::size_t hingeIndex,
                             double targetSpan, const Chain& current) {
    if (hingeIndex >= cc.hinges.size()) throw std::out_of_range("hinge index out of range");
    const Hinge& h = cc.hinges[hingeIndex];
    const double x1 = current.vertices[h.pivot1.index].x;
    const double x2 = current.vertices[h.pivot2.index].x;
    const double L = std::abs(x2 - x1);
    if (!(targetSpan > 0.0) || targetSpan > L + 1e-9) {
        std::ostringstream msg;
        msg << "hinge '" << h.name << "': target span " << targetSpan << " outside (0, " << L
            << "]";
        throw std::invalid_argument(msg.str());
    }
    HingeFoldPlan plan;
    plan.hinge = hingeIndex;
    plan.targetSpan = targetSpan;
    plan.theta = std::acos(std::min(1.0, targetSpan / L));
    plan.program = {{{h.pivot1, plan.theta},
                     {h.midJog, -2.0 * plan.theta},
                     {h.pivot2, plan.theta}}};
    return plan;
}

FoldResult fold_hinge(const Chain& c, const HingeFoldPlan& plan) {
    FoldResult out;
    out.chain = c;
    for (const auto& [edge, effective] : plan.program) {
        const Point3& a = out.chain.vertices[edge.index];
        const Point3& b = out.chain.vertices[edge.index + 1];
        const double dirY = b.y - a.y;
        if (std::abs(dirY) <= out.chain.eps())
            throw std::logic_error("fold pivot " + std::to_string(edge.index) +
                                   " is not vertical");
        const double issued = dirY > 0.0 ? effective : -effective;
        RotateOutcome res = dyn_rotate(out.chain, DihedralQuery{edge, issued});
        out.queries.push_back(QueryRecord{"encode", edge.index, issued, res.report.feasible,
                                          res.report.collision, res.report.pairTests});
        if (!res.applied) {
            const CollisionEvent& w = *res.report.collision;
            throw std::runtime_error("encoding fold collided at segments " +
                                     std::to_string(w.movingSegment) + "," +
                                     std::to_string(w.staticSegment));
        }
        out.chain = std::move(res.chain);
    }
    return out;
}

EncodeResult encode_sets(const CanonicalChain& cc, const ScaledSets& s) {
    const std::size_t n = cc.teeth;
    if (s.A.size() != n || s.B.size() != n || s.C.size() != n)
        throw std::invalid_argument("scaled sets do not match the tooth count");

    const double twoM = 2.0 * double(s.m);
    std::vector<double> aT(n), bT(n), cT(n);
    std::vector<long long> bVal(n);
    for (std::size_t i = 0; i < n; ++i) aT[i] = double(s.dynAnum[i]) / twoM;
    // riser targets ascend, so B is consumed in descending order
    for (std::size_t k = 0; k < n; ++k) {
        bT[k] = double(s.dynBnum[n - 1 - k]) / twoM;
        bVal[k] = s.B[n - 1 - k];
    }
    for (std::size_t i = 0; i < n; ++i) cT[i] = double(s.dynCnum[i]) / twoM;
    const double structX = bT[n - 1] + 1.0 / 64.0;

    EncodeResult out;
    out.chain = cc.chain;
    std::size_t h = 0;
    auto fold = [&](double span) {
        HingeFoldPlan plan = make_fold_plan(cc, h, span, out.chain);
        FoldResult res = fold_hinge(out.chain, plan);
        out.chain = std::move(res.chain);
        for (auto& qr : res.queries) out.queries.push_back(std::move(qr));
        ++h;
    };

    fold(aT[0] - out.chain.vertices[cc.hinges[0].pivot1.index].x);
    for (std::size_t i = 1; i < n; ++i) fold(aT[i] - aT[i - 1]);
    fold(bT[0] - aT[n - 1]);
    for (std::size_t k = 1; k < n; ++k) fold(bT[k] - bT[k - 1]);
    fold(1.0 / 64.0);  // structural riser rides just past the last probe riser
    fold(cT[0] - structX);
    for (std::size_t i = 1; i < n; ++i) fold(cT[i] - cT[i - 1]);
    if (h != cc.hinges.size()) throw std::logic_error("hinge fold program incomplete");

    const auto& vx = out.chain.vertices;
    auto expect = [&](std::size_t vertex, double x, const char* what) {
        if (std::abs(vx[vertex].x - x) > 1e-9)
            throw std::logic_error(std::string("encoded ") + what + " missed its target by " +
                                   std::to_string(vx[vertex].x - x));
    };
    for (std::size_t i = 0; i < n; ++i) {
        expect(cc.leftTeeth[i][0], aT[i], "left tooth");
        out.toothMap[cc.leftTeeth[i][0]] = s.A[i];
        out.toothMap[cc.leftTeeth[i][1]] = s.A[i];
        expect(cc.rightTeeth[i][0], cT[i], "right tooth");
        out.toothMap[cc.rightTeeth[i][0]] = s.C[i];
        out.toothMap[cc.rightTeeth[i][1]] = s.C[i];
        expect(cc.probeRisers[i].index, bT[i], "riser");
        out.probePlan.emplace_back(bVal[i], cc.probeRisers[i]);
    }
    expect(cc.structuralRiser.index, structX, "structural riser");

    // clearance certificates for the probe phase: teeth far from every probe
    // axis, staircase (with its fold apexes) well inside the tooth radius
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(aT[i] - bT[k]) < 3.5 - 1e-9 || std::abs(cT[i] - bT[k]) < 3.5 - 1e-9)
                throw std::logic_error("tooth sits too close to a probe axis");
        }
        double maxR = 0.0;
        for (std::size_t vi = cc.probeRisers[0].index; vi <= cc.structuralRiser.index + 1; ++vi)
            maxR = std::max(maxR, std::hypot(vx[vi].x - bT[k], vx[vi].z));
        if (maxR > 1.5 + 1e-9)
            throw std::logic_error("staircase sticks out past radius 3/2 from a probe axis");
    }
    return out;
}

ReductionTranscript run_dynamic_reduction(const ThreeSumInstance& inst, std::size_t n) {
    const ScaledSets scaled = pad_and_scale(inst, n);
    const std::size_t teeth = scaled.A.size();
    const CanonicalChain cc = build_canonical_chain(teeth);
    EncodeResult enc = encode_sets(cc, scaled);

    ReductionTranscript t;
    t.mode = "dynamic";
    t.hingeCount = cc.hinges.size();
    t.queries = std::move(enc.queries);
    t.encodingRotations = t.queries.size();
    if (t.encodingRotations != 3 * t.hingeCount)
        throw std::logic_error("encoding rotation count drifted from 3 per hinge");
    for (const auto& qr : t.queries) t.pairTestsTotal += qr.pairTests;

    // the 1/m radius margin between non-triples and contact must dominate
    // the geometric tolerance by a wide factor
    if (!(1.0 / (2.0 * double(scaled.m)) > 10.0 * enc.chain.eps()))
        throw std::logic_error("input magnitude too large for the collision margin");

    Chain cur = enc.chain;
    for (std::size_t k = 0; k < teeth; ++k) {
        const auto& [b, riser] = enc.probePlan[k];
        RotateOutcome res = dyn_rotate(cur, DihedralQuery{riser, kTwoPi});
        t.queries.push_back(QueryRecord{"probe", riser.index, kTwoPi, res.report.feasible,
                                        res.report.collision, res.report.pairTests});
        ++t.probeRotations;
        t.pairTestsTotal += res.report.pairTests;
        if (res.applied) {
            cur = std::move(res.chain);
        } else if (!t.answer) {
            const CollisionEvent& w = *res.report.collision;
            const long long a = enc.toothMap.at(w.staticSegment);
            const long long c = enc.toothMap.at(w.movingSegment);
            if (a + b + c != 0)
                throw std::logic_error("probe witness does not name a zero triple");
            t.answer = std::array<long long, 3>{a, b, c};
        }
    }
    return t;
}

}  // namespace dihedral
