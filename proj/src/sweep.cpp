#include "dihedral/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dihedral {

namespace {

constexpr double kAngleTol = 1e-9;

// One segment's profile about the axis: height affine in the parameter,
// squared radius quadratic, plus enough state to recover the start angle.
struct SegProfile {
    double h0, dh;       // height(t) = h0 + dh*t
    Vec3 w0, dw;         // radial vector(t) = w0 + dw*t  (perpendicular to axis)
    double a, b, c;      // radius^2(t) = a*t^2 + b*t + c
    Vec3 e1, e2;

    double height(double t) const { return h0 + dh * t; }
    double radius2(double t) const { return std::max(0.0, (a * t + b) * t + c); }
    double radius(double t) const { return std::sqrt(radius2(t)); }
    double angle(double t) const {
        Vec3 w = w0 + dw * t;
        double x = dot(w, e1), y = dot(w, e2);
        if (x == 0.0 && y == 0.0) return 0.0;
        double ang = std::atan2(y, x);
        return ang < 0.0 ? ang + kTwoPi : ang;
    }
};

SegProfile make_profile(const AxisLine& axis, const Vec3& e1, const Vec3& e2,
                        const Point3& p0, const Point3& p1) {
    SegProfile s;
    Vec3 r0 = p0 - axis.origin, r1 = p1 - axis.origin;
    double h0 = dot(r0, axis.direction), h1 = dot(r1, axis.direction);
    s.h0 = h0;
    s.dh = h1 - h0;
    s.w0 = r0 - axis.direction * h0;
    s.dw = (r1 - axis.direction * h1) - s.w0;
    s.a = norm2(s.dw);
    s.b = 2.0 * dot(s.w0, s.dw);
    s.c = norm2(s.w0);
    s.e1 = e1;
    s.e2 = e2;
    return s;
}

// Real roots of A*x^2 + B*x + C = 0, tolerant of a slightly negative
// discriminant (tangency) and a vanishing leading coefficient.
void quad_roots(double A, double B, double C, std::vector<double>& out) {
    double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (scale == 0.0) return;  // identically zero: continuum, handled by endpoints
    if (std::abs(A) <= 1e-14 * scale) {
        if (std::abs(B) > 1e-300) out.push_back(-C / B);
        return;
    }
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
        if (disc < -1e-10 * std::max(B * B, std::abs(4.0 * A * C))) return;
        disc = 0.0;
    }
    double q = -0.5 * (B + std::copysign(std::sqrt(disc), B == 0.0 ? 1.0 : B));
    out.push_back(q / A);
    if (q != 0.0) out.push_back(C / q);
    out.push_back(-B / (2.0 * A));  // extremum: tangency guard
}

struct PairContact {
    double dtheta;
    Point3 contact;
};

std::optional<PairContact> sweep_pair(const AxisLine& axis, const Vec3& e1, const Vec3& e2,
                                      double phi, const Point3& m0, const Point3& m1,
                                      const Point3& s0, const Point3& s1, double eps) {
    SegProfile mov = make_profile(axis, e1, e2, m0, m1);
    SegProfile sta = make_profile(axis, e1, e2, s0, s1);
    double absPhi = std::abs(phi), dir = phi >= 0.0 ? 1.0 : -1.0;

    // A segment lying on the axis never moves: it collides only if it is
    // already within eps of the static segment.
    if (mov.radius(0.0) <= eps && mov.radius(1.0) <= eps) {
        double v = 0.0;
        if (segment_distance(m0, m1, s0, s1, nullptr, &v) <= eps)
            return PairContact{0.0, s0 + (s1 - s0) * v};
        return std::nullopt;
    }

    std::vector<std::pair<double, double>> cands;
    cands.reserve(24);
    cands.push_back({0.0, 0.0});
    cands.push_back({0.0, 1.0});
    cands.push_back({1.0, 0.0});
    cands.push_back({1.0, 1.0});

    std::vector<double> roots;
    auto prop_from_u = [&](double u) {
        if (std::abs(sta.dh) > eps) {
            cands.push_back({u, (mov.height(u) - sta.h0) / sta.dh});
        } else {
            roots.clear();
            quad_roots(sta.a, sta.b, sta.c - mov.radius2(u), roots);
            for (double v : roots) cands.push_back({u, v});
        }
    };
    auto prop_from_v = [&](double v) {
        if (std::abs(mov.dh) > eps) {
            cands.push_back({(sta.height(v) - mov.h0) / mov.dh, v});
        } else {
            roots.clear();
            quad_roots(mov.a, mov.b, mov.c - sta.radius2(v), roots);
            for (double u : roots) cands.push_back({u, v});
        }
    };
    prop_from_u(0.0);
    prop_from_u(1.0);
    prop_from_v(0.0);
    prop_from_v(1.0);
    if (mov.a > 1e-300) prop_from_u(-mov.b / (2.0 * mov.a));
    if (sta.a > 1e-300) prop_from_v(-sta.b / (2.0 * sta.a));

    // Height match eliminates one parameter; substitute into the radius
    // equality to get a quadratic. Parametrize by the steeper height so the
    // substitution slope has magnitude <= 1.
    if (std::abs(sta.dh) >= std::abs(mov.dh) && std::abs(sta.dh) > eps) {
        double alpha = (mov.h0 - sta.h0) / sta.dh, beta = mov.dh / sta.dh;
        double A = mov.a - sta.a * beta * beta;
        double B = mov.b - beta * (2.0 * sta.a * alpha + sta.b);
        double C = mov.c - ((sta.a * alpha + sta.b) * alpha + sta.c);
        roots.clear();
        quad_roots(A, B, C, roots);
        for (double u : roots) cands.push_back({u, alpha + beta * u});
    } else if (std::abs(mov.dh) > eps) {
        double alpha = (sta.h0 - mov.h0) / mov.dh, beta = sta.dh / mov.dh;
        double A = sta.a - mov.a * beta * beta;
        double B = sta.b - beta * (2.0 * mov.a * alpha + mov.b);
        double C = sta.c - ((mov.a * alpha + mov.b) * alpha + mov.c);
        roots.clear();
        quad_roots(A, B, C, roots);
        for (double v : roots) cands.push_back({alpha + beta * v, v});
    }

    std::optional<PairContact> best;
    for (auto [u, v] : cands) {
        if (!std::isfinite(u) || !std::isfinite(v)) continue;
        u = std::clamp(u, 0.0, 1.0);
        v = std::clamp(v, 0.0, 1.0);
        if (std::abs(mov.height(u) - sta.height(v)) > eps) continue;
        double rm = mov.radius(u), rs = sta.radius(v);
        if (std::abs(rm - rs) > eps) continue;
        double dtheta;
        if (rm <= eps && rs <= eps) {
            dtheta = 0.0;  // both on the axis: touching now
        } else {
            dtheta = dir * (sta.angle(v) - mov.angle(u));
            dtheta = std::fmod(dtheta, kTwoPi);
            if (dtheta < 0.0) dtheta += kTwoPi;
            if (dtheta >= kTwoPi - kAngleTol) dtheta = 0.0;
        }
        if (dtheta > absPhi + kAngleTol) continue;
        if (!best || dtheta < best->dtheta)
            best = PairContact{dtheta, s0 + (s1 - s0) * v};
    }
    return best;
}

}  // namespace

std::optional<CollisionEvent> sweep_collision(const AxisLine& axis, double phi,
                                              const Point3& m0, const Point3& m1,
                                              const Point3& s0, const Point3& s1,
                                              double eps) {
    Vec3 e1, e2;
    axis_frame(axis, e1, e2);
    auto hit = sweep_pair(axis, e1, e2, phi, m0, m1, s0, s1, eps);
    if (!hit) return std::nullopt;
    CollisionEvent ev;
    ev.angleAtContact = hit->dtheta;
    double absPhi = std::abs(phi);
    ev.tFraction = absPhi > 0.0 ? std::clamp(hit->dtheta / absPhi, 0.0, 1.0) : 0.0;
    ev.contact = hit->contact;
    return ev;
}

FeasibilityReport dihedral_feasible(const Chain& c, const DihedralQuery& q, unsigned jobs) {
    std::size_t nseg = c.segment_count();
    if (q.edge.index >= nseg) throw std::out_of_range("rotation edge out of range");
    AxisLine axis = edge_axis(c, q.edge);
    Vec3 e1, e2;
    axis_frame(axis, e1, e2);
    double eps = c.eps();
    double phi = q.phi;

    std::size_t mBegin = q.edge.index + 1;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    FeasibilityReport rep;
    for (std::size_t ms = mBegin; ms < nseg; ++ms)
        for (std::size_t ss = 0; ss < q.edge.index; ++ss) {
            if (c.overlap_allowed(ss, ms)) {
                ++rep.exemptions;
                continue;
            }
            pairs.push_back({ms, ss});
        }
    rep.pairTests = pairs.size();

    auto sweep_one = [&](std::size_t ms, std::size_t ss) -> std::optional<CollisionEvent> {
        auto hit = sweep_pair(axis, e1, e2, phi, c.vertices[ms], c.vertices[ms + 1],
                              c.vertices[ss], c.vertices[ss + 1], eps);
        if (!hit) return std::nullopt;
        CollisionEvent ev;
        ev.angleAtContact = hit->dtheta;
        double absPhi = std::abs(phi);
        ev.tFraction = absPhi > 0.0 ? std::clamp(hit->dtheta / absPhi, 0.0, 1.0) : 0.0;
        ev.movingSegment = ms;
        ev.staticSegment = ss;
        ev.contact = hit->contact;
        return ev;
    };

    // earlier wins; near-ties resolved by (movingSegment, staticSegment)
    auto better = [](const CollisionEvent& a, const CollisionEvent& b) {
        if (a.angleAtContact < b.angleAtContact - kAngleTol) return true;
        if (b.angleAtContact < a.angleAtContact - kAngleTol) return false;
        if (a.movingSegment != b.movingSegment) return a.movingSegment < b.movingSegment;
        return a.staticSegment < b.staticSegment;
    };

    std::optional<CollisionEvent> bestEv;
    if (jobs <= 1 || pairs.size() < 64) {
        for (auto [ms, ss] : pairs) {
            auto ev = sweep_one(ms, ss);
            if (ev && (!bestEv || better(*ev, *bestEv))) bestEv = ev;
        }
    } else {
        unsigned workers = std::min<unsigned>(jobs, std::thread::hardware_concurrency());
        workers = std::max(workers, 1u);
        std::vector<std::optional<CollisionEvent>> chunkBest(workers);
        std::vector<std::thread> threads;
        std::size_t chunk = (pairs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                std::size_t lo = w * chunk, hi = std::min(pairs.size(), lo + chunk);
                std::optional<CollisionEvent> local;
                for (std::size_t i = lo; i < hi; ++i) {
                    auto ev = sweep_one(pairs[i].first, pairs[i].second);
                    if (ev && (!local || better(*ev, *local))) local = ev;
                }
                chunkBest[w] = local;
            });
        }
        for (auto& t : threads) t.join();
        // pairs are in (moving, static) lex order, so merging chunks in order
        // reproduces the sequential tie-break
        for (auto& ev : chunkBest)
            if (ev && (!bestEv || better(*ev, *bestEv))) bestEv = ev;
    }

    if (bestEv) {
        rep.feasible = false;
        rep.collision = bestEv;
    }
    return rep;
}

RotateOutcome dyn_rotate(const Chain& c, const DihedralQuery& q, unsigned jobs) {
    RotateOutcome out{c, false, dihedral_feasible(c, q, jobs)};
    if (out.report.feasible) {
        out.chain = apply_dihedral(c, q.edge, q.phi);
        out.applied = true;
    }
    return out;
}

}  // namespace dihedral
