#include "dihedral/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dihedral {

double Chain::bbox_diagonal() const {
    if (vertices.empty()) return 0.0;
    Vec3 lo = vertices.front(), hi = vertices.front();
    for (const Point3& p : vertices) {
        lo.x = std::min(lo.x, p.x); hi.x = std::max(hi.x, p.x);
        lo.y = std::min(lo.y, p.y); hi.y = std::max(hi.y, p.y);
        lo.z = std::min(lo.z, p.z); hi.z = std::max(hi.z, p.z);
    }
    return distance(lo, hi);
}

void Chain::validate() const {
    if (vertices.size() < 2)
        throw std::invalid_argument("chain needs at least 2 vertices");
    double tol = eps();
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        if (distance(vertices[i], vertices[i + 1]) <= tol)
            throw std::invalid_argument("consecutive chain vertices coincide at index " +
                                        std::to_string(i));
    }
    for (const auto& [a, b] : allowed_overlaps) {
        if (a >= b || b >= segment_count())
            throw std::invalid_argument("allowed_overlaps pair out of range");
    }
}

SplitResult split_at_edge(const Chain& c, EdgeRef e) {
    if (e.index + 1 >= c.vertex_count())
        throw std::out_of_range("edge index out of range");
    SplitResult s;
    s.static_begin = 0;
    s.static_end = e.index + 1;
    s.moving_begin = e.index + 1;
    s.moving_end = c.vertex_count();
    return s;
}

AxisLine edge_axis(const Chain& c, EdgeRef e) {
    if (e.index + 1 >= c.vertex_count())
        throw std::out_of_range("edge index out of range");
    return AxisLine::through(c.vertices[e.index], c.vertices[e.index + 1], c.eps());
}

namespace {

double vertex_angle(const Point3& prev, const Point3& at, const Point3& next) {
    Vec3 a = prev - at, b = next - at;
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

}  // namespace

Chain apply_dihedral(const Chain& c, EdgeRef e, double angle) {
    AxisLine axis = edge_axis(c, e);
    RigidMotion m = rotate_about_axis(axis, angle);

    Chain out = c;
    for (std::size_t i = e.index + 1; i < out.vertices.size(); ++i)
        out.vertices[i] = m.apply(out.vertices[i]);

    double tol = std::max(c.eps(), out.eps());
    for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
        double before = distance(c.vertices[i], c.vertices[i + 1]);
        double after = distance(out.vertices[i], out.vertices[i + 1]);
        if (std::abs(before - after) > tol)
            throw std::logic_error("dihedral rotation failed to preserve edge length");
    }
    for (std::size_t i = 1; i + 1 < c.vertices.size(); ++i) {
        double before = vertex_angle(c.vertices[i - 1], c.vertices[i], c.vertices[i + 1]);
        double after = vertex_angle(out.vertices[i - 1], out.vertices[i], out.vertices[i + 1]);
        if (std::abs(before - after) > tol)
            throw std::logic_error("dihedral rotation failed to preserve vertex angle");
    }
    return out;
}

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b,
                              double* param) {
    Vec3 ab = b - a;
    double len2 = norm2(ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (param) *param = t;
    return distance(p, a + ab * t);
}

// Closest approach of segments [p0,p1] and [q0,q1], clamped to both ranges.
double segment_distance(const Point3& p0, const Point3& p1,
                        const Point3& q0, const Point3& q1,
                        double* sOut, double* tOut) {
    Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;

    if (a == 0.0 && e == 0.0) {
        // both degenerate
    } else if (a == 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = dot(d1, r);
        if (e == 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = dot(d1, d2);
            double denom = a * e - b * b;
            if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    if (sOut) *sOut = s;
    if (tOut) *tOut = t;
    return distance(p0 + d1 * s, q0 + d2 * t);
}

double segment_distance(const Point3& p0, const Point3& p1,
                        const Point3& q0, const Point3& q1) {
    return segment_distance(p0, p1, q0, q1, nullptr, nullptr);
}

namespace {

// Adjacent segments share a vertex; they overlap beyond it when the chain
// folds back onto itself. Probing each far endpoint against the interior of
// the other segment catches every such fold.
bool adjacent_overlap(const Point3& shared, const Point3& farA, const Point3& farB,
                      double tol) {
    double t = 0.0;
    double d = point_segment_distance(farB, shared, farA, &t);
    double lenA = distance(shared, farA);
    if (d <= tol && t * lenA > tol) return true;
    d = point_segment_distance(farA, shared, farB, &t);
    double lenB = distance(shared, farB);
    if (d <= tol && t * lenB > tol) return true;
    return false;
}

}  // namespace

SimplicityReport is_simple(const Chain& c) {
    c.validate();
    double tol = c.eps();
    std::size_t n = c.segment_count();
    SimplicityReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (c.overlap_allowed(i, j)) continue;
            bool bad;
            if (j == i + 1) {
                bad = adjacent_overlap(c.vertices[j], c.vertices[i], c.vertices[j + 1], tol);
            } else {
                bad = segment_distance(c.vertices[i], c.vertices[i + 1],
                                       c.vertices[j], c.vertices[j + 1]) <= tol;
            }
            if (bad) {
                rep.simple = false;
                rep.offending = {i, j};
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace dihedral
