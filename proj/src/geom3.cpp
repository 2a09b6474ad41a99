#include "dihedral/geom3.hpp"

#include <algorithm>
#include <cmath>

namespace dihedral {

double orthonormal_drift(const Mat3& m) {
    Mat3 g = m.transposed() * m;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3& row = g.r[i];
        double d[3] = {row.x, row.y, row.z};
        for (int j = 0; j < 3; ++j) {
            double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(d[j] - target));
        }
    }
    return worst;
}

AxisLine::AxisLine(const Point3& o, const Vec3& d) : origin(o), direction(d) {
    if (std::abs(norm(d) - 1.0) > 1e-12)
        throw std::invalid_argument("axis direction must be unit length");
}

AxisLine AxisLine::through(const Point3& from, const Point3& to, double eps) {
    Vec3 d = to - from;
    double n = norm(d);
    if (n <= eps || n == 0.0)
        throw std::invalid_argument("axis endpoints coincide");
    AxisLine a;
    a.origin = from;
    a.direction = d / n;
    return a;
}

void axis_frame(const AxisLine& axis, Vec3& e1, Vec3& e2) {
    const Vec3& d = axis.direction;
    // Seed with the coordinate axis least aligned with d (lowest index wins ties).
    double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    Vec3 seed;
    if (ax <= ay && ax <= az) seed = {1, 0, 0};
    else if (ay <= az) seed = {0, 1, 0};
    else seed = {0, 0, 1};
    e1 = normalized(seed - d * dot(seed, d));
    e2 = cross(d, e1);
}

CylCoord to_cylindrical(const AxisLine& axis, const Point3& p) {
    Vec3 e1, e2;
    axis_frame(axis, e1, e2);
    Vec3 rel = p - axis.origin;
    CylCoord c;
    c.height = dot(rel, axis.direction);
    Vec3 radial = rel - axis.direction * c.height;
    c.radius = norm(radial);
    if (c.radius == 0.0) {
        c.angle = 0.0;
    } else {
        c.angle = std::atan2(dot(radial, e2), dot(radial, e1));
        if (c.angle < 0.0) c.angle += kTwoPi;
        if (c.angle >= kTwoPi) c.angle = 0.0;
    }
    return c;
}

Point3 from_cylindrical(const AxisLine& axis, const CylCoord& c) {
    Vec3 e1, e2;
    axis_frame(axis, e1, e2);
    return axis.origin + e1 * (c.radius * std::cos(c.angle)) +
           e2 * (c.radius * std::sin(c.angle)) + axis.direction * c.height;
}

namespace {

Mat3 reorthonormalized(const Mat3& m) {
    Vec3 r0 = normalized(m.r[0]);
    Vec3 r1 = m.r[1] - r0 * dot(m.r[1], r0);
    r1 = normalized(r1);
    Vec3 r2 = cross(r0, r1);
    Mat3 out;
    out.r = {r0, r1, r2};
    return out;
}

}  // namespace

RigidMotion RigidMotion::inverse() const {
    RigidMotion inv;
    inv.rotation = rotation.transposed();
    inv.translation = -(inv.rotation * translation);
    inv.compositions = compositions;
    return inv;
}

RigidMotion compose(const RigidMotion& f, const RigidMotion& g) {
    RigidMotion h;
    h.rotation = f.rotation * g.rotation;
    h.translation = f.rotation * g.translation + f.translation;
    h.compositions = f.compositions + g.compositions + 1;
    if (h.compositions >= 64 || orthonormal_drift(h.rotation) > 1e-12) {
        h.rotation = reorthonormalized(h.rotation);
        h.compositions = 0;
    }
    return h;
}

RigidMotion rotate_about_axis(const AxisLine& axis, double angle) {
    if (std::abs(norm(axis.direction) - 1.0) > 1e-12)
        throw std::invalid_argument("axis direction must be unit length");
    const Vec3& d = axis.direction;
    double s = std::sin(angle), c = std::cos(angle), mc = 1.0 - c;
    Mat3 r;
    r.r[0] = {c + d.x * d.x * mc, d.x * d.y * mc - d.z * s, d.x * d.z * mc + d.y * s};
    r.r[1] = {d.y * d.x * mc + d.z * s, c + d.y * d.y * mc, d.y * d.z * mc - d.x * s};
    r.r[2] = {d.z * d.x * mc - d.y * s, d.z * d.y * mc + d.x * s, c + d.z * d.z * mc};
    RigidMotion m;
    m.rotation = r;
    m.translation = axis.origin - r * axis.origin;
    return m;
}

}  // namespace dihedral
