#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace dihedral {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return v / n;
}

// Points and vectors share one representation.
using Point3 = Vec3;

// Scale-aware tolerance: one knob for every geometric equality test.
// `extent` is the bounding-box diagonal of whatever inputs are involved.
inline double geom_eps(double extent) {
    return 1e-9 * std::max(1.0, extent);
}

struct Mat3 {
    // Rows.
    std::array<Vec3, 3> r{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    static Mat3 identity() { return {}; }

    Vec3 operator*(const Vec3& v) const {
        return {dot(r[0], v), dot(r[1], v), dot(r[2], v)};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 m;
        Mat3 ot = o.transposed();
        for (int i = 0; i < 3; ++i)
            m.r[i] = {dot(r[i], ot.r[0]), dot(r[i], ot.r[1]), dot(r[i], ot.r[2])};
        return m;
    }
    Mat3 transposed() const {
        Mat3 m;
        m.r[0] = {r[0].x, r[1].x, r[2].x};
        m.r[1] = {r[0].y, r[1].y, r[2].y};
        m.r[2] = {r[0].z, r[1].z, r[2].z};
        return m;
    }
};

// Max-norm deviation of R^T R from the identity.
double orthonormal_drift(const Mat3& m);

// Oriented line in space. `direction` is kept unit length.
struct AxisLine {
    Point3 origin;
    Vec3 direction{0, 0, 1};

    AxisLine() = default;
    // Throws std::invalid_argument unless |direction| = 1 within 1e-12.
    AxisLine(const Point3& o, const Vec3& d);

    // Line through two points, oriented from `from` to `to`.
    // Throws std::invalid_argument if the points coincide (within eps).
    static AxisLine through(const Point3& from, const Point3& to, double eps = 0.0);
};

// Cylindrical coordinates about an AxisLine. angle in [0, 2*pi); a point on
// the axis (radius 0) gets angle 0 canonically.
struct CylCoord {
    double radius = 0.0;
    double angle = 0.0;
    double height = 0.0;
};

// Deterministic orthonormal frame {e1, e2, direction} for an axis. The frame
// depends only on `direction`, so equal axes always agree on angles.
void axis_frame(const AxisLine& axis, Vec3& e1, Vec3& e2);

CylCoord to_cylindrical(const AxisLine& axis, const Point3& p);
Point3 from_cylindrical(const AxisLine& axis, const CylCoord& c);

// Proper rigid motion x -> R x + t with R kept orthonormal. Compositions
// count toward a renormalization budget; the rotation block is re-derived by
// Gram-Schmidt whenever the count hits 64 or measured drift exceeds 1e-12.
struct RigidMotion {
    Mat3 rotation;
    Vec3 translation;
    int compositions = 0;

    static RigidMotion identity() { return {}; }

    Point3 apply(const Point3& p) const { return rotation * p + translation; }
    RigidMotion inverse() const;
};

// compose(f, g) applies g first: compose(f, g).apply(p) == f.apply(g.apply(p)).
RigidMotion compose(const RigidMotion& f, const RigidMotion& g);

// Right-handed rotation by `angle` about the oriented axis. Angles are taken
// literally: 2*pi is a full sweep, not the identity request.
RigidMotion rotate_about_axis(const AxisLine& axis, double angle);

}  // namespace dihedral
