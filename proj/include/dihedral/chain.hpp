#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dihedral/geom3.hpp"

namespace dihedral {

// Index of the edge joining vertex i and vertex i+1.
struct EdgeRef {
    std::size_t index = 0;
    EdgeRef() = default;
    explicit EdgeRef(std::size_t i) : index(i) {}
    bool operator==(const EdgeRef& o) const { return index == o.index; }
};

using SegmentPair = std::pair<std::size_t, std::size_t>;

// Open polygonal chain. Segment k runs from vertices[k] to vertices[k+1].
// `allowed_overlaps` lists unordered segment pairs that are permitted to
// touch or coincide; degenerate constructions (needle teeth) rely on it.
struct Chain {
    std::vector<Point3> vertices;
    std::set<SegmentPair> allowed_overlaps;
    // Absolute tolerance override; when unset eps() derives from the extent.
    std::optional<double> tolerance;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t segment_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    Point3 segment_start(std::size_t k) const { return vertices[k]; }
    Point3 segment_end(std::size_t k) const { return vertices[k + 1]; }

    double bbox_diagonal() const;
    // Scale-aware tolerance used by every geometric test on this chain.
    double eps() const { return tolerance ? *tolerance : geom_eps(bbox_diagonal()); }

    bool overlap_allowed(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return allowed_overlaps.count({i, j}) > 0;
    }

    // Throws std::invalid_argument on fewer than 2 vertices, coincident
    // consecutive vertices, or out-of-range overlap indices.
    void validate() const;
};

// Rotating at edge e leaves vertices [0, e] fixed and moves [e+1, n).
struct SplitResult {
    std::size_t static_begin = 0, static_end = 0;  // vertex range [begin, end)
    std::size_t moving_begin = 0, moving_end = 0;
};

SplitResult split_at_edge(const Chain& c, EdgeRef e);

// Axis through the endpoints of edge e, oriented along the chain.
AxisLine edge_axis(const Chain& c, EdgeRef e);

// Rigidly rotates the moving side by `angle` about edge e. Checks that every
// edge length and vertex angle is preserved to the chain tolerance and throws
// std::logic_error otherwise; no feasibility test is performed here.
Chain apply_dihedral(const Chain& c, EdgeRef e, double angle);

// Closest distance between two segments (exact clamped formula). sOut/tOut,
// when non-null, receive the parameters of the closest points.
double segment_distance(const Point3& p0, const Point3& p1,
                        const Point3& q0, const Point3& q1,
                        double* sOut, double* tOut);
double segment_distance(const Point3& p0, const Point3& p1,
                        const Point3& q0, const Point3& q1);
double point_segment_distance(const Point3& p, const Point3& a, const Point3& b,
                              double* param = nullptr);

struct SimplicityReport {
    bool simple = true;
    // Lexicographically smallest offending segment pair when not simple.
    SegmentPair offending{0, 0};
};

// A chain is simple when non-adjacent segments stay eps apart and adjacent
// segments meet only at their shared vertex. Pairs in allowed_overlaps are
// exempt. Pairs are scanned in lexicographic order so the report is stable.
SimplicityReport is_simple(const Chain& c);

}  // namespace dihedral
