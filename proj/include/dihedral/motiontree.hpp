#pragma once

#include <cstddef>
#include <vector>

#include "dihedral/chain.hpp"
#include "dihedral/geom3.hpp"

namespace dihedral {

// Balanced binary tree over chain vertices with lazily composed rigid
// motions. A leaf's effective motion is the root-to-leaf composition with
// deeper motions acting first; a vertex position is that composition applied
// to the stored coordinates. A rotation rewrites only the O(log n) maximal
// subtrees covering the moving suffix: the new motion is conjugated by the
// pending ancestor composition so it takes effect after everything already
// stored, whatever order earlier rotations landed in. flush recovers all
// coordinates in one O(n) traversal.
//
// No collision checking happens here — rotations are applied unchecked.
class MotionTree {
public:
    explicit MotionTree(const Chain& c);

    std::size_t leaf_count() const { return base_.size(); }

    // Current position of one vertex: O(log n) compositions.
    Point3 position(std::size_t vertex) const;

    // Dihedral rotation about the edge's *current* axis, applied lazily to
    // the suffix of vertices after the edge. The number of node-motion
    // updates is recorded (last_rotation_touches); it is at most
    // ceil(log2 n), comfortably inside the advertised 2*ceil(log2 n) + 2
    // budget that also covers the two position() reads for the axis.
    void rotate_lazy(EdgeRef e, double phi);

    // Push every pending motion down to the leaves, reset all node motions
    // to identity, and return the materialized chain. Applies exactly one
    // motion per leaf (last_flush_applications).
    Chain flush();

    std::size_t last_rotation_touches() const { return lastTouches_; }
    std::size_t last_flush_applications() const { return lastFlushApplications_; }

private:
    void update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t from,
                const RigidMotion& motion, const RigidMotion& above);
    void push_down(std::size_t node, std::size_t lo, std::size_t hi,
                   const RigidMotion& above);

    std::vector<Point3> base_;
    std::set<std::pair<std::size_t, std::size_t>> allowedOverlaps_;
    std::optional<double> toleranceOverride_;
    std::vector<RigidMotion> motions_;  // heap layout, node 1 = root
    double eps_ = 0.0;
    std::size_t lastTouches_ = 0;
    std::size_t lastFlushApplications_ = 0;
};

}  // namespace dihedral
