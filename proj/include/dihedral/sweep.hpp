#pragma once

#include <cstddef>
#include <optional>

#include "dihedral/chain.hpp"
#include "dihedral/geom3.hpp"

namespace dihedral {

struct DihedralQuery {
    EdgeRef edge;
    double phi = 0.0;  // radians, signed; |phi| may exceed 2*pi
};

// Earliest contact of one rotating segment with one static segment.
// angleAtContact is the angular gap swept before first touch, in [0, 2*pi).
struct CollisionEvent {
    double tFraction = 0.0;
    double angleAtContact = 0.0;
    std::size_t movingSegment = 0;
    std::size_t staticSegment = 0;
    Point3 contact{};
};

// Continuous collision test for a single segment rotating rigidly about
// `axis` by total signed angle `phi` against one static segment.
//
// Works in axis-frame cylindrical coordinates: heights are affine and
// squared radii quadratic in the segment parameters, so every potential
// contact is a root of a quadratic after substituting the height-match
// relation. Degenerate families (constant equal heights, identically
// matching radius profiles) are covered by a fixed candidate set —
// interval endpoints, radius extrema, and endpoint pairs — validated
// against the same height/radius tolerances. No iterative root-finding.
//
// Returns the event with the smallest angular gap, with movingSegment /
// staticSegment left zero (caller fills indices). eps is the geometric
// contact tolerance.
std::optional<CollisionEvent> sweep_collision(const AxisLine& axis, double phi,
                                              const Point3& m0, const Point3& m1,
                                              const Point3& s0, const Point3& s1,
                                              double eps);

struct FeasibilityReport {
    bool feasible = true;
    std::optional<CollisionEvent> collision;  // earliest; ties broken by (moving, static)
    std::size_t pairTests = 0;                // sweeps actually performed
    std::size_t exemptions = 0;               // allowed_overlaps pairs skipped
};

// Feasibility of the dihedral rotation described by `q` on chain `c`.
// Pre: c is simple modulo allowed_overlaps (not re-checked here).
//
// Only moving x static segment pairs are swept: both sides move rigidly, so
// intra-side clearances are time-invariant, and the axis edge itself keeps a
// constant distance to every moving point. pairTests therefore equals
// |movingSegments| * |staticSegments| minus the allowed_overlaps pairs that
// cross the split. jobs > 1 partitions the pair loop; the result is
// independent of the partitioning.
FeasibilityReport dihedral_feasible(const Chain& c, const DihedralQuery& q,
                                    unsigned jobs = 1);

struct RotateOutcome {
    Chain chain;
    bool applied = false;
    FeasibilityReport report;
};

// Checked rotation: applies apply_dihedral iff dihedral_feasible says so;
// returns the input chain untouched otherwise.
RotateOutcome dyn_rotate(const Chain& c, const DihedralQuery& q, unsigned jobs = 1);

}  // namespace dihedral
