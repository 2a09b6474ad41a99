#include "dihedral/motiontree.hpp"

#include <stdexcept>

namespace dihedral {

MotionTree::MotionTree(const Chain& c)
    : base_(c.vertices),
      allowedOverlaps_(c.allowed_overlaps),
      toleranceOverride_(c.tolerance),
      eps_(c.eps()) {
    c.validate();
    motions_.assign(4 * base_.size(), RigidMotion::identity());
}

Point3 MotionTree::position(std::size_t vertex) const {
    if (vertex >= base_.size()) throw std::out_of_range("vertex index out of range");
    std::size_t node = 1, lo = 0, hi = base_.size();
    RigidMotion eff = motions_[node];
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (vertex < mid) {
            node = 2 * node;
            hi = mid;
        } else {
            node = 2 * node + 1;
            lo = mid;
        }
        eff = compose(eff, motions_[node]);  // deeper pending motions act first
    }
    return eff.apply(base_[vertex]);
}

void MotionTree::update(std::size_t node, std::size_t lo, std::size_t hi,
                        std::size_t from, const RigidMotion& motion,
                        const RigidMotion& above) {
    if (from >= hi) return;
    if (from <= lo) {
        // Every leaf below currently sees above ∘ M_node ∘ (subtree). The new
        // motion must act after all of that, so land it conjugated by the
        // ancestor composition: effective becomes motion ∘ (old effective).
        const RigidMotion conj = compose(above.inverse(), compose(motion, above));
        motions_[node] = compose(conj, motions_[node]);
        ++lastTouches_;
        return;
    }
    const RigidMotion deeper = compose(above, motions_[node]);
    std::size_t mid = lo + (hi - lo) / 2;
    update(2 * node, lo, mid, from, motion, deeper);
    update(2 * node + 1, mid, hi, from, motion, deeper);
}

void MotionTree::rotate_lazy(EdgeRef e, double phi) {
    if (e.index + 1 >= base_.size()) throw std::out_of_range("edge index out of range");
    Point3 u = position(e.index), v = position(e.index + 1);
    AxisLine axis = AxisLine::through(u, v, eps_);
    RigidMotion rot = rotate_about_axis(axis, phi);
    lastTouches_ = 0;
    update(1, 0, base_.size(), e.index + 1, rot, RigidMotion::identity());
}

void MotionTree::push_down(std::size_t node, std::size_t lo, std::size_t hi,
                           const RigidMotion& above) {
    RigidMotion eff = compose(above, motions_[node]);
    motions_[node] = RigidMotion::identity();
    if (hi - lo == 1) {
        base_[lo] = eff.apply(base_[lo]);
        ++lastFlushApplications_;
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    push_down(2 * node, lo, mid, eff);
    push_down(2 * node + 1, mid, hi, eff);
}

Chain MotionTree::flush() {
    lastFlushApplications_ = 0;
    push_down(1, 0, base_.size(), RigidMotion::identity());
    Chain c;
    c.vertices = base_;
    c.allowed_overlaps = allowedOverlaps_;
    c.tolerance = toleranceOverride_;
    return c;
}

}  // namespace dihedral
