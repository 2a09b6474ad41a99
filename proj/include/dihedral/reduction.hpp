#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dihedral/chain.hpp"
#include "dihedral/sweep.hpp"

namespace dihedral {

// Three sets of integers; the question is whether one element of each sums
// to zero. The single-set variant is modeled as A = B = C.
struct ThreeSumInstance {
    std::vector<long long> A, B, C;
};

// Largest input magnitude the geometric encodings are certified for: beyond
// this the collision margins stop dominating the floating-point tolerance.
inline constexpr long long kValueBound = 100000;

// Transparent brute-force solver used as ground truth. Deterministic:
// returns the lexicographically smallest zero triple, or nothing.
std::optional<std::array<long long, 3>> solve_threesum_oracle(const ThreeSumInstance& inst);

// Hash-lookup quadratic variant; must agree with the oracle (cross-check).
std::optional<std::array<long long, 3>> threesum_quadratic(const ThreeSumInstance& inst);

// Single-set <-> three-set conversions. Yes-instances coincide: the forward
// direction duplicates the set; the backward direction shifts the three sets
// by M, 2M, -3M (M = 3*maxabs + 1) so only one-per-set triples can cancel.
ThreeSumInstance three_sets_from_single(const std::vector<long long>& S);
std::vector<long long> single_from_three_sets(const ThreeSumInstance& inst);

// Deduplicated, padded, sorted input sets plus the exact numeric targets
// both geometric encodings aim at.
//
// Padding appends per-set sentinels 7*m0+1, 7*m0+2, ... until the sets have
// equal size; any sum containing a sentinel is positive, so the zero-triple
// set is preserved. m is recomputed after padding.
struct ScaledSets {
    long long m0 = 1;  // max |input value| before padding (1 if all zero)
    long long m = 1;   // max |value| after padding
    std::vector<long long> A, B, C;  // padded, deduplicated, ascending

    // flat-construction targets: teeth at a-3m and c+3m, risers at -b/2
    std::vector<long long> staticA, staticC;

    // folded-construction targets as exact rationals over denominator 2m:
    //   a' = a/m - 5  -> numerator 2a - 10m
    //   b' = -b/(2m)  -> numerator -b
    //   c' = c/m + 5  -> numerator 2c + 10m
    // a+b+c = 0  <=>  a'+c' = 2b'  <=>  (a-3m) + b + (c+3m) = 0, exactly.
    std::vector<long long> dynAnum, dynBnum, dynCnum;

    double dynA(std::size_t i) const { return double(dynAnum[i]) / double(2 * m); }
    double dynB(std::size_t i) const { return double(dynBnum[i]) / double(2 * m); }
    double dynC(std::size_t i) const { return double(dynCnum[i]) / double(2 * m); }
};

// Throws std::invalid_argument on empty sets or values beyond kValueBound.
// minSize, when nonzero, pads every set up to at least that cardinality.
ScaledSets pad_and_scale(const ThreeSumInstance& inst, std::size_t minSize = 0);

// One executed feasibility query inside a reduction run.
struct QueryRecord {
    std::string phase;  // "encode" or "probe"
    std::size_t edgeIndex = 0;
    double angle = 0.0;
    bool feasible = true;
    std::optional<CollisionEvent> witness;
    std::size_t pairTests = 0;
};

struct ReductionTranscript {
    std::string mode;  // "static" or "dynamic"
    std::vector<QueryRecord> queries;
    std::size_t hingeCount = 0;
    std::size_t encodingRotations = 0;
    std::size_t probeRotations = 0;
    std::size_t pairTestsTotal = 0;
    std::optional<std::array<long long, 3>> answer;
};

// ---- flat (preprocessing-free) construction ----

// Two rectangular-tooth combs joined by a rising staircase. Tooth half-width
// is 1/4, so two teeth can only meet a probe circle simultaneously when
// |a+b+c| <= 1/2, which over integers means a zero triple.
struct StaticConstruction {
    Chain chain;
    // (b value, its riser edge) in chain order, left to right
    std::vector<std::pair<long long, EdgeRef>> featureMap;
    // tooth outline segment index -> encoded element (left teeth: A, right: C)
    std::map<std::size_t, long long> toothMap;
    double minNonAdjacentDistance = 0.0;  // measured at build
};
StaticConstruction build_static_chain(const ScaledSets& s);

// Probes a full turn at every riser; the first infeasible probe's witness
// names the zero triple.
ReductionTranscript run_static_reduction(const ThreeSumInstance& inst);

// ---- folded (preprocess-then-query) construction ----

// A five-segment crank between two borrowed vertical pivot edges. The fold
// program (+theta, -2theta, +theta) about the three pivots shortens the
// pivot-to-pivot span from L to d = L*cos(theta) and translates everything
// after the hinge by -(L-d) along the spine, with zero net rotation.
struct Hinge {
    std::string name;
    EdgeRef pivot1{0};  // borrowed from the feature on the left (or owned, for the lead-in)
    EdgeRef midJog{0};  // owned vertical jog between the two arms
    EdgeRef pivot2{0};  // borrowed from the feature on the right
    double span = 0.0;  // canonical pivot-to-pivot distance (the crank length L)
};

struct HingeFoldPlan {
    std::size_t hinge = 0;
    double targetSpan = 0.0;  // d, in (0, L]
    double theta = 0.0;       // arccos(d/L)
    // effective rotation angles about the upward vertical, in program order
    std::array<std::pair<EdgeRef, double>, 3> program;
};

// Shape depends only on n: n needle teeth per comb, n+1 risers, and a hinge
// for every span that encoding may need to shorten.
struct CanonicalChain {
    Chain chain;
    std::size_t teeth = 0;
    double stepHeight = 0.0;  // 3 / (2(n+1))
    double bump = 0.0;        // jog size, min(0.1, stepHeight/2)
    std::vector<Hinge> hinges;           // left to right, 3n+1 of them
    std::vector<EdgeRef> probeRisers;    // risers 1..n in chain order
    EdgeRef structuralRiser{0};          // riser n+1 (never probed)
    // {upSegment, downSegment} per tooth, left to right
    std::vector<std::array<std::size_t, 2>> leftTeeth, rightTeeth;
};
CanonicalChain build_canonical_chain(std::size_t n);

// Builds the signed three-rotation program for one hinge against the chain's
// current geometry. Throws std::invalid_argument when the target span is not
// in (0, L].
HingeFoldPlan make_fold_plan(const CanonicalChain& cc, std::size_t hingeIndex,
                             double targetSpan, const Chain& current);

struct FoldResult {
    Chain chain;
    std::vector<QueryRecord> queries;  // the three checked rotations
};

// Executes the plan with dyn_rotate. An infeasible intermediate rotation is
// a construction bug and throws std::runtime_error.
FoldResult fold_hinge(const Chain& c, const HingeFoldPlan& plan);

struct EncodeResult {
    Chain chain;
    std::vector<QueryRecord> queries;
    std::map<std::size_t, long long> toothMap;  // tooth segments -> A/C element
    std::vector<std::pair<long long, EdgeRef>> probePlan;  // (b, riser), probe order
};

// Folds every hinge left to right so teeth and risers land exactly on the
// scaled targets. Throws on unreachable targets or infeasible folds.
EncodeResult encode_sets(const CanonicalChain& cc, const ScaledSets& s);

// Phase 1 builds the canonical chain from n alone, phase 2 encodes the sets
// by folding, phase 3 probes a full turn at every riser via dyn_rotate.
// n = 0 means "smallest size that fits the instance".
ReductionTranscript run_dynamic_reduction(const ThreeSumInstance& inst, std::size_t n = 0);

}  // namespace dihedral
