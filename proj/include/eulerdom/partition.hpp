#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eulerdom/interval.hpp"

namespace eulerdom {

// Temporal partition 0 = q_0 < q_1 < ... < q_k = a of [0,a]; knots are exact
// rationals so refinement/join/left-continuity tests are decidable equalities.
struct Partition {
    std::vector<mpq_class> points;

    const mpq_class& horizon() const { return points.back(); }
    std::size_t pieces() const { return points.size() - 1; }
    std::vector<mpq_class> gaps() const;

    // 2^depth equal pieces of [0,a]; requires a > 0 and 0 <= depth <= 26.
    static Partition equidistant(const mpq_class& a, int depth);
    // Validates q_0 = 0, strict increase, k >= 1.
    static Partition from_points(std::vector<mpq_class> pts);
};

// norm |Q| = max gap, m(Q) = min gap, r_Q = |Q|/m(Q); all exact.
struct PartitionStats {
    mpq_class norm;
    mpq_class min_gap;
    mpq_class ratio;
};

PartitionStats partition_stats(const Partition& q);

// Least upper bound in the refinement order: union of the knot sets.
// Requires equal horizons.
Partition partition_join(const Partition& p, const Partition& q);

// true iff points(p) is a subset of points(q), i.e. q refines p.
// Requires equal horizons.
bool refines(const Partition& p, const Partition& q);

// Piecewise-constant interval enclosure on [0,a]: values[0] is the value at
// t = 0, values[i] the value on (points[i-1], points[i]] (left-continuous at
// knots). Every value box must lie inside [-K,K]^n.
struct StepEnclosure {
    Partition partition;
    std::vector<Box> values;
    mpq_class K;

    std::size_t dim() const { return values.front().size(); }
};

// Validating constructor; throws std::invalid_argument on shape or bound
// violations (values.size() must equal points.size(), boxes within [-K,K]^n).
StepEnclosure make_stepfun(Partition q, std::vector<Box> values, mpq_class K);

// Value at t (exact knot comparisons); 0 <= t <= a required.
Box stepfun_eval(const StepEnclosure& s, const mpq_class& t);

struct SeparationResult {
    bool separated = false;
    std::optional<mpq_class> delta;  // positive witness when separated
};

// Decides the separation order f < g over the joined partition (plus the
// t = 0 pair): in every segment and component the lower bounds must satisfy
// (lo_f = -K) or (lo_f <= lo_g - delta) and the upper bounds
// (hi_f = K) or (hi_f >= hi_g + delta) for one positive rational delta.
// The reported delta is the largest precision-p dyadic not exceeding the
// exact minimal margin (so the expansion certificate
// truncate(sym_expand(g(t), delta), K) inside f(t) holds with no slack);
// when every pair is exempt, delta = K.
SeparationResult separation_check(const StepEnclosure& f, const StepEnclosure& g, Precision p);

// Truth value of separation_check under its order-theoretic name.
bool basis_waybelow(const StepEnclosure& f, const StepEnclosure& g, Precision p);

// {"partition": ["0","1/2",...], "values": [[["lo","hi"],...],...]} with
// endpoints as exact decimal strings.
std::string stepfun_json(const StepEnclosure& s);

}  // namespace eulerdom
