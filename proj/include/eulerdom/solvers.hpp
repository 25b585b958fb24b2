#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eulerdom/field.hpp"
#include "eulerdom/partition.hpp"

namespace eulerdom {

enum class Method { E1, E2, RK };

std::string method_name(Method m);                    // "e1" | "e2" | "rk"
Method method_from_name(const std::string& name);     // ConfigError on anything else

// One piece of the piecewise-polynomial enclosure. On (q, q_next] it
// evaluates to truncate(value + c1*dt + c2*dt^2/2 + c3*dt^3, K) with
// dt = x - q (nonnegative scalar, powers taken exactly).
// c2 holds the raw second-order coefficient (the 1/2 is applied at
// evaluation); c3 is a scalar cubic remainder applied to every component
// (zero except for the Runge-Kutta operator, which is scalar-only anyway).
struct Segment {
    mpq_class q;
    Box value;
    Box c1;
    Box c2;
    Interval c3;
};

struct SolutionEnclosure {
    Partition partition;
    std::vector<Segment> segments;  // one per piece
    Method method = Method::E2;
    mpq_class K;  // the truncation bound actually used (a precision dyadic)
    std::size_t dim = 0;
};

// Per-step measurement data: A = truncate(value + [-M d, M d]^n, K) at the
// step base, with the widths of u(A) and u'(A) (max over components/entries).
struct StepRecord {
    Box A;
    Real u_width;
    Real uprime_width;
    double wall_ms = 0.0;
};

struct StepTrace {
    std::vector<StepRecord> steps;
};

// Forward sweeps. Throw ConfigError for structural misuse (RK with n != 1 or
// no M2) and EmptyIntersection (with the step index) when truncation empties.
// Partitions with norm above 1 are accepted with a one-line stderr advisory:
// the convergence theory is stated for |Q| <= 1 but the enclosures stay sound.
std::pair<SolutionEnclosure, StepTrace> solve_euler1(const ProblemSpec& spec,
                                                     const FieldExtension& ext,
                                                     const Partition& q, Precision p);
std::pair<SolutionEnclosure, StepTrace> solve_euler2(const ProblemSpec& spec,
                                                     const FieldExtension& ext,
                                                     const Partition& q, Precision p);
std::pair<SolutionEnclosure, StepTrace> solve_euler_rk(const ProblemSpec& spec,
                                                       const FieldExtension& ext,
                                                       const Partition& q, Precision p);
std::pair<SolutionEnclosure, StepTrace> solve(Method m, const ProblemSpec& spec,
                                              const FieldExtension& ext, const Partition& q,
                                              Precision p);

// Value at time t in [0,a]; t = 0 gives the initial box, otherwise the
// polynomial of the piece whose half-open interval contains t, truncated.
Box enclosure_eval(const SolutionEnclosure& y, const mpq_class& t, Precision p);

// (right knot, width at that knot) per piece; the reported scalar width of a
// run is the maximum entry.
std::vector<std::pair<mpq_class, Real>> width_profile(const SolutionEnclosure& y, Precision p);
Real enclosure_width(const SolutionEnclosure& y, Precision p);

// Knot-value step function (index 0 = initial box) for serialization and
// the separation checks.
StepEnclosure knots_stepfun(const SolutionEnclosure& y, Precision p);

}  // namespace eulerdom
