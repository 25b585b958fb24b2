#include "eulerdom/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <stdexcept>

namespace eulerdom {

std::string method_name(Method m) {
    switch (m) {
        case Method::E1: return "e1";
        case Method::E2: return "e2";
        case Method::RK: return "rk";
    }
    throw std::logic_error("unreachable method tag");
}

Method method_from_name(const std::string& name) {
    if (name == "e1") return Method::E1;
    if (name == "e2") return Method::E2;
    if (name == "rk") return Method::RK;
    throw ConfigError("unknown method '" + name + "' (expected e1, e2, or rk)");
}

namespace {

// value + c1*dt + c2*dt^2/2 + c3*dt^3, truncated to [-K,K]^n. dt powers are
// exact rationals, so each term costs one outward rounding.
Box piece_eval(const Segment& s, const mpq_class& dt, const Real& K, Precision p) {
    if (sgn(dt) == 0) return s.value;
    mpq_class dt2 = dt * dt / 2;
    mpq_class dt3 = dt * dt * dt;
    Box acc = add(s.value, mul_rational(s.c1, dt, p), p);
    acc = add(acc, mul_rational(s.c2, dt2, p), p);
    Interval cubic = mul_rational(s.c3, dt3, p);
    for (auto& comp : acc) comp = add(comp, cubic, p);
    return truncate(acc, K, p);
}

Box zero_box(std::size_t n, Precision p) { return Box(n, Interval(p)); }

Real matrix_width(const IntervalMatrix& m, Precision p) {
    Real best(p);
    for (const auto& e : m.entries) {
        Real w = width(e, p);
        if (w > best) best = w;
    }
    return best;
}

}  // namespace

std::pair<SolutionEnclosure, StepTrace> solve(Method m, const ProblemSpec& spec,
                                              const FieldExtension& ext, const Partition& q,
                                              Precision p) {
    validate_problem(spec);
    if (m == Method::RK) {
        if (spec.n != 1) throw ConfigError("the Runge-Kutta operator handles scalar problems only");
        if (!spec.M2) throw ConfigError("the Runge-Kutta operator needs the bound M2");
    }
    PartitionStats stats = partition_stats(q);
    if (cmp(stats.norm, 1) > 0)
        std::cerr << "advisory: partition norm " << stats.norm.get_str()
                  << " exceeds 1; width-convergence guarantees assume finer partitions\n";

    // Truncation bound: the working-precision float covering the rational bound.
    Real K_real = Real::of_rational(resolve_state_bound(spec, p), p, MPFR_RNDU);

    SolutionEnclosure sol;
    sol.partition = q;
    sol.method = m;
    sol.K = K_real.to_rational();
    sol.dim = spec.n;
    sol.segments.reserve(q.pieces());

    StepTrace trace;
    trace.steps.reserve(q.pieces());

    // Cubic remainder scale [-alpha, alpha], alpha = (M2 M + M1^2) M / 6.
    Interval cubic(p);
    if (m == Method::RK) {
        mpq_class alpha = (*spec.M2 * spec.M + spec.M1 * spec.M1) * spec.M / 6;
        cubic = Interval::of_rationals(-alpha, alpha, p);
    }

    Box value(zero_box(spec.n, p));
    for (std::size_t i = 0; i < spec.n; ++i) value[i] = Interval::point(spec.y0[i], p);

    for (std::size_t j = 0; j < q.pieces(); ++j) {
        auto t0 = std::chrono::steady_clock::now();
        mpq_class gap = q.points[j + 1] - q.points[j];
        Real radius = Real::of_rational(spec.M * gap, p, MPFR_RNDU);
        Box A;
        try {
            A = truncate(sym_expand(value, radius, p), K_real, p);
        } catch (const EmptyIntersection& e) {
            throw EmptyIntersection(e.component, j);
        }
        Box uA = ext.u(A, p);
        IntervalMatrix upA = ext.uprime(A, p);

        Segment seg{q.points[j], value, Box{}, Box{}, Interval(p)};
        switch (m) {
            case Method::E1:
                seg.c1 = uA;
                seg.c2 = zero_box(spec.n, p);
                break;
            case Method::E2:
                seg.c1 = ext.u(value, p);
                seg.c2 = mat_vec_mul(upA, uA, p);
                break;
            case Method::RK:
                seg.c1 = ext.u(value, p);
                seg.c2 = mat_vec_mul(ext.uprime(value, p), seg.c1, p);
                seg.c3 = cubic;
                break;
        }

        try {
            value = piece_eval(seg, gap, K_real, p);
        } catch (const EmptyIntersection& e) {
            throw EmptyIntersection(e.component, j);
        }

        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        trace.steps.push_back(StepRecord{std::move(A), width_box(uA, p), matrix_width(upA, p), ms});
        sol.segments.push_back(std::move(seg));
    }
    return {std::move(sol), std::move(trace)};
}

std::pair<SolutionEnclosure, StepTrace> solve_euler1(const ProblemSpec& spec,
                                                     const FieldExtension& ext,
                                                     const Partition& q, Precision p) {
    return solve(Method::E1, spec, ext, q, p);
}

std::pair<SolutionEnclosure, StepTrace> solve_euler2(const ProblemSpec& spec,
                                                     const FieldExtension& ext,
                                                     const Partition& q, Precision p) {
    return solve(Method::E2, spec, ext, q, p);
}

std::pair<SolutionEnclosure, StepTrace> solve_euler_rk(const ProblemSpec& spec,
                                                       const FieldExtension& ext,
                                                       const Partition& q, Precision p) {
    return solve(Method::RK, spec, ext, q, p);
}

Box enclosure_eval(const SolutionEnclosure& y, const mpq_class& t, Precision p) {
    const auto& pts = y.partition.points;
    if (sgn(t) < 0 || cmp(t, pts.back()) > 0) throw std::invalid_argument("time outside [0,a]");
    if (sgn(t) == 0) return y.segments.front().value;
    auto it = std::lower_bound(pts.begin(), pts.end(), t);  // first knot >= t
    std::size_t piece = static_cast<std::size_t>(it - pts.begin()) - 1;
    const Segment& seg = y.segments[piece];
    Real K_real = Real::of_rational(y.K, p, MPFR_RNDU);
    return piece_eval(seg, t - seg.q, K_real, p);
}

std::vector<std::pair<mpq_class, Real>> width_profile(const SolutionEnclosure& y, Precision p) {
    std::vector<std::pair<mpq_class, Real>> out;
    out.reserve(y.segments.size());
    for (std::size_t j = 0; j < y.segments.size(); ++j) {
        const mpq_class& t = y.partition.points[j + 1];
        out.emplace_back(t, width_box(enclosure_eval(y, t, p), p));
    }
    return out;
}

Real enclosure_width(const SolutionEnclosure& y, Precision p) {
    Real best(p);
    for (auto& [t, w] : width_profile(y, p))
        if (w > best) best = w;
    return best;
}

StepEnclosure knots_stepfun(const SolutionEnclosure& y, Precision p) {
    std::vector<Box> values;
    values.reserve(y.partition.points.size());
    values.push_back(y.segments.front().value);
    for (std::size_t j = 1; j < y.partition.points.size(); ++j)
        values.push_back(enclosure_eval(y, y.partition.points[j], p));
    return make_stepfun(y.partition, std::move(values), y.K);
}

}  // namespace eulerdom
