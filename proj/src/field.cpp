#include "eulerdom/field.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace eulerdom {

// --- parser -----------------------------------------------------------------

namespace {

struct Parser {
    const std::string& text;
    std::size_t n;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("field parse error at position " + std::to_string(pos) + ": " + what);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    void expect(char c) {
        if (pos >= text.size() || text[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string symbol() {
        std::size_t start = pos;
        while (pos < text.size() && std::islower(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an operator name");
        return text.substr(start, pos - start);
    }

    std::string number_token() {
        std::size_t start = pos;
        if (pos < text.size() && text[pos] == '-') ++pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
            ++pos;
        if (pos == start) fail("expected a number");
        return text.substr(start, pos - start);
    }

    FieldExprPtr expr() {
        skip_ws();
        expect('(');
        std::string op = symbol();
        skip_ws();
        auto node = std::make_shared<FieldExpr>();
        if (op == "const") {
            node->kind = ExprKind::Const;
            std::size_t at = pos;
            try {
                node->value = parse_rational(number_token());
            } catch (const ConfigError& e) {
                pos = at;
                fail(e.what());
            }
        } else if (op == "var") {
            node->kind = ExprKind::Var;
            std::size_t at = pos;
            std::string tok = number_token();
            if (tok.find('/') != std::string::npos || tok.front() == '-') {
                pos = at;
                fail("variable index must be a nonnegative integer");
            }
            node->index = std::stoul(tok);
            if (node->index >= n) {
                pos = at;
                fail("variable index " + tok + " out of range for dimension " + std::to_string(n));
            }
        } else if (op == "add" || op == "sub" || op == "mul") {
            node->kind = op == "add" ? ExprKind::Add : op == "sub" ? ExprKind::Sub : ExprKind::Mul;
            node->a = expr();
            node->b = expr();
        } else if (op == "neg" || op == "sin" || op == "cos" || op == "exp" || op == "abs") {
            node->kind = op == "neg"   ? ExprKind::Neg
                         : op == "sin" ? ExprKind::Sin
                         : op == "cos" ? ExprKind::Cos
                         : op == "exp" ? ExprKind::Exp
                                       : ExprKind::Abs;
            node->a = expr();
        } else {
            pos -= op.size();
            fail("unknown operator '" + op + "'");
        }
        skip_ws();
        expect(')');
        return node;
    }
};

}  // namespace

FieldExprPtr parse_field(const std::string& text, std::size_t n) {
    Parser ps{text, n};
    FieldExprPtr e = ps.expr();
    ps.skip_ws();
    if (ps.pos != text.size()) ps.fail("trailing input");
    return e;
}

// --- extension evaluation -----------------------------------------------------

Interval eval_extension(const FieldExpr& e, const Box& box, Precision p) {
    switch (e.kind) {
        case ExprKind::Const:
            return Interval::point(e.value, p);
        case ExprKind::Var:
            if (e.index >= box.size()) throw std::invalid_argument("variable index exceeds box dimension");
            return box[e.index];
        case ExprKind::Add:
            return add(eval_extension(*e.a, box, p), eval_extension(*e.b, box, p), p);
        case ExprKind::Sub:
            return sub(eval_extension(*e.a, box, p), eval_extension(*e.b, box, p), p);
        case ExprKind::Mul:
            return mul(eval_extension(*e.a, box, p), eval_extension(*e.b, box, p), p);
        case ExprKind::Neg:
            return neg(eval_extension(*e.a, box, p), p);
        case ExprKind::Sin:
            return sin_interval(eval_extension(*e.a, box, p), p);
        case ExprKind::Cos:
            return cos_interval(eval_extension(*e.a, box, p), p);
        case ExprKind::Exp:
            return exp_interval(eval_extension(*e.a, box, p), p);
        case ExprKind::Abs:
            return abs_interval(eval_extension(*e.a, box, p), p);
    }
    throw std::logic_error("unreachable expression kind");
}

namespace {

struct ValGrad {
    Interval value;
    Box grad;  // one entry per dimension
};

Box zero_grad(std::size_t n, Precision p) { return Box(n, Interval(p)); }

Box scale_grad(const Interval& s, const Box& g, Precision p) {
    Box out;
    out.reserve(g.size());
    for (const auto& c : g) out.push_back(mul(s, c, p));
    return out;
}

// Forward-mode sweep returning the natural extension together with the
// enclosure of the generalized gradient.
ValGrad eval_with_grad(const FieldExpr& e, const Box& box, Precision p) {
    switch (e.kind) {
        case ExprKind::Const:
            return {Interval::point(e.value, p), zero_grad(box.size(), p)};
        case ExprKind::Var: {
            if (e.index >= box.size()) throw std::invalid_argument("variable index exceeds box dimension");
            Box g = zero_grad(box.size(), p);
            g[e.index] = Interval::point(1L, p);
            return {box[e.index], std::move(g)};
        }
        case ExprKind::Add: {
            ValGrad x = eval_with_grad(*e.a, box, p), y = eval_with_grad(*e.b, box, p);
            return {add(x.value, y.value, p), add(x.grad, y.grad, p)};
        }
        case ExprKind::Sub: {
            ValGrad x = eval_with_grad(*e.a, box, p), y = eval_with_grad(*e.b, box, p);
            Box g;
            g.reserve(box.size());
            for (std::size_t i = 0; i < box.size(); ++i) g.push_back(sub(x.grad[i], y.grad[i], p));
            return {sub(x.value, y.value, p), std::move(g)};
        }
        case ExprKind::Mul: {
            ValGrad x = eval_with_grad(*e.a, box, p), y = eval_with_grad(*e.b, box, p);
            Box g;
            g.reserve(box.size());
            for (std::size_t i = 0; i < box.size(); ++i)
                g.push_back(add(mul(x.value, y.grad[i], p), mul(y.value, x.grad[i], p), p));
            return {mul(x.value, y.value, p), std::move(g)};
        }
        case ExprKind::Neg: {
            ValGrad x = eval_with_grad(*e.a, box, p);
            Box g;
            g.reserve(box.size());
            for (const auto& c : x.grad) g.push_back(neg(c, p));
            return {neg(x.value, p), std::move(g)};
        }
        case ExprKind::Sin: {
            ValGrad x = eval_with_grad(*e.a, box, p);
            return {sin_interval(x.value, p), scale_grad(cos_interval(x.value, p), x.grad, p)};
        }
        case ExprKind::Cos: {
            ValGrad x = eval_with_grad(*e.a, box, p);
            return {cos_interval(x.value, p),
                    scale_grad(neg(sin_interval(x.value, p), p), x.grad, p)};
        }
        case ExprKind::Exp: {
            ValGrad x = eval_with_grad(*e.a, box, p);
            return {exp_interval(x.value, p), scale_grad(exp_interval(x.value, p), x.grad, p)};
        }
        case ExprKind::Abs: {
            ValGrad x = eval_with_grad(*e.a, box, p);
            // Sign multiplier: [1,1] above zero, [-1,-1] below, [-1,1] astride.
            Interval m(p);
            if (mpfr_sgn(x.value.lo()) > 0) {
                m = Interval::point(1L, p);
            } else if (mpfr_sgn(x.value.hi()) < 0) {
                m = Interval::point(-1L, p);
            } else {
                mpfr_set_si(m.lo_raw(), -1, MPFR_RNDD);
                mpfr_set_si(m.hi_raw(), 1, MPFR_RNDU);
            }
            return {abs_interval(x.value, p), scale_grad(m, x.grad, p)};
        }
    }
    throw std::logic_error("unreachable expression kind");
}

// Nearest-point projection of a single entry onto [-bound, bound].
void project_entry(Interval& e, mpfr_srcptr bound, mpfr_srcptr neg_bound) {
    if (mpfr_cmp(e.lo_raw(), bound) > 0) {
        mpfr_set(e.lo_raw(), bound, MPFR_RNDD);
        mpfr_set(e.hi_raw(), bound, MPFR_RNDU);
        return;
    }
    if (mpfr_cmp(e.hi_raw(), neg_bound) < 0) {
        mpfr_set(e.lo_raw(), neg_bound, MPFR_RNDD);
        mpfr_set(e.hi_raw(), neg_bound, MPFR_RNDU);
        return;
    }
    if (mpfr_cmp(e.lo_raw(), neg_bound) < 0) mpfr_set(e.lo_raw(), neg_bound, MPFR_RNDD);
    if (mpfr_cmp(e.hi_raw(), bound) > 0) mpfr_set(e.hi_raw(), bound, MPFR_RNDU);
}

}  // namespace

Box eval_field(const ProblemSpec& spec, const Box& box, Precision p) {
    if (box.size() != spec.n) throw std::invalid_argument("box dimension mismatch");
    Box out;
    out.reserve(spec.n);
    for (const auto& comp : spec.components) out.push_back(eval_extension(*comp, box, p));
    return out;
}

IntervalMatrix eval_lderiv(const ProblemSpec& spec, const Box& box, Precision p) {
    if (box.size() != spec.n) throw std::invalid_argument("box dimension mismatch");
    IntervalMatrix J(spec.n, spec.n, p);
    Real bound = Real::of_rational(spec.M1, p, MPFR_RNDU);
    Real neg_bound(p);
    mpfr_neg(neg_bound.raw(), bound.raw(), MPFR_RNDN);  // exact
    for (std::size_t i = 0; i < spec.n; ++i) {
        ValGrad vg = eval_with_grad(*spec.components[i], box, p);
        for (std::size_t j = 0; j < spec.n; ++j) {
            J.at(i, j) = std::move(vg.grad[j]);
            project_entry(J.at(i, j), bound.raw(), neg_bound.raw());
        }
    }
    return J;
}

FieldExtension make_extension(const ProblemSpec& spec) {
    FieldExtension ext;
    ext.u = [spec](const Box& box, Precision p) { return eval_field(spec, box, p); };
    ext.uprime = [spec](const Box& box, Precision p) { return eval_lderiv(spec, box, p); };
    ext.derived_from_spec = true;
    return ext;
}

// --- problem validation -------------------------------------------------------

void validate_problem(const ProblemSpec& spec) {
    if (spec.n == 0) throw ConfigError("dimension n must be positive");
    if (spec.components.size() != spec.n) throw ConfigError("need exactly n field components");
    if (spec.y0.size() != spec.n) throw ConfigError("need exactly n initial values");
    if (sgn(spec.a) <= 0) throw ConfigError("horizon a must be positive");
    if (sgn(spec.M) < 0) throw ConfigError("field bound M must be nonnegative");
    if (sgn(spec.M1) < 0) throw ConfigError("derivative bound M1 must be nonnegative");
    if (spec.M2 && sgn(*spec.M2) < 0) throw ConfigError("second-derivative bound M2 must be nonnegative");
    if (spec.K) {
        if (sgn(*spec.K) <= 0) throw ConfigError("state bound K must be positive");
        mpq_class reach = spec.M * spec.a;
        mpq_class neg_K = -*spec.K;
        for (const auto& y : spec.y0) {
            mpq_class lo = y - reach, hi = y + reach;
            if (cmp(lo, neg_K) < 0 || cmp(hi, *spec.K) > 0)
                throw ConfigError("[y0 - M a, y0 + M a] escapes [-K,K]; raise K");
        }
    }
}

mpq_class resolve_state_bound(const ProblemSpec& spec, Precision p) {
    if (spec.K) return *spec.K;
    mpq_class need = 0;
    for (const auto& y : spec.y0) {
        mpq_class r = abs(y) + spec.M * spec.a;
        if (cmp(r, need) > 0) need = r;
    }
    if (sgn(need) == 0) return mpq_class(1);
    need *= mpq_class(11, 10);
    return Real::of_rational(need, p, MPFR_RNDU).to_rational();
}

ProblemSpec problem_from_json(const std::string& text, const std::string& id) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("problem config is not valid JSON: ") + e.what());
    }
    ProblemSpec spec;
    spec.id = id;
    try {
        spec.n = j.at("n").get<std::size_t>();
        for (const auto& f : j.at("fields"))
            spec.components.push_back(parse_field(f.get<std::string>(), spec.n));
        for (const auto& y : j.at("y0")) spec.y0.push_back(parse_rational(y.get<std::string>()));
        spec.a = parse_rational(j.at("a").get<std::string>());
        if (j.contains("K")) spec.K = parse_rational(j.at("K").get<std::string>());
        spec.M = parse_rational(j.at("M").get<std::string>());
        spec.M1 = parse_rational(j.at("M1").get<std::string>());
        if (j.contains("M2")) spec.M2 = parse_rational(j.at("M2").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("problem config shape error: ") + e.what());
    }
    validate_problem(spec);
    return spec;
}

// --- compatibility check --------------------------------------------------------

LipschitzReport check_lipschitz_condition(const FieldExtension& ext,
                                          const std::vector<Box>& boxes, Precision p) {
    LipschitzReport report;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        ++report.checked;
        Real lhs = width_box(ext.u(boxes[i], p), p);
        Real rhs(p);
        mpfr_mul(rhs.raw(), norm_inf(ext.uprime(boxes[i], p), p).raw(),
                 width_box(boxes[i], p).raw(), MPFR_RNDU);
        // 4-ulp slack on the scale of the compared quantities.
        Real tol(p);
        mpfr_set_ui(tol.raw(), 1, MPFR_RNDN);
        if (mpfr_cmp(rhs.raw(), tol.raw()) > 0) mpfr_set(tol.raw(), rhs.raw(), MPFR_RNDU);
        mpfr_mul_2si(tol.raw(), tol.raw(), 2 - static_cast<long>(p.bits), MPFR_RNDU);
        mpfr_add(rhs.raw(), rhs.raw(), tol.raw(), MPFR_RNDU);
        if (mpfr_cmp(lhs.raw(), rhs.raw()) > 0) report.violations.push_back(i);
    }
    return report;
}

}  // namespace eulerdom
