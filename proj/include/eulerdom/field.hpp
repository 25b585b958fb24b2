#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eulerdom/interval.hpp"

namespace eulerdom {

// Expression AST for vector-field components. abs is the only nonsmooth
// primitive; its derivative rule uses the set-valued multiplier below.
enum class ExprKind { Const, Var, Add, Sub, Mul, Neg, Sin, Cos, Exp, Abs };

struct FieldExpr;
using FieldExprPtr = std::shared_ptr<const FieldExpr>;

struct FieldExpr {
    ExprKind kind;
    mpq_class value;        // Const only
    std::size_t index = 0;  // Var only
    FieldExprPtr a, b;      // children (b for binary nodes)
};

// Parses the s-expression grammar
//   expr := "(const " rational ")" | "(var " index ")" | "(add " e e ")"
//         | "(sub " e e ")" | "(mul " e e ")" | "(neg " e ")" | "(sin " e ")"
//         | "(cos " e ")" | "(exp " e ")" | "(abs " e ")"
// Throws ConfigError with a character position on malformed input or a
// variable index >= n.
FieldExprPtr parse_field(const std::string& text, std::size_t n);

// Autonomous IVP y' = f(y), y(0) = y0 on [0,a], with the scalar bounds the
// enclosure operators consume. K may be omitted; see resolve_state_bound.
struct ProblemSpec {
    std::string id;
    std::size_t n = 0;
    std::vector<FieldExprPtr> components;
    std::vector<mpq_class> y0;
    mpq_class a;
    std::optional<mpq_class> K;
    mpq_class M;
    mpq_class M1;
    std::optional<mpq_class> M2;
};

// Structural validation: dimensions agree, a > 0, M >= 0, M1 >= 0,
// M2 >= 0 when present, K > 0 and [y0 - M a, y0 + M a]^n inside [-K,K]^n
// when K is given (exact rational checks). Throws ConfigError.
void validate_problem(const ProblemSpec& spec);

// The state bound actually used by truncation: spec.K when present, else the
// smallest precision-p dyadic >= 1.1 * max_i(|y0_i| + M a) (and 1 when that
// quantity is zero, e.g. a zero field at the origin).
mpq_class resolve_state_bound(const ProblemSpec& spec, Precision p);

// Reads {n, fields[], y0[], a, K?, M, M1, M2?} with rationals as strings.
// Throws ConfigError on malformed JSON or failed validation.
ProblemSpec problem_from_json(const std::string& text, const std::string& id);

// Natural interval extension of one expression; quadrant-exact sin/cos.
Interval eval_extension(const FieldExpr& e, const Box& box, Precision p);

// Componentwise natural extension u(box) of the whole field (not clipped:
// the pinned single-step semantics require the raw field range over the
// a-priori box even when it pokes past [-M,M]).
Box eval_field(const ProblemSpec& spec, const Box& box, Precision p);

// Interval enclosure of the generalized Jacobian over box: entry (i,j)
// encloses d f_i / d x_j, with the sign-multiplier rule at abs kinks.
// Entries are projected onto [-M1,M1] (nearest-point, never empty), keeping
// the derivative data inside the band the width bounds assume.
IntervalMatrix eval_lderiv(const ProblemSpec& spec, const Box& box, Precision p);

// Evaluator pair (u, u'); derived_from_spec marks pairs generated from a
// ProblemSpec (consistent by construction). Externally supplied pairs are
// accepted unchecked and should carry derived_from_spec = false.
struct FieldExtension {
    std::function<Box(const Box&, Precision)> u;
    std::function<IntervalMatrix(const Box&, Precision)> uprime;
    bool derived_from_spec = true;
};

FieldExtension make_extension(const ProblemSpec& spec);

// Checks w(u(box)) <= ||u'(box)||_inf * w(box) + 4 ulp on each sample box.
struct LipschitzReport {
    std::size_t checked = 0;
    std::vector<std::size_t> violations;  // indices into the sample list
};

LipschitzReport check_lipschitz_condition(const FieldExtension& ext,
                                          const std::vector<Box>& boxes, Precision p);

}  // namespace eulerdom
