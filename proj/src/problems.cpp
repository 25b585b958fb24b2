#include "eulerdom/problems.hpp"

namespace eulerdom {

namespace {

ProblemSpec make_spec(const std::string& id, std::size_t n, std::vector<std::string> fields,
                      std::vector<std::string> y0, const std::string& a,
                      const char* K, const std::string& M, const std::string& M1,
                      const char* M2) {
    ProblemSpec spec;
    spec.id = id;
    spec.n = n;
    for (const auto& f : fields) spec.components.push_back(parse_field(f, n));
    for (const auto& y : y0) spec.y0.push_back(parse_rational(y));
    spec.a = parse_rational(a);
    if (K) spec.K = parse_rational(K);
    spec.M = parse_rational(M);
    spec.M1 = parse_rational(M1);
    if (M2) spec.M2 = parse_rational(M2);
    validate_problem(spec);
    return spec;
}

}  // namespace

bool is_builtin_problem(const std::string& id) {
    return id == "A" || id == "B" || id == "C" || id == "D";
}

ProblemSpec builtin_problem(const std::string& id) {
    if (id == "A") return make_spec("A", 1, {"(var 0)"}, {"1"}, "1", "6", "3", "1", "0");
    if (id == "B") return make_spec("B", 1, {"(cos (var 0))"}, {"0"}, "5", nullptr, "1", "1", "1");
    if (id == "C")
        return make_spec("C", 2,
                         {"(const 1)",
                          "(mul (const 10) (mul (cos (mul (const 10) (var 0))) (var 1)))"},
                         {"0", "1"}, "1/10", nullptr, "30", "301", nullptr);
    if (id == "D")
        return make_spec("D", 2, {"(const 1)", "(abs (sin (add (var 0) (var 1))))"},
                         {"0", "1"}, "5", nullptr, "1", "2", nullptr);
    throw ConfigError("unknown builtin problem '" + id + "' (builtins: A, B, C, D)");
}

}  // namespace eulerdom
