#pragma once

#include "eulerdom/field.hpp"

namespace eulerdom {

// Builtin benchmark problems:
//   A: y' = y,            y(0) = 1,      t in [0,1],   K = 6, M = 3, M1 = 1, M2 = 0
//   B: y' = cos(y),       y(0) = 0,      t in [0,5],   M = M1 = M2 = 1
//   C: (t,y)' = (1, 10 cos(10 t) y), y(0) = (0,1), t in [0,1/10], M = 30, M1 = 301
//   D: (t,y)' = (1, |sin(t + y)|),   y(0) = (0,1), t in [0,5],    M = 1,  M1 = 2
// B, C, D leave K to the default rule. Throws ConfigError on unknown ids.
ProblemSpec builtin_problem(const std::string& id);

bool is_builtin_problem(const std::string& id);

}  // namespace eulerdom
