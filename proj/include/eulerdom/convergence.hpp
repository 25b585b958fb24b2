#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eulerdom/solvers.hpp"

namespace eulerdom {

// Aggregate width diagnostics of one run. bound_e2 is infinite (with
// bound_e2_applicable = false) when L = n*M1 is zero.
struct ConvergenceReport {
    Real omega;
    Real omega_prime;
    Real rho;
    Real L;
    Real bound_e2;
    bool bound_e2_applicable = true;
    Real bound_e1;
    Real measured_width;
    std::optional<Real> empirical_order;
};

// (omega, omega') = halves of the maxima of the recorded u/u' widths.
// Throws std::invalid_argument on an empty trace.
std::pair<Real, Real> midpoint_width_stats(const StepTrace& trace, Precision p);

// rho = L*omega + n*M*omega' + n*omega*omega', L = n*M1; rounded up.
Real rho(const Real& omega, const Real& omega_prime, std::size_t n, const mpq_class& M,
         const mpq_class& M1, Precision p);

// (|Q| rho / 2L)(e^{a r_Q L} - 1), rounded up; +inf when L = 0.
Real theoretical_bound_e2(const mpq_class& norm_Q, const mpq_class& r_Q, const Real& rho,
                          const mpq_class& L, const mpq_class& a, Precision p);

// (|Q| M / 2)(e^{a L} - 1), rounded up.
Real theoretical_bound_e1(const mpq_class& norm_Q, const mpq_class& M, const mpq_class& L,
                          const mpq_class& a, Precision p);

// Mean of log2(w_d / w_{d+1}) over consecutive-depth width pairs.
// Requires >= 3 strictly positive widths at consecutive depths.
Real empirical_order(const std::vector<std::pair<int, Real>>& widths, Precision p);

// Everything above for one finished run.
ConvergenceReport analyze_run(const ProblemSpec& spec, const Partition& q,
                              const StepTrace& trace, const Real& measured_width,
                              Precision p);

}  // namespace eulerdom
