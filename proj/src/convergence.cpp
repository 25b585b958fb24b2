#include "eulerdom/convergence.hpp"

#include <stdexcept>

namespace eulerdom {

std::pair<Real, Real> midpoint_width_stats(const StepTrace& trace, Precision p) {
    if (trace.steps.empty()) throw std::invalid_argument("empty step trace");
    Real wu(p), wup(p);
    for (const auto& s : trace.steps) {
        if (s.u_width > wu) wu = s.u_width;
        if (s.uprime_width > wup) wup = s.uprime_width;
    }
    mpfr_div_2ui(wu.raw(), wu.raw(), 1, MPFR_RNDU);
    mpfr_div_2ui(wup.raw(), wup.raw(), 1, MPFR_RNDU);
    return {std::move(wu), std::move(wup)};
}

Real rho(const Real& omega, const Real& omega_prime, std::size_t n, const mpq_class& M,
         const mpq_class& M1, Precision p) {
    mpq_class L = M1 * static_cast<unsigned long>(n);
    mpq_class nM = M * static_cast<unsigned long>(n);
    Real out(p), term(p);
    mpfr_mul_q(out.raw(), omega.raw(), L.get_mpq_t(), MPFR_RNDU);
    mpfr_mul_q(term.raw(), omega_prime.raw(), nM.get_mpq_t(), MPFR_RNDU);
    mpfr_add(out.raw(), out.raw(), term.raw(), MPFR_RNDU);
    mpfr_mul(term.raw(), omega.raw(), omega_prime.raw(), MPFR_RNDU);
    mpfr_mul_ui(term.raw(), term.raw(), static_cast<unsigned long>(n), MPFR_RNDU);
    mpfr_add(out.raw(), out.raw(), term.raw(), MPFR_RNDU);
    return out;
}

Real theoretical_bound_e2(const mpq_class& norm_Q, const mpq_class& r_Q, const Real& rho,
                          const mpq_class& L, const mpq_class& a, Precision p) {
    if (sgn(L) == 0) return Real::pos_inf(p);
    Real out(p), factor(p);
    // |Q| rho / (2L), all upward (positive quantities).
    mpq_class scale = norm_Q / (2 * L);
    mpfr_mul_q(out.raw(), rho.raw(), scale.get_mpq_t(), MPFR_RNDU);
    // e^{a r_Q L} - 1 upward.
    mpq_class expo = a * r_Q * L;
    Real e(p);
    mpfr_set_q(e.raw(), expo.get_mpq_t(), MPFR_RNDU);
    mpfr_expm1(factor.raw(), e.raw(), MPFR_RNDU);
    mpfr_mul(out.raw(), out.raw(), factor.raw(), MPFR_RNDU);
    return out;
}

Real theoretical_bound_e1(const mpq_class& norm_Q, const mpq_class& M, const mpq_class& L,
                          const mpq_class& a, Precision p) {
    Real out(p), factor(p);
    mpq_class scale = norm_Q * M / 2;
    mpq_class expo = a * L;
    mpfr_set_q(out.raw(), scale.get_mpq_t(), MPFR_RNDU);
    mpfr_set_q(factor.raw(), expo.get_mpq_t(), MPFR_RNDU);
    mpfr_expm1(factor.raw(), factor.raw(), MPFR_RNDU);
    mpfr_mul(out.raw(), out.raw(), factor.raw(), MPFR_RNDU);
    return out;
}

Real empirical_order(const std::vector<std::pair<int, Real>>& widths, Precision p) {
    if (widths.size() < 3) throw std::invalid_argument("need at least three widths");
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i].second.sign() <= 0) throw std::invalid_argument("widths must be strictly positive");
        if (i > 0 && widths[i].first != widths[i - 1].first + 1)
            throw std::invalid_argument("depths must be consecutive");
    }
    Real sum(p), ratio(p);
    for (std::size_t i = 1; i < widths.size(); ++i) {
        mpfr_div(ratio.raw(), widths[i - 1].second.raw(), widths[i].second.raw(), MPFR_RNDN);
        mpfr_log2(ratio.raw(), ratio.raw(), MPFR_RNDN);
        mpfr_add(sum.raw(), sum.raw(), ratio.raw(), MPFR_RNDN);
    }
    mpfr_div_ui(sum.raw(), sum.raw(), static_cast<unsigned long>(widths.size() - 1), MPFR_RNDN);
    return sum;
}

ConvergenceReport analyze_run(const ProblemSpec& spec, const Partition& q,
                              const StepTrace& trace, const Real& measured_width,
                              Precision p) {
    auto [omega, omega_prime] = midpoint_width_stats(trace, p);
    PartitionStats stats = partition_stats(q);
    mpq_class L = spec.M1 * static_cast<unsigned long>(spec.n);
    ConvergenceReport r{Real(p), Real(p), Real(p), Real(p), Real(p), true, Real(p), Real(p), std::nullopt};
    r.omega = omega;
    r.omega_prime = omega_prime;
    r.rho = rho(omega, omega_prime, spec.n, spec.M, spec.M1, p);
    r.L = Real::of_rational(L, p, MPFR_RNDU);
    r.bound_e2 = theoretical_bound_e2(stats.norm, stats.ratio, r.rho, L, spec.a, p);
    r.bound_e2_applicable = sgn(L) != 0;
    r.bound_e1 = theoretical_bound_e1(stats.norm, spec.M, L, spec.a, p);
    r.measured_width = measured_width;
    return r;
}

}  // namespace eulerdom
