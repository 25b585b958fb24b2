#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eulerdom {

// Significand precision (bits) shared by every endpoint in a computation.
// Passed explicitly to each operation; never global mutable state.
struct Precision {
    mpfr_prec_t bits;

    explicit Precision(long b) : bits(b) {
        if (b < 16) throw std::invalid_argument("Precision.bits must be >= 16");
    }
};

// Raised when a truncation to [-K,K]^n empties a component; the solver
// aborts the run and reports the offending step (step stays SIZE_MAX when
// the truncation happened outside a solve sweep).
struct EmptyIntersection : std::runtime_error {
    std::size_t component;
    std::size_t step;
    explicit EmptyIntersection(std::size_t comp, std::size_t at_step = static_cast<std::size_t>(-1))
        : std::runtime_error("truncation produced an empty component"),
          component(comp),
          step(at_step) {}
};

// Invalid problem configuration (bad dimensions, unparsable field text,
// state bound too small, method not applicable).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Single arbitrary-precision binary float. Value holder with RAII; all
// arithmetic on it is done through raw() with explicit mpfr roundings.
class Real {
  public:
    explicit Real(Precision p) : prec_(p) { mpfr_init2(v_, p.bits); mpfr_set_zero(v_, 1); }
    Real(const Real& o) : prec_(o.prec_) { mpfr_init2(v_, o.prec_.bits); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept : prec_(o.prec_) { mpfr_init2(v_, o.prec_.bits); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, o.prec_.bits); mpfr_set(v_, o.v_, MPFR_RNDN); prec_ = o.prec_; }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) { mpfr_swap(v_, o.v_); prec_ = o.prec_; }
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() noexcept { return v_; }
    mpfr_srcptr raw() const noexcept { return v_; }
    Precision precision() const { return prec_; }

    static Real of_long(long x, Precision p, mpfr_rnd_t r = MPFR_RNDN);
    static Real of_rational(const mpq_class& q, Precision p, mpfr_rnd_t r);
    static Real of_str(const std::string& s, Precision p, mpfr_rnd_t r);
    static Real pos_inf(Precision p);

    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Exact conversion; requires a finite value.
    mpq_class to_rational() const;

    // Deterministic scientific rendering ("%.20Re"); "inf" when infinite.
    std::string sci_str() const;
    double approx() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

  private:
    mpfr_t v_;
    Precision prec_;
};

// Exact dyadic value of a finite mpfr number as a rational.
mpq_class rational_from_mpfr(mpfr_srcptr x);

// Exact decimal string of a finite mpfr number (dyadics have finite
// decimal expansions); canonical: no trailing fraction zeros.
std::string decimal_from_mpfr(mpfr_srcptr x);

// Parse "p/q" or "p" (optional leading '-') into an exact rational.
// Throws ConfigError on malformed text or nonpositive denominator.
mpq_class parse_rational(const std::string& text);

}  // namespace eulerdom
