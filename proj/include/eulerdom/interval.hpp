#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "eulerdom/numeric.hpp"

namespace eulerdom {

// Compact nonempty interval [lo, hi] with outward-rounded endpoints:
// lo is always computed rounding toward -inf, hi toward +inf.
class Interval {
  public:
    explicit Interval(Precision p) : prec_(p) {
        mpfr_init2(lo_, p.bits);
        mpfr_init2(hi_, p.bits);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const Interval& o) : prec_(o.prec_) {
        mpfr_init2(lo_, o.prec_.bits);
        mpfr_init2(hi_, o.prec_.bits);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval(Interval&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(lo_, o.prec_.bits);
        mpfr_init2(hi_, o.prec_.bits);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    Interval& operator=(const Interval& o) {
        if (this != &o) {
            mpfr_set_prec(lo_, o.prec_.bits);
            mpfr_set_prec(hi_, o.prec_.bits);
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
            prec_ = o.prec_;
        }
        return *this;
    }
    Interval& operator=(Interval&& o) noexcept {
        if (this != &o) {
            mpfr_swap(lo_, o.lo_);
            mpfr_swap(hi_, o.hi_);
            prec_ = o.prec_;
        }
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_srcptr lo() const noexcept { return lo_; }
    mpfr_srcptr hi() const noexcept { return hi_; }
    // Mutable endpoint access for construction code; callers must keep lo <= hi.
    mpfr_ptr lo_raw() noexcept { return lo_; }
    mpfr_ptr hi_raw() noexcept { return hi_; }
    Precision precision() const { return prec_; }

    bool is_degenerate() const { return mpfr_cmp(lo_, hi_) == 0; }

    // Outward rounding of a rational point value.
    static Interval point(const mpq_class& v, Precision p);
    static Interval point(long v, Precision p);
    // Outward rounding of rational endpoints; requires lo <= hi.
    static Interval of_rationals(const mpq_class& lo, const mpq_class& hi, Precision p);
    // Exact copies of float endpoints; requires lo <= hi.
    static Interval of_reals(const Real& lo, const Real& hi);

  private:
    mpfr_t lo_, hi_;
    Precision prec_;
};

// Interval vector in n dimensions (n >= 1 enforced by the operations).
using Box = std::vector<Interval>;

// Rectangular m x n grid of intervals, row-major.
struct IntervalMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Interval> entries;

    IntervalMatrix(std::size_t m, std::size_t n, Precision p)
        : rows(m), cols(n), entries(m * n, Interval(p)) {}
    Interval& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Interval& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

// --- outward-rounded arithmetic -------------------------------------------

Interval add(const Interval& a, const Interval& b, Precision p);
Interval sub(const Interval& a, const Interval& b, Precision p);
Interval neg(const Interval& a, Precision p);
Interval mul(const Interval& a, const Interval& b, Precision p);
// a * q for an exact rational scalar q (sign handled, single rounding).
Interval mul_rational(const Interval& a, const mpq_class& q, Precision p);

Box add(const Box& a, const Box& b, Precision p);
Box mul_rational(const Box& a, const mpq_class& q, Precision p);

// --- paper operations -------------------------------------------------------

// w(a) = hi - lo, rounded up.
Real width(const Interval& a, Precision p);
// w(v) = max componentwise width, rounded up.
Real width_box(const Box& v, Precision p);

// Minkowski sum with [-r,r]^n; r >= 0 (else std::invalid_argument).
Box sym_expand(const Box& v, const Real& r, Precision p);

// Componentwise intersection with [-K,K]; throws EmptyIntersection with the
// first offending component index. K is taken by its float representation.
Interval truncate(const Interval& a, const Real& K, Precision p);
Box truncate(const Box& v, const Real& K, Precision p);

// Row i = sum_j A_ij * v_j, outward rounded.
Box mat_vec_mul(const IntervalMatrix& A, const Box& v, Precision p);

// ||a|| = max(|lo|, |hi|), rounded up.
Real norm_int(const Interval& a, Precision p);
// Max row sum / max column sum of entrywise ||.||, rounded up.
Real norm_inf(const IntervalMatrix& A, Precision p);
Real norm_1(const IntervalMatrix& A, Precision p);

// Componentwise max of max(|lo_a - lo_b|, |hi_a - hi_b|), rounded up.
Real distance(const Box& a, const Box& b, Precision p);

// v = m(v) + W with W symmetric about zero; the reconstruction m(v) + W
// contains v (the symmetric radius is taken outward).
std::pair<std::vector<Real>, Box> midpoint_width_split(const Box& v, Precision p);

// --- elementary enclosures ---------------------------------------------------

// Monotone maps: directed-rounded endpoint images.
Interval exp_interval(const Interval& a, Precision p);
Interval atan_interval(const Interval& a, Precision p);
Interval tanh_interval(const Interval& a, Precision p);
// Exact endpoint analysis.
Interval abs_interval(const Interval& a, Precision p);
// Quadrant-exact ranges: directed endpoint images widened to +-1 whenever an
// extremum abscissa may lie inside the argument (decided on enclosures of
// pi, so false positives only ever widen).
Interval sin_interval(const Interval& a, Precision p);
Interval cos_interval(const Interval& a, Precision p);

// Containment helpers (exact endpoint comparisons).
bool contains(const Interval& outer, const Interval& inner);
bool contains(const Box& outer, const Box& inner);
bool contains_rational(const Interval& a, const mpq_class& x);

}  // namespace eulerdom
