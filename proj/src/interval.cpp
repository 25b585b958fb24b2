#include "eulerdom/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace eulerdom {

// --- Real ---------------------------------------------------------------

Real Real::of_long(long x, Precision p, mpfr_rnd_t r) {
    Real out(p);
    mpfr_set_si(out.raw(), x, r);
    return out;
}

Real Real::of_rational(const mpq_class& q, Precision p, mpfr_rnd_t r) {
    Real out(p);
    mpfr_set_q(out.raw(), q.get_mpq_t(), r);
    return out;
}

Real Real::of_str(const std::string& s, Precision p, mpfr_rnd_t r) {
    Real out(p);
    if (mpfr_set_str(out.raw(), s.c_str(), 10, r) != 0)
        throw std::invalid_argument("unparsable numeric literal: " + s);
    return out;
}

Real Real::pos_inf(Precision p) {
    Real out(p);
    mpfr_set_inf(out.raw(), 1);
    return out;
}

mpq_class Real::to_rational() const { return rational_from_mpfr(v_); }

std::string Real::sci_str() const {
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.20Re", v_);
    return buf;
}

mpq_class rational_from_mpfr(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw std::invalid_argument("non-finite value has no rational form");
    if (mpfr_zero_p(x)) return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    mpq_class q(m);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    q.canonicalize();
    return q;
}

std::string decimal_from_mpfr(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw std::invalid_argument("non-finite value has no decimal form");
    if (mpfr_zero_p(x)) return "0";
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    bool negative = m < 0;
    if (negative) m = -m;
    // Canonical dyadic: odd mantissa.
    while (mpz_even_p(m.get_mpz_t()) && m != 0) {
        m >>= 1;
        ++e;
    }
    std::string out;
    if (e >= 0) {
        mpz_class v = m << static_cast<mp_bitcnt_t>(e);
        out = v.get_str();
    } else {
        mp_bitcnt_t f = static_cast<mp_bitcnt_t>(-e);
        mpz_class five;
        mpz_ui_pow_ui(five.get_mpz_t(), 5, f);
        mpz_class digits = m * five;  // x = digits / 10^f
        std::string d = digits.get_str();
        if (d.size() <= f)
            out = "0." + std::string(f - d.size(), '0') + d;
        else
            out = d.substr(0, d.size() - f) + "." + d.substr(d.size() - f);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return negative ? "-" + out : out;
}

mpq_class parse_rational(const std::string& text) {
    std::size_t i = 0;
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
        return j;
    };
    if (i < text.size() && text[i] == '-') ++i;
    std::size_t num_end = digits(i);
    if (num_end == i) throw ConfigError("malformed rational: '" + text + "'");
    std::size_t pos = num_end;
    if (pos < text.size()) {
        if (text[pos] != '/' ) throw ConfigError("malformed rational: '" + text + "'");
        std::size_t den_end = digits(pos + 1);
        if (den_end == pos + 1 || den_end != text.size())
            throw ConfigError("malformed rational: '" + text + "'");
        std::string den = text.substr(pos + 1);
        if (den.find_first_not_of('0') == std::string::npos)
            throw ConfigError("zero denominator in rational: '" + text + "'");
    }
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
        throw ConfigError("malformed rational: '" + text + "'");
    q.canonicalize();
    return q;
}

// --- Interval construction ------------------------------------------------

Interval Interval::point(const mpq_class& v, Precision p) {
    Interval out(p);
    mpfr_set_q(out.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(out.hi_, v.get_mpq_t(), MPFR_RNDU);
    return out;
}

Interval Interval::point(long v, Precision p) {
    Interval out(p);
    mpfr_set_si(out.lo_, v, MPFR_RNDD);
    mpfr_set_si(out.hi_, v, MPFR_RNDU);
    return out;
}

Interval Interval::of_rationals(const mpq_class& lo, const mpq_class& hi, Precision p) {
    if (cmp(lo, hi) > 0) throw std::invalid_argument("interval endpoints out of order");
    Interval out(p);
    mpfr_set_q(out.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(out.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return out;
}

Interval Interval::of_reals(const Real& lo, const Real& hi) {
    if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
    Interval out(lo.precision());
    mpfr_set(out.lo_, lo.raw(), MPFR_RNDD);
    mpfr_set(out.hi_, hi.raw(), MPFR_RNDU);
    return out;
}

// --- arithmetic -------------------------------------------------------------

Interval add(const Interval& a, const Interval& b, Precision p) {
    Interval out(p);
    mpfr_add(out.lo_raw(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(out.hi_raw(), a.hi(), b.hi(), MPFR_RNDU);
    return out;
}

Interval sub(const Interval& a, const Interval& b, Precision p) {
    Interval out(p);
    mpfr_sub(out.lo_raw(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(out.hi_raw(), a.hi(), b.lo(), MPFR_RNDU);
    return out;
}

Interval neg(const Interval& a, Precision p) {
    Interval out(p);
    mpfr_neg(out.lo_raw(), a.hi(), MPFR_RNDD);
    mpfr_neg(out.hi_raw(), a.lo(), MPFR_RNDU);
    return out;
}

Interval mul(const Interval& a, const Interval& b, Precision p) {
    Interval out(p);
    mpfr_t t;
    mpfr_init2(t, p.bits);
    mpfr_srcptr as[2] = {a.lo(), a.hi()};
    mpfr_srcptr bs[2] = {b.lo(), b.hi()};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t, out.lo_raw()) < 0) mpfr_set(out.lo_raw(), t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t, out.hi_raw()) > 0) mpfr_set(out.hi_raw(), t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return out;
}

Interval mul_rational(const Interval& a, const mpq_class& q, Precision p) {
    Interval out(p);
    if (sgn(q) >= 0) {
        mpfr_mul_q(out.lo_raw(), a.lo(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(out.hi_raw(), a.hi(), q.get_mpq_t(), MPFR_RNDU);
    } else {
        mpfr_mul_q(out.lo_raw(), a.hi(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(out.hi_raw(), a.lo(), q.get_mpq_t(), MPFR_RNDU);
    }
    return out;
}

Box add(const Box& a, const Box& b, Precision p) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("box dimension mismatch");
    Box out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(add(a[i], b[i], p));
    return out;
}

Box mul_rational(const Box& a, const mpq_class& q, Precision p) {
    Box out;
    out.reserve(a.size());
    for (const auto& c : a) out.push_back(mul_rational(c, q, p));
    return out;
}

// --- paper operations --------------------------------------------------------

Real width(const Interval& a, Precision p) {
    Real out(p);
    mpfr_sub(out.raw(), a.hi(), a.lo(), MPFR_RNDU);
    return out;
}

Real width_box(const Box& v, Precision p) {
    if (v.empty()) throw std::invalid_argument("empty box");
    Real best = width(v[0], p);
    for (std::size_t i = 1; i < v.size(); ++i) {
        Real w = width(v[i], p);
        if (w > best) best = w;
    }
    return best;
}

Box sym_expand(const Box& v, const Real& r, Precision p) {
    if (r.sign() < 0) throw std::invalid_argument("negative expansion radius");
    Box out;
    out.reserve(v.size());
    for (const auto& c : v) {
        Interval e(p);
        mpfr_sub(e.lo_raw(), c.lo(), r.raw(), MPFR_RNDD);
        mpfr_add(e.hi_raw(), c.hi(), r.raw(), MPFR_RNDU);
        out.push_back(std::move(e));
    }
    return out;
}

namespace {
Interval truncate_component(const Interval& a, const Real& K, Precision p, std::size_t comp) {
    Interval out(p);
    mpfr_t negK;
    mpfr_init2(negK, K.precision().bits);
    mpfr_neg(negK, K.raw(), MPFR_RNDN);  // exact
    bool empty = mpfr_cmp(a.lo(), K.raw()) > 0 || mpfr_cmp(a.hi(), negK) < 0;
    if (empty) {
        mpfr_clear(negK);
        throw EmptyIntersection(comp);
    }
    mpfr_set(out.lo_raw(), mpfr_cmp(a.lo(), negK) < 0 ? negK : a.lo(), MPFR_RNDD);
    mpfr_set(out.hi_raw(), mpfr_cmp(a.hi(), K.raw()) > 0 ? K.raw() : a.hi(), MPFR_RNDU);
    mpfr_clear(negK);
    return out;
}
}  // namespace

Interval truncate(const Interval& a, const Real& K, Precision p) {
    if (K.sign() <= 0) throw std::invalid_argument("state bound K must be positive");
    return truncate_component(a, K, p, 0);
}

Box truncate(const Box& v, const Real& K, Precision p) {
    if (K.sign() <= 0) throw std::invalid_argument("state bound K must be positive");
    Box out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(truncate_component(v[i], K, p, i));
    return out;
}

Box mat_vec_mul(const IntervalMatrix& A, const Box& v, Precision p) {
    if (A.cols != v.size() || A.rows == 0 || v.empty())
        throw std::invalid_argument("matrix/vector dimension mismatch");
    Box out;
    out.reserve(A.rows);
    for (std::size_t i = 0; i < A.rows; ++i) {
        Interval acc(p);
        for (std::size_t j = 0; j < A.cols; ++j) acc = add(acc, mul(A.at(i, j), v[j], p), p);
        out.push_back(std::move(acc));
    }
    return out;
}

Real norm_int(const Interval& a, Precision p) {
    Real out(p);
    mpfr_t t;
    mpfr_init2(t, p.bits);
    mpfr_abs(out.raw(), a.lo(), MPFR_RNDU);
    mpfr_abs(t, a.hi(), MPFR_RNDU);
    if (mpfr_cmp(t, out.raw()) > 0) mpfr_set(out.raw(), t, MPFR_RNDU);
    mpfr_clear(t);
    return out;
}

namespace {
Real max_line_sum(const IntervalMatrix& A, Precision p, bool rows) {
    std::size_t outer = rows ? A.rows : A.cols;
    std::size_t inner = rows ? A.cols : A.rows;
    Real best(p);
    for (std::size_t i = 0; i < outer; ++i) {
        Real sum(p);
        for (std::size_t j = 0; j < inner; ++j) {
            const Interval& e = rows ? A.at(i, j) : A.at(j, i);
            Real n = norm_int(e, p);
            mpfr_add(sum.raw(), sum.raw(), n.raw(), MPFR_RNDU);
        }
        if (i == 0 || sum > best) best = sum;
    }
    return best;
}
}  // namespace

Real norm_inf(const IntervalMatrix& A, Precision p) { return max_line_sum(A, p, true); }
Real norm_1(const IntervalMatrix& A, Precision p) { return max_line_sum(A, p, false); }

Real distance(const Box& a, const Box& b, Precision p) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("box dimension mismatch");
    Real best(p);
    mpfr_t t;
    mpfr_init2(t, p.bits);
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpfr_sub(t, a[i].lo(), b[i].lo(), MPFR_RNDU);
        mpfr_abs(t, t, MPFR_RNDU);
        if (mpfr_cmp(t, best.raw()) > 0) mpfr_set(best.raw(), t, MPFR_RNDU);
        mpfr_sub(t, a[i].hi(), b[i].hi(), MPFR_RNDU);
        mpfr_abs(t, t, MPFR_RNDU);
        if (mpfr_cmp(t, best.raw()) > 0) mpfr_set(best.raw(), t, MPFR_RNDU);
    }
    mpfr_clear(t);
    return best;
}

std::pair<std::vector<Real>, Box> midpoint_width_split(const Box& v, Precision p) {
    if (v.empty()) throw std::invalid_argument("empty box");
    std::vector<Real> mid;
    Box w;
    mid.reserve(v.size());
    w.reserve(v.size());
    mpfr_t dlo, dhi;
    mpfr_init2(dlo, p.bits);
    mpfr_init2(dhi, p.bits);
    for (const auto& c : v) {
        Real m(p);
        mpfr_add(m.raw(), c.lo(), c.hi(), MPFR_RNDN);
        mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
        // Symmetric radius taken outward so that m + W contains c.
        mpfr_sub(dlo, m.raw(), c.lo(), MPFR_RNDU);
        mpfr_sub(dhi, c.hi(), m.raw(), MPFR_RNDU);
        if (mpfr_cmp(dlo, dhi) < 0) mpfr_set(dlo, dhi, MPFR_RNDU);
        Interval wi(p);
        mpfr_neg(wi.lo_raw(), dlo, MPFR_RNDD);
        mpfr_set(wi.hi_raw(), dlo, MPFR_RNDU);
        mid.push_back(std::move(m));
        w.push_back(std::move(wi));
    }
    mpfr_clear(dlo);
    mpfr_clear(dhi);
    return {std::move(mid), std::move(w)};
}

// --- elementary enclosures -----------------------------------------------------

namespace {
template <typename F>
Interval monotone_increasing(const Interval& a, Precision p, F f) {
    Interval out(p);
    f(out.lo_raw(), a.lo(), MPFR_RNDD);
    f(out.hi_raw(), a.hi(), MPFR_RNDU);
    return out;
}
}  // namespace

Interval exp_interval(const Interval& a, Precision p) {
    return monotone_increasing(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t m) { mpfr_exp(r, x, m); });
}

Interval atan_interval(const Interval& a, Precision p) {
    return monotone_increasing(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t m) { mpfr_atan(r, x, m); });
}

Interval tanh_interval(const Interval& a, Precision p) {
    return monotone_increasing(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t m) { mpfr_tanh(r, x, m); });
}

Interval abs_interval(const Interval& a, Precision p) {
    Interval out(p);
    if (mpfr_sgn(a.lo()) >= 0) {
        mpfr_set(out.lo_raw(), a.lo(), MPFR_RNDD);
        mpfr_set(out.hi_raw(), a.hi(), MPFR_RNDU);
    } else if (mpfr_sgn(a.hi()) <= 0) {
        mpfr_neg(out.lo_raw(), a.hi(), MPFR_RNDD);
        mpfr_neg(out.hi_raw(), a.lo(), MPFR_RNDU);
    } else {
        mpfr_set_zero(out.lo_raw(), 1);
        mpfr_neg(out.hi_raw(), a.lo(), MPFR_RNDU);
        if (mpfr_cmp(a.hi(), out.hi_raw()) > 0) mpfr_set(out.hi_raw(), a.hi(), MPFR_RNDU);
    }
    return out;
}

namespace {

// Shared quadrant analysis for sin/cos. Extrema of the function lie at
// integer multiples of `half_period_multiples` times pi/2:
//   cos: extrema at k*pi       (even multiple of pi/2)
//   sin: extrema at pi/2 + k*pi (odd multiple of pi/2)
// For every integer multiple m of pi/2 whose enclosure overlaps [a.lo, a.hi],
// the corresponding extremum value (+1 or -1) is forced into the range.
// Overlap is decided on an enclosure of pi, so uncertainty only widens.
template <typename SetExtremum, typename EndpointFun>
Interval trig_range(const Interval& a, Precision p, EndpointFun f, SetExtremum apply) {
    Interval out(p);
    // Endpoint candidates.
    mpfr_t t;
    mpfr_init2(t, p.bits);
    f(out.lo_raw(), a.lo(), MPFR_RNDD);
    f(t, a.hi(), MPFR_RNDD);
    if (mpfr_cmp(t, out.lo_raw()) < 0) mpfr_set(out.lo_raw(), t, MPFR_RNDD);
    f(out.hi_raw(), a.lo(), MPFR_RNDU);
    f(t, a.hi(), MPFR_RNDU);
    if (mpfr_cmp(t, out.hi_raw()) > 0) mpfr_set(out.hi_raw(), t, MPFR_RNDU);

    mpfr_sub(t, a.hi(), a.lo(), MPFR_RNDU);
    if (mpfr_cmp_ui(t, 7) >= 0) {  // spans more than a full period
        mpfr_set_si(out.lo_raw(), -1, MPFR_RNDD);
        mpfr_set_si(out.hi_raw(), 1, MPFR_RNDU);
        mpfr_clear(t);
        return out;
    }

    // Enclosure of pi/2 and the integer-multiple range possibly inside [a].
    mpfr_t hlo, hhi, mlo, mhi;
    mpfr_init2(hlo, p.bits);
    mpfr_init2(hhi, p.bits);
    mpfr_init2(mlo, p.bits);
    mpfr_init2(mhi, p.bits);
    mpfr_const_pi(hlo, MPFR_RNDD);
    mpfr_const_pi(hhi, MPFR_RNDU);
    mpfr_div_2ui(hlo, hlo, 1, MPFR_RNDD);
    mpfr_div_2ui(hhi, hhi, 1, MPFR_RNDU);
    // m in [a.lo/(pi/2), a.hi/(pi/2)] widened by one on each side.
    mpfr_div(t, a.lo(), mpfr_sgn(a.lo()) >= 0 ? hhi : hlo, MPFR_RNDD);
    long m_from = mpfr_get_si(t, MPFR_RNDD) - 1;
    mpfr_div(t, a.hi(), mpfr_sgn(a.hi()) >= 0 ? hlo : hhi, MPFR_RNDU);
    long m_to = mpfr_get_si(t, MPFR_RNDU) + 1;
    for (long m = m_from; m <= m_to; ++m) {
        // Enclosure of m * pi/2.
        if (m >= 0) {
            mpfr_mul_si(mlo, hlo, m, MPFR_RNDD);
            mpfr_mul_si(mhi, hhi, m, MPFR_RNDU);
        } else {
            mpfr_mul_si(mlo, hhi, m, MPFR_RNDD);
            mpfr_mul_si(mhi, hlo, m, MPFR_RNDU);
        }
        bool overlap = mpfr_cmp(mhi, a.lo()) >= 0 && mpfr_cmp(mlo, a.hi()) <= 0;
        if (overlap) apply(m, out);
    }
    mpfr_clear(t);
    mpfr_clear(hlo);
    mpfr_clear(hhi);
    mpfr_clear(mlo);
    mpfr_clear(mhi);
    return out;
}

}  // namespace

Interval cos_interval(const Interval& a, Precision p) {
    return trig_range(
        a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t m) { mpfr_cos(r, x, m); },
        [](long m, Interval& out) {
            if (m % 2 != 0) return;  // extrema of cos at even multiples of pi/2
            long k = m / 2;
            if (k % 2 == 0)
                mpfr_set_si(out.hi_raw(), 1, MPFR_RNDU);
            else
                mpfr_set_si(out.lo_raw(), -1, MPFR_RNDD);
        });
}

Interval sin_interval(const Interval& a, Precision p) {
    return trig_range(
        a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t m) { mpfr_sin(r, x, m); },
        [](long m, Interval& out) {
            long r = ((m % 4) + 4) % 4;
            if (r == 1)
                mpfr_set_si(out.hi_raw(), 1, MPFR_RNDU);
            else if (r == 3)
                mpfr_set_si(out.lo_raw(), -1, MPFR_RNDD);
        });
}

// --- containment helpers ----------------------------------------------------

bool contains(const Interval& outer, const Interval& inner) {
    return mpfr_cmp(outer.lo(), inner.lo()) <= 0 && mpfr_cmp(inner.hi(), outer.hi()) <= 0;
}

bool contains(const Box& outer, const Box& inner) {
    if (outer.size() != inner.size()) return false;
    for (std::size_t i = 0; i < outer.size(); ++i)
        if (!contains(outer[i], inner[i])) return false;
    return true;
}

bool contains_rational(const Interval& a, const mpq_class& x) {
    return mpfr_cmp_q(a.lo(), x.get_mpq_t()) <= 0 && mpfr_cmp_q(a.hi(), x.get_mpq_t()) >= 0;
}

}  // namespace eulerdom
