#include "eulerdom/partition.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace eulerdom {

std::vector<mpq_class> Partition::gaps() const {
    std::vector<mpq_class> out;
    out.reserve(pieces());
    for (std::size_t i = 1; i < points.size(); ++i) out.push_back(points[i] - points[i - 1]);
    return out;
}

Partition Partition::equidistant(const mpq_class& a, int depth) {
    if (sgn(a) <= 0) throw std::invalid_argument("horizon must be positive");
    if (depth < 0 || depth > 26) throw std::invalid_argument("depth out of range [0,26]");
    std::size_t k = std::size_t{1} << depth;
    Partition q;
    q.points.reserve(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        mpq_class t = a * static_cast<unsigned long>(i);
        t /= static_cast<unsigned long>(k);
        q.points.push_back(t);
    }
    return q;
}

Partition Partition::from_points(std::vector<mpq_class> pts) {
    if (pts.size() < 2) throw std::invalid_argument("partition needs at least two knots");
    if (sgn(pts.front()) != 0) throw std::invalid_argument("partition must start at 0");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (cmp(pts[i - 1], pts[i]) >= 0) throw std::invalid_argument("partition knots must strictly increase");
    Partition q;
    q.points = std::move(pts);
    return q;
}

PartitionStats partition_stats(const Partition& q) {
    auto gs = q.gaps();
    PartitionStats st{gs[0], gs[0], 1};
    for (const auto& g : gs) {
        if (g > st.norm) st.norm = g;
        if (g < st.min_gap) st.min_gap = g;
    }
    st.ratio = st.norm / st.min_gap;
    return st;
}

Partition partition_join(const Partition& p, const Partition& q) {
    if (cmp(p.horizon(), q.horizon()) != 0) throw std::invalid_argument("partition horizons differ");
    std::vector<mpq_class> merged;
    merged.reserve(p.points.size() + q.points.size());
    std::merge(p.points.begin(), p.points.end(), q.points.begin(), q.points.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return Partition::from_points(std::move(merged));
}

bool refines(const Partition& p, const Partition& q) {
    if (cmp(p.horizon(), q.horizon()) != 0) throw std::invalid_argument("partition horizons differ");
    return std::includes(q.points.begin(), q.points.end(), p.points.begin(), p.points.end());
}

StepEnclosure make_stepfun(Partition q, std::vector<Box> values, mpq_class K) {
    if (sgn(K) <= 0) throw std::invalid_argument("state bound K must be positive");
    if (values.size() != q.points.size())
        throw std::invalid_argument("need one value box per knot (index 0 holds the t=0 value)");
    std::size_t n = values.front().size();
    if (n == 0) throw std::invalid_argument("empty value box");
    mpq_class negK = -K;
    for (const auto& v : values) {
        if (v.size() != n) throw std::invalid_argument("value boxes have mixed dimensions");
        for (const auto& c : v)
            if (mpfr_cmp_q(c.lo(), negK.get_mpq_t()) < 0 || mpfr_cmp_q(c.hi(), K.get_mpq_t()) > 0)
                throw std::invalid_argument("value box escapes [-K,K]^n");
    }
    return StepEnclosure{std::move(q), std::move(values), std::move(K)};
}

Box stepfun_eval(const StepEnclosure& s, const mpq_class& t) {
    const auto& pts = s.partition.points;
    if (sgn(t) < 0 || cmp(t, pts.back()) > 0) throw std::invalid_argument("time outside [0,a]");
    if (sgn(t) == 0) return s.values[0];
    auto it = std::lower_bound(pts.begin(), pts.end(), t);  // first knot >= t
    return s.values[static_cast<std::size_t>(it - pts.begin())];
}

SeparationResult separation_check(const StepEnclosure& f, const StepEnclosure& g, Precision p) {
    if (f.dim() != g.dim() || cmp(f.K, g.K) != 0 ||
        cmp(f.partition.horizon(), g.partition.horizon()) != 0)
        throw std::invalid_argument("step enclosures have mismatched shape");

    mpq_class K = f.K;
    mpq_class negK = -K;
    bool any_margin = false;
    mpq_class min_margin;

    auto consider = [&](const Box& fv, const Box& gv) -> bool {
        for (std::size_t i = 0; i < fv.size(); ++i) {
            // Lower side: exempt at the bottom bound, else needs lo_g - lo_f > 0.
            if (mpfr_cmp_q(fv[i].lo(), negK.get_mpq_t()) != 0) {
                mpq_class m = rational_from_mpfr(gv[i].lo()) - rational_from_mpfr(fv[i].lo());
                if (sgn(m) <= 0) return false;
                if (!any_margin || cmp(m, min_margin) < 0) min_margin = m;
                any_margin = true;
            }
            if (mpfr_cmp_q(fv[i].hi(), K.get_mpq_t()) != 0) {
                mpq_class m = rational_from_mpfr(fv[i].hi()) - rational_from_mpfr(gv[i].hi());
                if (sgn(m) <= 0) return false;
                if (!any_margin || cmp(m, min_margin) < 0) min_margin = m;
                any_margin = true;
            }
        }
        return true;
    };

    if (!consider(f.values[0], g.values[0])) return {};
    Partition joined = partition_join(f.partition, g.partition);
    for (std::size_t s = 1; s < joined.points.size(); ++s) {
        const mpq_class& t = joined.points[s];
        if (!consider(stepfun_eval(f, t), stepfun_eval(g, t))) return {};
    }

    if (!any_margin) return {true, K};  // every pair exempt: any positive delta works
    // Largest precision-p dyadic <= the exact margin.
    Real d = Real::of_rational(min_margin, p, MPFR_RNDD);
    return {true, d.to_rational()};
}

bool basis_waybelow(const StepEnclosure& f, const StepEnclosure& g, Precision p) {
    return separation_check(f, g, p).separated;
}

std::string stepfun_json(const StepEnclosure& s) {
    nlohmann::json j;
    auto& pts = j["partition"] = nlohmann::json::array();
    for (const auto& q : s.partition.points) pts.push_back(q.get_str());
    auto& vals = j["values"] = nlohmann::json::array();
    for (const auto& v : s.values) {
        nlohmann::json box = nlohmann::json::array();
        for (const auto& c : v)
            box.push_back({decimal_from_mpfr(c.lo()), decimal_from_mpfr(c.hi())});
        vals.push_back(std::move(box));
    }
    return j.dump();
}

}  // namespace eulerdom
