#include "phimax/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phimax/errors.hpp"
#include "phimax/grid.hpp"

namespace phimax {

const char* condition_name(Condition c) {
    switch (c) {
        case Condition::aInc: return "aInc";
        case Condition::aDec: return "aDec";
        case Condition::A0: return "A0";
        case Condition::A1: return "A1";
        case Condition::A2: return "A2";
    }
    return "?";
}

std::vector<double> SampleSpec::t_samples() const {
    if (t_min <= 0.0 || t_max <= t_min) throw argument_error("SampleSpec: need 0 < t_min < t_max");
    if (t_count < 2) throw argument_error("SampleSpec: need at least 2 t-samples");
    std::vector<double> t(t_count);
    const double step = std::log(t_max / t_min) / (t_count - 1);
    for (int i = 0; i < t_count; ++i) t[i] = t_min * std::exp(i * step);
    t.back() = t_max;
    return t;
}

std::vector<Point> SampleSpec::from_grid(const Grid& grid, int max_count) {
    std::vector<Point> pts;
    const std::size_t n = grid.size();
    const std::size_t stride = std::max<std::size_t>(1, n / static_cast<std::size_t>(max_count));
    for (std::size_t i = 0; i < n; i += stride) pts.push_back(grid.node(i));
    return pts;
}

std::vector<Point> SampleSpec::log_radial(const Box& box, int count) {
    std::vector<Point> pts;
    pts.push_back({0.0, 0.0});
    const double r_hi = std::max(std::fabs(box.lo.x), std::fabs(box.hi.x));
    const double r_lo = std::min(1.0, r_hi / 2.0);
    const double step = std::log(r_hi / r_lo) / std::max(1, count - 1);
    for (int i = 0; i < count; ++i) {
        const double r = r_lo * std::exp(i * step);
        if (box.contains({r, 0.0})) pts.push_back({r, 0.0});
        if (box.contains({-r, 0.0})) pts.push_back({-r, 0.0});
    }
    return pts;
}

std::vector<std::pair<Point, Point>> SampleSpec::modulus_pairs(const std::vector<Point>& points,
                                                               const std::vector<Point>& anchors,
                                                               double gap_max, int dyadic_levels) {
    std::vector<std::pair<Point, Point>> pairs;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            pairs.emplace_back(points[i], points[j]);
    for (const Point& a : anchors) {
        double gap = gap_max;
        for (int k = 0; k < dyadic_levels; ++k) {
            pairs.emplace_back(a, Point{a.x + gap, a.y});
            gap /= 2.0;
        }
    }
    return pairs;
}

namespace {

// Largest over x of max_{i<j} lhs_t(i) / rhs_t(j) in O(#t) per x, where the
// defining inequality is lhs(s) <= a rhs(t) for s < t.
struct RatioScan {
    double worst = 0.0;
    Counterexample where;
};

RatioScan scan_increasing(const PhiFunction& phi, double exponent,
                          const std::vector<Point>& xs, const std::vector<double>& ts) {
    // (aInc)_p: phi(x,s)/s^p <= a phi(x,t)/t^p, s < t: worst a is
    // max over s<t of v(s)/v(t) with v = phi/t^p.
    RatioScan out;
    std::vector<double> v(ts.size());
    for (const Point& x : xs) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            v[i] = phi(x, ts[i]) / std::pow(ts[i], exponent);
        double run_max = v[0];
        std::size_t run_arg = 0;
        for (std::size_t j = 1; j < ts.size(); ++j) {
            if (v[j] > 0.0 && run_max / v[j] > out.worst) {
                out.worst = run_max / v[j];
                out.where = {x, ts[run_arg], ts[j]};
            }
            if (v[j] > run_max) {
                run_max = v[j];
                run_arg = j;
            }
        }
    }
    return out;
}

RatioScan scan_decreasing(const PhiFunction& phi, double exponent,
                          const std::vector<Point>& xs, const std::vector<double>& ts) {
    // (aDec)_q: phi(x,t)/t^q <= a phi(x,s)/s^q, s < t: worst a is
    // max over s<t of w(t)/w(s) with w = phi/t^q.
    RatioScan out;
    std::vector<double> w(ts.size());
    for (const Point& x : xs) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            w[i] = phi(x, ts[i]) / std::pow(ts[i], exponent);
        double run_min = w[0];
        std::size_t run_arg = 0;
        for (std::size_t j = 1; j < ts.size(); ++j) {
            if (run_min > 0.0 && w[j] / run_min > out.worst) {
                out.worst = w[j] / run_min;
                out.where = {x, ts[run_arg], ts[j]};
            }
            if (w[j] < run_min) {
                run_min = w[j];
                run_arg = j;
            }
        }
    }
    return out;
}

std::vector<Point> default_spatial(const SampleSpec& spec, const Box& domain) {
    if (!spec.spatial.empty()) return spec.spatial;
    // fall back to a coarse lattice over the domain box
    std::vector<Point> pts;
    const int n = 17;
    for (int i = 0; i < n; ++i) {
        const double x = domain.lo.x + (domain.hi.x - domain.lo.x) * i / (n - 1.0);
        if (domain.dim == 1) {
            pts.push_back({x, 0.0});
        } else {
            for (int j = 0; j < n; ++j)
                pts.push_back({x, domain.lo.y + (domain.hi.y - domain.lo.y) * j / (n - 1.0)});
        }
    }
    return pts;
}

} // namespace

ConditionReport check_ainc(const PhiFunction& phi, double p, double a, const SampleSpec& spec) {
    if (p <= 0.0) throw argument_error("check_ainc: p must be positive");
    if (a < 1.0) throw argument_error("check_ainc: a must be >= 1");
    const auto xs = default_spatial(spec, phi.domain());
    const auto ts = spec.t_samples();
    const RatioScan scan = scan_increasing(phi, p, xs, ts);

    ConditionReport r;
    r.condition = Condition::aInc;
    r.exponent = p;
    r.witness_constant = std::max(1.0, scan.worst);
    r.samples_used = static_cast<long>(xs.size()) * static_cast<long>(ts.size());
    r.tolerance = spec.tolerance;
    r.passed = scan.worst <= a * (1.0 + spec.tolerance);
    if (!r.passed) r.counterexample = scan.where;
    return r;
}

ConditionReport check_adec(const PhiFunction& phi, double q, double a, const SampleSpec& spec) {
    if (q <= 0.0) throw argument_error("check_adec: q must be positive");
    if (a < 1.0) throw argument_error("check_adec: a must be >= 1");
    const auto xs = default_spatial(spec, phi.domain());
    const auto ts = spec.t_samples();
    const RatioScan scan = scan_decreasing(phi, q, xs, ts);

    ConditionReport r;
    r.condition = Condition::aDec;
    r.exponent = q;
    r.witness_constant = std::max(1.0, scan.worst);
    r.samples_used = static_cast<long>(xs.size()) * static_cast<long>(ts.size());
    r.tolerance = spec.tolerance;
    r.passed = scan.worst <= a * (1.0 + spec.tolerance);
    if (!r.passed) r.counterexample = scan.where;
    return r;
}

namespace {

ConditionReport a0_scan(const PhiFunction& phi, const SampleSpec& spec, bool two_sided) {
    const auto xs = default_spatial(spec, phi.domain());
    // beta grid over (0, 1], descending so the first pass is the witness
    const int n_beta = std::max(2, spec.t_count);
    const double b_min = std::min(spec.t_min, 0.5);
    const double step = std::log(1.0 / b_min) / (n_beta - 1);

    ConditionReport r;
    r.condition = Condition::A0;
    r.tolerance = spec.tolerance;
    r.samples_used = static_cast<long>(xs.size()) * n_beta;

    Counterexample best_fail;
    for (int k = 0; k < n_beta; ++k) {
        const double beta = k == 0 ? 1.0 : std::exp(-k * step);
        bool ok = true;
        for (const Point& x : xs) {
            if (phi(x, beta) > 1.0 || (two_sided && phi(x, 1.0 / beta) < 1.0)) {
                ok = false;
                if (k == 0) best_fail = {x, beta, 1.0 / beta};
                break;
            }
        }
        if (ok) {
            r.passed = true;
            r.witness_constant = beta;
            return r;
        }
    }
    r.passed = false;
    r.witness_constant = 0.0;
    r.counterexample = best_fail;
    return r;
}

} // namespace

ConditionReport check_a0(const PhiFunction& phi, const SampleSpec& spec) {
    return a0_scan(phi, spec, /*two_sided=*/true);
}

ConditionReport check_a0_upper(const PhiFunction& phi, const SampleSpec& spec) {
    return a0_scan(phi, spec, /*two_sided=*/false);
}

namespace {

double inv(double v) { return 1.0 / v; }

// All pairs of the spatial samples, dyadic near-pairs anchored at the
// sample closest to the origin, plus any explicit extra pairs.
std::vector<std::pair<Point, Point>> modulus_pair_set(const SampleSpec& spec) {
    std::vector<std::pair<Point, Point>> pairs;
    if (!spec.spatial.empty()) {
        Point anchor = spec.spatial.front();
        double spread = 0.0;
        for (const Point& p : spec.spatial)
            if (norm(p) < norm(anchor)) anchor = p;
        for (const Point& p : spec.spatial) spread = std::max(spread, dist(p, anchor));
        pairs = SampleSpec::modulus_pairs(spec.spatial, {anchor},
                                          std::min(1.0, spread > 0.0 ? spread : 1.0));
    }
    pairs.insert(pairs.end(), spec.extra_pairs.begin(), spec.extra_pairs.end());
    if (pairs.empty())
        throw argument_error("modulus check needs spatial samples or explicit pairs");
    return pairs;
}

} // namespace

ConditionReport check_a1_variable_exponent(const SpatialFunction& p_field,
                                           const SampleSpec& spec) {
    // |1/p(x) - 1/p(y)| <= C / log(e + 1/|x-y|); estimate the smallest C.
    ConditionReport r;
    r.condition = Condition::A1;
    r.tolerance = spec.tolerance;

    const auto pairs = modulus_pair_set(spec);

    double worst = 0.0;
    Counterexample where;
    long used = 0;
    for (const auto& [x, y] : pairs) {
        const double d = dist(x, y);
        if (d <= 0.0) continue;
        ++used;
        const double lhs = std::fabs(inv(p_field(x)) - inv(p_field(y)));
        const double c = lhs * std::log(std::exp(1.0) + 1.0 / d);
        if (c > worst) {
            worst = c;
            where = {x, y.x, d};
        }
    }
    r.witness_constant = worst;
    r.samples_used = used;
    r.passed = std::isfinite(worst) && worst <= spec.cap;
    if (!r.passed) r.counterexample = where;
    return r;
}

ConditionReport check_a2_variable_exponent(const SpatialFunction& p_field, double p_inf,
                                           const SampleSpec& spec) {
    if (p_inf < 1.0) throw argument_error("check_a2: p_inf must be >= 1");
    ConditionReport r;
    r.condition = Condition::A2;
    r.exponent = p_inf;
    r.tolerance = spec.tolerance;

    if (spec.spatial.empty()) throw argument_error("check_a2: needs spatial samples");
    double worst = 0.0;
    Counterexample where;
    for (const Point& x : spec.spatial) {
        const double c = std::fabs(inv(p_field(x)) - inv(p_inf)) * std::log(std::exp(1.0) + norm(x));
        if (c > worst) {
            worst = c;
            where = {x, p_field(x), p_inf};
        }
    }
    r.witness_constant = worst;
    r.samples_used = static_cast<long>(spec.spatial.size());
    r.passed = std::isfinite(worst) && worst <= spec.cap;
    if (!r.passed) r.counterexample = where;
    return r;
}

ConditionReport check_a1_double_phase(const SpatialFunction& a_field, double p, double q, int dim,
                                      const SampleSpec& spec) {
    if (q <= p || p < 1.0) throw argument_error("check_a1_double_phase: need q > p >= 1");
    if (dim != 1 && dim != 2) throw argument_error("check_a1_double_phase: dim must be 1 or 2");

    ConditionReport r;
    r.condition = Condition::A1;
    r.tolerance = spec.tolerance;

    double alpha = (static_cast<double>(dim) / p) * (q - p);
    r.exponent = alpha;
    if (alpha > 1.0) {
        r.note = "required Holder exponent " + std::to_string(alpha) + " exceeds 1; clamped to 1";
        alpha = 1.0;
    }

    const auto pairs = modulus_pair_set(spec);

    double worst = 0.0;
    Counterexample where;
    long used = 0;
    for (const auto& [x, y] : pairs) {
        const double d = dist(x, y);
        if (d <= 0.0) continue;
        ++used;
        const double c = std::fabs(a_field(x) - a_field(y)) / std::pow(d, alpha);
        if (c > worst) {
            worst = c;
            where = {x, y.x, d};
        }
    }
    r.witness_constant = worst;
    r.samples_used = used;
    r.passed = std::isfinite(worst) && worst <= spec.cap;
    if (!r.passed) r.counterexample = where;
    return r;
}

} // namespace phimax
