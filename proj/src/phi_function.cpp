#include "phimax/phi_function.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "phimax/errors.hpp"

namespace phimax {

PhiFunction PhiFunction::power_law(double p, Box domain) {
    if (p < 1.0) throw argument_error("power_law: p must be >= 1");
    PhiFunction phi;
    phi.family_ = PhiFamily::PowerLaw;
    phi.domain_ = domain;
    phi.p_ = p;
    phi.growth_lo_ = p;
    phi.growth_hi_ = p;
    std::ostringstream n;
    n << "power_law(p=" << p << ")";
    phi.name_ = n.str();
    return phi;
}

PhiFunction PhiFunction::autonomous(std::function<double(double)> fn, double growth_hint,
                                    Box domain, std::string name) {
    if (!fn) throw argument_error("autonomous: null function");
    PhiFunction phi;
    phi.family_ = PhiFamily::Autonomous;
    phi.domain_ = domain;
    phi.scalar_fn_ = std::move(fn);
    phi.growth_lo_ = std::max(1.0, growth_hint);
    phi.growth_hi_ = std::max(1.0, growth_hint);
    phi.name_ = std::move(name);
    return phi;
}

PhiFunction PhiFunction::variable_exponent(SpatialFunction p_field, Box domain) {
    if (!p_field.valid()) throw argument_error("variable_exponent: null exponent field");
    PhiFunction phi;
    phi.family_ = PhiFamily::VariableExponent;
    phi.domain_ = domain;
    phi.p_field_ = std::move(p_field);
    // sampled growth range, for bracketing heuristics only
    double lo = 1e300, hi = 1.0;
    const int n = 33;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < (domain.dim == 2 ? n : 1); ++j) {
            Point p{domain.lo.x + (domain.hi.x - domain.lo.x) * i / (n - 1.0),
                    domain.dim == 2 ? domain.lo.y + (domain.hi.y - domain.lo.y) * j / (n - 1.0)
                                    : 0.0};
            const double v = phi.p_field_(p);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    phi.growth_lo_ = std::max(1.0, lo);
    phi.growth_hi_ = std::max(phi.growth_lo_, hi);
    phi.name_ = "variable_exponent(p=" + phi.p_field_.name() + ")";
    return phi;
}

PhiFunction PhiFunction::double_phase(double p, double q, SpatialFunction a_field, Box domain) {
    if (p < 1.0) throw argument_error("double_phase: p must be >= 1");
    if (q <= p) throw argument_error("double_phase: q must exceed p");
    if (!a_field.valid()) throw argument_error("double_phase: null weight field");
    PhiFunction phi;
    phi.family_ = PhiFamily::DoublePhase;
    phi.domain_ = domain;
    phi.p_ = p;
    phi.q_ = q;
    phi.a_field_ = std::move(a_field);
    phi.growth_lo_ = p;
    phi.growth_hi_ = q;
    std::ostringstream n;
    n << "double_phase(p=" << p << ",q=" << q << ",a=" << phi.a_field_.name() << ")";
    phi.name_ = n.str();
    return phi;
}

PhiFunction PhiFunction::custom(std::function<double(Point, double)> fn, double growth_hint,
                                Box domain, std::string name) {
    if (!fn) throw argument_error("custom: null function");
    PhiFunction phi;
    phi.family_ = PhiFamily::Custom;
    phi.domain_ = domain;
    phi.custom_fn_ = std::move(fn);
    phi.growth_lo_ = std::max(1.0, growth_hint);
    phi.growth_hi_ = std::max(1.0, growth_hint);
    phi.name_ = std::move(name);
    return phi;
}

double PhiFunction::eval_unchecked(Point x, double t) const {
    if (t == 0.0) return 0.0;
    switch (family_) {
        case PhiFamily::PowerLaw:
            return std::pow(t, p_);
        case PhiFamily::Autonomous:
            return scalar_fn_(t);
        case PhiFamily::VariableExponent: {
            const double px = p_field_(x);
            if (px < 1.0) throw argument_error("variable_exponent: p(x) < 1 at sampled point");
            return std::pow(t, px);
        }
        case PhiFamily::DoublePhase: {
            const double ax = a_field_(x);
            if (ax < 0.0) throw argument_error("double_phase: a(x) < 0 at sampled point");
            return std::pow(t, p_) + ax * std::pow(t, q_);
        }
        case PhiFamily::Custom:
            return custom_fn_(x, t);
    }
    return 0.0;
}

double PhiFunction::operator()(Point x, double t) const {
    if (t < 0.0) throw argument_error("phi: t must be nonnegative");
    if (!domain_.contains(x)) throw domain_error("phi: point outside the domain box");
    return eval_unchecked(x, t);
}

double left_inverse(const PhiFunction& phi, Point x, double tau, double tol) {
    if (tau < 0.0) throw argument_error("left_inverse: tau must be nonnegative");
    if (tol <= 0.0) throw argument_error("left_inverse: tol must be positive");
    if (tau == 0.0) return 0.0;

    // bracket: [0, 1], double the upper end until phi(x, hi) >= tau
    double lo = 0.0;
    double hi = 1.0;
    int growth = 0;
    const int growth_cap = 64; // upper end caps at 2^64
    while (phi(x, hi) < tau) {
        lo = hi;
        hi *= 2.0;
        if (++growth > growth_cap) {
            std::ostringstream diag;
            diag << "left_inverse: failed to bracket tau=" << tau << " after " << growth_cap
                 << " doublings (phi(" << hi / 2.0 << ")=" << phi(x, hi / 2.0) << ")";
            throw numerical_error(diag.str());
        }
    }

    // bisection on the strictly increasing t -> phi(x,t)
    const int iter_cap = 200;
    for (int it = 0; it < iter_cap && (hi - lo) > tol * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(x, mid) < tau)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double conjugate(const PhiFunction& phi, Point x, double t, const SearchSpec& search) {
    if (t < 0.0) throw argument_error("conjugate: t must be nonnegative");
    if (t == 0.0) return 0.0; // sup of -phi(x,s) sits at s = 0

    const auto objective = [&](double s) { return t * s - phi(x, s); };

    // expand until the objective starts decreasing; it is concave past its
    // increasing part for the supported families, so the max is bracketed.
    double s_prev = 0.0;
    double g_prev = 0.0; // objective at 0
    double s_cur = search.initial_upper;
    double g_cur = objective(s_cur);
    int expansions = 0;
    // strict: a flat objective is already at its supremum (concavity)
    while (g_cur > g_prev) {
        if (++expansions > search.max_expansions) {
            std::ostringstream diag;
            diag << "conjugate: objective still increasing at s=" << s_cur << " (t=" << t << ")";
            throw unbounded_conjugate_error(diag.str());
        }
        s_prev = s_cur;
        g_prev = g_cur;
        s_cur *= search.growth;
        g_cur = objective(s_cur);
        if (std::isinf(g_cur) && g_cur < 0.0) break; // phi overflowed; max is behind us
    }

    // golden-section maximization over [lo, hi] = [below the peak, past it]
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = expansions > 1 ? s_prev / search.growth : 0.0;
    double hi = s_cur;
    double m1 = hi - invphi * (hi - lo);
    double m2 = lo + invphi * (hi - lo);
    double f1 = objective(m1);
    double f2 = objective(m2);
    for (int it = 0; it < search.max_refinements && (hi - lo) > search.tol * std::max(1.0, hi);
         ++it) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + invphi * (hi - lo);
            f2 = objective(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - invphi * (hi - lo);
            f1 = objective(m1);
        }
    }
    return std::max(0.0, std::max(f1, f2));
}

PhiFunction conjugate_phi(const PhiFunction& phi, const SearchSpec& search) {
    auto base = std::make_shared<PhiFunction>(phi);
    const double q = phi.growth_upper();
    // conjugate of q-growth has q' = q/(q-1) growth
    const double hint = q > 1.0 ? q / (q - 1.0) : 2.0;
    return PhiFunction::custom(
        [base, search](Point x, double t) { return conjugate(*base, x, t, search); }, hint,
        phi.domain(), phi.name() + "*");
}

} // namespace phimax
