#pragma once

#include <functional>
#include <optional>
#include <string>

#include "phimax/geometry.hpp"
#include "phimax/spatial_function.hpp"

namespace phimax {

enum class PhiFamily {
    PowerLaw,         // phi(t) = t^p, exact closed forms available
    Autonomous,       // phi(t), x-independent callable
    VariableExponent, // phi(x,t) = t^{p(x)}
    DoublePhase,      // phi(x,t) = t^p + a(x) t^q
    Custom,           // arbitrary phi(x,t); numeric conjugates land here
};

// Refinement control for the pointwise Legendre transform.
struct SearchSpec {
    double initial_upper = 1.0;
    double growth = 2.0;
    int max_expansions = 200;
    double tol = 1e-10; // relative width of the final refinement interval
    int max_refinements = 300;
};

// A generalized Orlicz integrand phi(x,t): zero at t=0, strictly
// increasing and continuous in t, unbounded as t -> infinity. x-dependence
// is restricted to the domain box.
class PhiFunction {
public:
    static PhiFunction power_law(double p, Box domain);
    static PhiFunction autonomous(std::function<double(double)> fn, double growth_hint,
                                  Box domain, std::string name);
    static PhiFunction variable_exponent(SpatialFunction p_field, Box domain);
    static PhiFunction double_phase(double p, double q, SpatialFunction a_field, Box domain);
    static PhiFunction custom(std::function<double(Point, double)> fn, double growth_hint,
                              Box domain, std::string name);

    // phi(x,t); throws domain_error if x is outside the box and
    // argument_error if t < 0. Exact 0 at t = 0.
    double operator()(Point x, double t) const;

    PhiFamily family() const { return family_; }
    const Box& domain() const { return domain_; }
    const std::string& name() const { return name_; }

    double p() const { return p_; }
    double q() const { return q_; }
    const SpatialFunction& p_field() const { return p_field_; }
    const SpatialFunction& a_field() const { return a_field_; }

    // Growth exponents used for bracketing heuristics: a lower bound p
    // such that (aInc)_p is expected, and an upper bound q for (aDec)_q.
    double growth_lower() const { return growth_lo_; }
    double growth_upper() const { return growth_hi_; }

private:
    PhiFamily family_ = PhiFamily::PowerLaw;
    Box domain_;
    std::string name_;
    double p_ = 2.0;
    double q_ = 2.0;
    double growth_lo_ = 1.0;
    double growth_hi_ = 2.0;
    SpatialFunction p_field_;
    SpatialFunction a_field_;
    std::function<double(double)> scalar_fn_;
    std::function<double(Point, double)> custom_fn_;

    double eval_unchecked(Point x, double t) const;
};

// Left-inverse: the t with phi(x,t) = tau, found by doubling the upper
// bracket end from [0,1] and bisecting. Returns 0 at tau = 0.
double left_inverse(const PhiFunction& phi, Point x, double tau, double tol = 1e-12);

// Pointwise conjugate phi*(x,t) = sup_{s>=0} (t s - phi(x,s)), computed by
// geometric bracket expansion followed by golden-section refinement.
// Throws unbounded_conjugate_error when the objective is still increasing
// at the bracket cap.
double conjugate(const PhiFunction& phi, Point x, double t, const SearchSpec& search = {});

// The conjugate as an integrand of its own, for norms under phi*.
PhiFunction conjugate_phi(const PhiFunction& phi, const SearchSpec& search = {});

} // namespace phimax
