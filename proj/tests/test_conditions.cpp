#include <doctest.h>

#include <cmath>

#include "phimax/conditions.hpp"
#include "phimax/errors.hpp"
#include "phimax/grid.hpp"

using namespace phimax;

namespace {

const Box kLine = Box::interval(-8.0, 8.0);

SampleSpec line_spec() {
    SampleSpec s;
    s.spatial = SampleSpec::from_grid(Grid::over_interval(-8.0, 8.0, 0.25), 65);
    return s;
}

// brute-force pair enumeration, the oracle for the O(n) ratio scans
double worst_ainc_ratio(const PhiFunction& phi, double p, const SampleSpec& spec) {
    const auto ts = spec.t_samples();
    double worst = 0.0;
    for (const Point& x : spec.spatial)
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                const double vs = phi(x, ts[i]) / std::pow(ts[i], p);
                const double vt = phi(x, ts[j]) / std::pow(ts[j], p);
                if (vt > 0.0) worst = std::max(worst, vs / vt);
            }
    return worst;
}

} // namespace

TEST_CASE("aInc: power law is exactly p-increasing") {
    const PhiFunction p2 = PhiFunction::power_law(2.0, kLine);
    SampleSpec spec = line_spec();

    const ConditionReport ok = check_ainc(p2, 2.0, 1.0, spec);
    CHECK(ok.passed);
    CHECK(ok.witness_constant == doctest::Approx(1.0));
    CHECK(!ok.counterexample.has_value());

    // t^2 / t^2.5 decays, so (aInc)_2.5 must fail with a counterexample
    const ConditionReport bad = check_ainc(p2, 2.5, 1.0, spec);
    CHECK(!bad.passed);
    REQUIRE(bad.counterexample.has_value());
    const auto& cx = *bad.counterexample;
    // re-evaluating the defining inequality at the counterexample fails
    // by more than the report tolerance
    const double lhs = p2(cx.x, cx.s) / std::pow(cx.s, 2.5);
    const double rhs = p2(cx.x, cx.t) / std::pow(cx.t, 2.5);
    CHECK(lhs > rhs * (1.0 + bad.tolerance));
}

TEST_CASE("aInc: double phase ratio matches the brute-force oracle") {
    const PhiFunction dp = PhiFunction::double_phase(
        2.0, 4.0, SpatialFunction::affine(0.0, 1.0), Box::interval(0.0, 1.0));
    SampleSpec spec;
    spec.t_count = 40; // keep the O(n^2) oracle cheap
    spec.spatial = SampleSpec::from_grid(Grid::over_interval(0.0, 1.0, 0.125), 9);

    const ConditionReport r = check_ainc(dp, 2.0, 1.0, spec);
    CHECK(r.passed); // phi(x,t)/t^2 = 1 + a(x) t^2 is nondecreasing
    CHECK(r.witness_constant ==
          doctest::Approx(std::max(1.0, worst_ainc_ratio(dp, 2.0, spec))));
}

TEST_CASE("aDec: power law and double phase") {
    SampleSpec spec = line_spec();
    const PhiFunction p2 = PhiFunction::power_law(2.0, kLine);
    CHECK(check_adec(p2, 2.0, 1.0, spec).passed);
    CHECK(check_adec(p2, 2.0, 1.0, spec).witness_constant == doctest::Approx(1.0));

    const PhiFunction p3 = PhiFunction::power_law(3.0, kLine);
    const ConditionReport bad = check_adec(p3, 2.0, 1.0, spec);
    CHECK(!bad.passed); // t^3/t^2 grows
    REQUIRE(bad.counterexample.has_value());

    const PhiFunction dp =
        PhiFunction::double_phase(2.0, 4.0, SpatialFunction::constant(1.0), kLine);
    const ConditionReport r = check_adec(dp, 4.0, 1.0, spec);
    CHECK(r.passed); // phi(x,t)/t^4 = t^-2 + a(x) is nonincreasing
}

TEST_CASE("A0: variable exponent passes with beta = 1") {
    const PhiFunction ve = PhiFunction::variable_exponent(
        SpatialFunction{"2+sin^2", [](Point p) { return 2.0 + std::pow(std::sin(3.0 * p.x), 2); }},
        kLine);
    const ConditionReport r = check_a0(ve, line_spec());
    CHECK(r.passed);
    CHECK(r.witness_constant == 1.0); // phi(x,1) = 1 exactly
}

TEST_CASE("A0: double phase with bounded weight passes") {
    const PhiFunction dp = PhiFunction::double_phase(
        2.0, 4.0,
        SpatialFunction{"|sin|", [](Point p) { return std::fabs(std::sin(p.x)); }}, kLine);
    const ConditionReport r = check_a0(dp, line_spec());
    CHECK(r.passed);
    CHECK(r.witness_constant > 0.5); // beta^2 + beta^4 <= 1 holds up to ~0.786
    CHECK(r.witness_constant < 1.0);
}

TEST_CASE("A0: exponentially degenerate weight fails on a wide box") {
    // t^2 / w(x), w = e^{|x|}: the required beta shrinks below any grid
    // value once |x| is large enough
    const Box wide = Box::interval(-40.0, 40.0);
    const PhiFunction degen = PhiFunction::custom(
        [](Point x, double t) { return t * t / std::exp(std::fabs(x.x)); }, 2.0, wide,
        "t2_over_exp");
    SampleSpec spec;
    spec.spatial = SampleSpec::from_grid(Grid::over_interval(-40.0, 40.0, 1.0), 81);
    const ConditionReport r = check_a0(degen, spec);
    CHECK(!r.passed);
    REQUIRE(r.counterexample.has_value());
    // the recorded point indeed breaks phi(x, 1/beta) >= 1 at beta = 1
    CHECK(degen(r.counterexample->x, 1.0) < 1.0);
}

TEST_CASE("A1 variable exponent: constant and Lipschitz pass") {
    SampleSpec spec;
    spec.spatial = SampleSpec::from_grid(Grid::over_interval(0.0, 1.0, 1.0 / 64.0), 65);

    const ConditionReport c =
        check_a1_variable_exponent(SpatialFunction::constant(2.0), spec);
    CHECK(c.passed);
    CHECK(c.witness_constant == 0.0);

    const ConditionReport lip = check_a1_variable_exponent(
        SpatialFunction::clamped_ramp(2.0, 1.0, 0.0, 1.0), spec);
    CHECK(lip.passed);
    CHECK(lip.witness_constant > 0.0);
    CHECK(lip.witness_constant < spec.cap);
}

TEST_CASE("A1 variable exponent: dyadic sign oscillation breaks the modulus") {
    // amplitude ~ 1/sqrt(log) with sign flips on dyadic shells: adjacent
    // shells give |1/p(x)-1/p(y)| ~ 1/sqrt(k) at gap 2^-k, so the product
    // with log(e + 2^k) grows like sqrt(k)
    const SpatialFunction osc{"dyadic_osc", [](Point p) {
        const double ax = std::fabs(p.x);
        if (ax == 0.0) return 2.0;
        const int k = static_cast<int>(std::floor(-std::log2(ax)));
        const double amp = 1.0 / std::sqrt(std::log(std::exp(1.0) + std::pow(2.0, k)));
        return 2.0 + (k % 2 == 0 ? amp : -amp);
    }};
    SampleSpec spec;
    for (int k = 30; k < 60; ++k)
        spec.extra_pairs.emplace_back(Point{std::pow(2.0, -k), 0.0},
                                      Point{std::pow(2.0, -k - 1), 0.0});
    const ConditionReport r = check_a1_variable_exponent(osc, spec);
    CHECK(!r.passed);
    CHECK(r.witness_constant > spec.cap);
    REQUIRE(r.counterexample.has_value());
}

TEST_CASE("A2 variable exponent: decay rates") {
    SampleSpec spec;
    spec.spatial = SampleSpec::log_radial(Box::interval(-1e6, 1e6), 200);

    CHECK(check_a2_variable_exponent(SpatialFunction::constant(2.0), 2.0, spec).passed);
    CHECK(check_a2_variable_exponent(SpatialFunction::constant(2.0), 2.0, spec)
              .witness_constant == 0.0);

    // exponential approach to p_inf beats the log decay requirement
    const SpatialFunction fast{"2+e^-|x|",
                               [](Point p) { return 2.0 + std::exp(-std::fabs(p.x)); }};
    const ConditionReport ok = check_a2_variable_exponent(fast, 2.0, spec);
    CHECK(ok.passed);

    // 1/log(log) decay is too slow once |x| is astronomically large
    SampleSpec far;
    far.spatial = SampleSpec::log_radial(Box::interval(-1e40, 1e40), 400);
    const SpatialFunction slow{"2+1/loglog", [](Point p) {
        return 2.0 + 1.0 / std::log(std::log(std::exp(std::exp(1.0)) + norm(p)));
    }};
    const ConditionReport bad = check_a2_variable_exponent(slow, 2.0, far);
    CHECK(!bad.passed);
    REQUIRE(bad.counterexample.has_value());
}

TEST_CASE("A1 double phase: Holder seminorm estimates") {
    SampleSpec spec;
    spec.spatial = SampleSpec::from_grid(Grid::over_interval(0.0, 1.0, 1.0 / 64.0), 65);

    // a == 0: the space collapses to L^p
    const ConditionReport zero =
        check_a1_double_phase(SpatialFunction::constant(0.0), 2.0, 2.5, 1, spec);
    CHECK(zero.passed);
    CHECK(zero.witness_constant == 0.0);
    CHECK(zero.exponent == doctest::Approx(0.25)); // (1/2)(2.5-2)

    // a(x) = x is Lipschitz, well inside C^{0,1/4} on a bounded interval
    const ConditionReport lin = check_a1_double_phase(
        SpatialFunction{"x", [](Point p) { return std::max(0.0, p.x); }}, 2.0, 2.5, 1, spec);
    CHECK(lin.passed);
    CHECK(lin.witness_constant <= 1.0 + 1e-12);

    // sqrt(x) is not C^{0,3/4} near 0: dyadic pairs approaching 0 blow up
    SampleSpec near;
    near.spatial = spec.spatial;
    for (int k = 10; k < 40; ++k)
        near.extra_pairs.emplace_back(Point{0.0, 0.0}, Point{std::pow(2.0, -k), 0.0});
    const ConditionReport bad = check_a1_double_phase(
        SpatialFunction{"sqrt", [](Point p) { return std::sqrt(std::max(0.0, p.x)); }}, 2.0,
        3.5, 1, near);
    CHECK(bad.exponent == doctest::Approx(0.75));
    CHECK(!bad.passed);

    // printed exponent above 1 is clamped and flagged
    const ConditionReport clamped =
        check_a1_double_phase(SpatialFunction::constant(0.0), 2.0, 4.5, 1, spec);
    CHECK(clamped.exponent == doctest::Approx(1.25));
    CHECK(clamped.note.find("clamped") != std::string::npos);
    CHECK(clamped.passed);
}

TEST_CASE("conjugate duality: (aDec)_p of phi gives (aInc)_p' of phi*") {
    SampleSpec spec;
    spec.t_min = 1e-3; // keep the numeric conjugate comfortably bracketed
    spec.t_max = 1e3;
    spec.t_count = 60;
    spec.spatial = SampleSpec::from_grid(Grid::over_interval(-2.0, 2.0, 0.25), 9);

    struct Case {
        PhiFunction phi;
        double p;
    };
    const Case cases[] = {
        {PhiFunction::power_law(2.0, kLine), 2.0},
        {PhiFunction::power_law(3.0, kLine), 3.0},
        {PhiFunction::double_phase(2.0, 4.0, SpatialFunction::constant(0.5), kLine), 4.0},
    };
    for (const Case& c : cases) {
        REQUIRE(check_adec(c.phi, c.p, 1.0 + 1e-9, spec).passed);
        const double p_conj = c.p / (c.p - 1.0);
        const PhiFunction conj = conjugate_phi(c.phi);
        const ConditionReport r = check_ainc(conj, p_conj, 1.0 + 1e-5, spec);
        CHECK(r.passed);
    }
}
