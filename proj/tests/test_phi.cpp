#include <doctest.h>

#include <cmath>

#include "phimax/errors.hpp"
#include "phimax/phi_function.hpp"
#include "phimax/util.hpp"

#include "oracles.hpp"

using namespace phimax;

namespace {
const Box kLine = Box::interval(-8.0, 8.0);
}

TEST_CASE("eval: closed forms per family") {
    const PhiFunction plaw = PhiFunction::power_law(2.0, kLine);
    CHECK(plaw({0.0, 0.0}, 3.0) == doctest::Approx(9.0));
    CHECK(plaw({1.0, 0.0}, 0.0) == 0.0); // exact zero at t = 0

    const PhiFunction dp = PhiFunction::double_phase(
        2.0, 4.0, SpatialFunction::affine(0.0, 1.0), Box::interval(0.0, 2.0));
    CHECK(dp({1.0, 0.0}, 2.0) == doctest::Approx(20.0)); // 2^2 + 1*2^4

    const PhiFunction ve = PhiFunction::variable_exponent(
        SpatialFunction{"2+sin^2", [](Point p) { return 2.0 + std::pow(std::sin(p.x), 2); }},
        kLine);
    CHECK(ve({0.0, 0.0}, 5.0) == doctest::Approx(25.0)); // p(0) = 2

    const PhiFunction au = PhiFunction::autonomous(
        [](double t) { return t * t * std::log(std::exp(1.0) + t); }, 2.0, kLine, "t2log");
    CHECK(au({0.0, 0.0}, 0.0) == 0.0);
    CHECK(au({0.0, 0.0}, 1.0) == doctest::Approx(std::log(std::exp(1.0) + 1.0)));
}

TEST_CASE("eval: domain and argument errors") {
    const PhiFunction plaw = PhiFunction::power_law(2.0, Box::interval(0.0, 1.0));
    CHECK_THROWS_AS(plaw({2.0, 0.0}, 1.0), phimax::domain_error);
    CHECK_THROWS_AS(plaw({0.5, 0.0}, -1.0), argument_error);
    CHECK_THROWS_AS(PhiFunction::power_law(0.5, kLine), argument_error);
    CHECK_THROWS_AS(
        PhiFunction::double_phase(2.0, 2.0, SpatialFunction::constant(1.0), kLine),
        argument_error);
}

TEST_CASE("left_inverse: closed forms and round trip") {
    const PhiFunction plaw = PhiFunction::power_law(2.0, kLine);
    CHECK(left_inverse(plaw, {0.0, 0.0}, 9.0) == doctest::Approx(3.0));
    CHECK(left_inverse(plaw, {0.0, 0.0}, 0.0) == 0.0);

    // inverse of the double-phase integrand, verified by forward evaluation
    const PhiFunction dp =
        PhiFunction::double_phase(2.0, 4.0, SpatialFunction::constant(1.0), kLine);
    const double t = left_inverse(dp, {0.0, 0.0}, 20.0);
    CHECK(t == doctest::Approx(2.0));
    CHECK(dp({0.0, 0.0}, t) == doctest::Approx(20.0));

    // round trip at sampled (x, t) for every family
    const PhiFunction ve = PhiFunction::variable_exponent(
        SpatialFunction{"2+e^-x", [](Point p) { return 2.0 + std::exp(-std::fabs(p.x)); }},
        kLine);
    SplitMix64 rng(11);
    for (const PhiFunction* phi : {&plaw, &dp, &ve}) {
        for (int trial = 0; trial < 40; ++trial) {
            const Point x{rng.uniform(-8.0, 8.0), 0.0};
            const double tt = std::exp(rng.uniform(std::log(1e-4), std::log(1e4)));
            const double tau = (*phi)(x, tt);
            const double back = left_inverse(*phi, x, tau);
            CHECK((*phi)(x, back) == doctest::Approx(tau).epsilon(1e-8));
        }
    }
}

TEST_CASE("left_inverse: unreachable tau reports a numerical error") {
    // integrand that plateaus below 1 within double range on the sampled x
    const PhiFunction slow = PhiFunction::custom(
        [](Point, double t) { return t / (1.0 + t); }, 1.0, kLine, "saturating");
    CHECK_THROWS_AS(left_inverse(slow, {0.0, 0.0}, 2.0), numerical_error);
}

TEST_CASE("conjugate: closed forms") {
    const PhiFunction p2 = PhiFunction::power_law(2.0, kLine);
    // sup of 2s - s^2 is at s = 1
    CHECK(conjugate(p2, {0.0, 0.0}, 2.0) == doctest::Approx(1.0));
    CHECK(conjugate(p2, {0.0, 0.0}, 0.0) == 0.0);

    // p = 3, t = 3: stationary point s = 1, value 2; dense grid oracle agrees
    const PhiFunction p3 = PhiFunction::power_law(3.0, kLine);
    const double got = conjugate(p3, {0.0, 0.0}, 3.0);
    CHECK(got == doctest::Approx(2.0));
    const double dense = oracle::dense_sup([](double s) { return s * s * s; }, 3.0, 4.0);
    CHECK(got == doctest::Approx(dense).epsilon(1e-6));

    // closed form phi*(t) = (p-1) p^{-p'} t^{p'} across a t range
    for (double p : {1.5, 2.0, 3.0}) {
        const PhiFunction plaw = PhiFunction::power_law(p, kLine);
        const double pc = p / (p - 1.0);
        for (double t : {0.25, 1.0, 2.0, 7.5}) {
            const double exact = (p - 1.0) * std::pow(p, -pc) * std::pow(t, pc);
            CHECK(conjugate(plaw, {0.0, 0.0}, t) == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("conjugate: unbounded supremum is reported") {
    const PhiFunction p1 = PhiFunction::power_law(1.0, kLine);
    CHECK(conjugate(p1, {0.0, 0.0}, 0.5) == 0.0); // t <= 1: sup is 0
    CHECK_THROWS_AS(conjugate(p1, {0.0, 0.0}, 2.0), unbounded_conjugate_error);
}

TEST_CASE("Young's inequality on samples") {
    const PhiFunction dp = PhiFunction::double_phase(
        2.0, 4.0, SpatialFunction::gaussian_bump(0.1, 1.0, {0.0, 0.0}, 2.0), kLine);
    const PhiFunction conj = conjugate_phi(dp);
    SplitMix64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        const Point x{rng.uniform(-8.0, 8.0), 0.0};
        const double s = std::exp(rng.uniform(std::log(1e-3), std::log(1e2)));
        const double t = std::exp(rng.uniform(std::log(1e-3), std::log(1e2)));
        CHECK(t * s <= dp(x, s) + conj(x, t) + 1e-7 * (1.0 + t * s));
    }
}

TEST_CASE("conjugate is nonnegative and vanishes at zero") {
    const PhiFunction ve = PhiFunction::variable_exponent(
        SpatialFunction{"2+bump", [](Point p) { return 2.0 + std::exp(-p.x * p.x); }}, kLine);
    const PhiFunction conj = conjugate_phi(ve);
    CHECK(conj({0.3, 0.0}, 0.0) == 0.0);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 40; ++trial)
        CHECK(conj({rng.uniform(-8.0, 8.0), 0.0}, std::exp(rng.uniform(-5.0, 5.0))) >= 0.0);
}
