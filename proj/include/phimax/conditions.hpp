#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "phimax/phi_function.hpp"

namespace phimax {

struct Grid;

// Where a sampled condition check looks: logarithmic t-samples, spatial
// sample points, optional explicit point pairs, and the pass cap for
// estimated moduli/seminorms.
struct SampleSpec {
    double t_min = 1e-6;
    double t_max = 1e6;
    int t_count = 200;
    std::vector<Point> spatial;
    std::vector<std::pair<Point, Point>> extra_pairs;
    double cap = 2.0;       // pass iff the estimated constant stays below this
    double tolerance = 1e-9;

    std::vector<double> t_samples() const;

    // Spatial samples: grid nodes, strided down to at most max_count.
    static std::vector<Point> from_grid(const Grid& grid, int max_count = 256);
    // Log-spaced magnitudes along the first axis, for decay conditions.
    static std::vector<Point> log_radial(const Box& box, int count = 128);
    // Pairs for modulus estimation: all pairs of `points` plus dyadic
    // near-pairs (gap 2^-k) anchored at each of `anchors`.
    static std::vector<std::pair<Point, Point>> modulus_pairs(
        const std::vector<Point>& points, const std::vector<Point>& anchors,
        double gap_max, int dyadic_levels = 40);
};

enum class Condition { aInc, aDec, A0, A1, A2 };

const char* condition_name(Condition c);

struct Counterexample {
    Point x;
    double s = 0.0;
    double t = 0.0;
};

struct ConditionReport {
    Condition condition = Condition::A0;
    double exponent = 0.0; // p, q, or 0 when not applicable
    bool passed = false;
    double witness_constant = 0.0; // best a, beta, C, or seminorm found
    std::optional<Counterexample> counterexample;
    long samples_used = 0;
    double tolerance = 0.0;
    std::string note;
};

// (aInc)_p: phi(x,s)/s^p <= a phi(x,t)/t^p for all sampled 0 < s < t.
// witness_constant is the smallest a that passes every sample.
ConditionReport check_ainc(const PhiFunction& phi, double p, double a, const SampleSpec& spec);

// (aDec)_q: phi(x,t)/t^q <= a phi(x,s)/s^q for all sampled 0 < s < t.
ConditionReport check_adec(const PhiFunction& phi, double q, double a, const SampleSpec& spec);

// (A0) via the two-sided criterion phi(x,beta) <= 1 <= phi(x,1/beta):
// scans beta over a log grid in (0,1]; witness is the largest passing beta.
ConditionReport check_a0(const PhiFunction& phi, const SampleSpec& spec);

// One-sided variant used by the decay-bound constants: largest beta in
// (0,1] with phi(x,beta) <= 1 at all samples.
ConditionReport check_a0_upper(const PhiFunction& phi, const SampleSpec& spec);

// (A1) for t^{p(x)}: log-Holder modulus of 1/p over sampled pairs,
// |1/p(x)-1/p(y)| <= C / log(e + 1/|x-y|). witness = smallest such C.
ConditionReport check_a1_variable_exponent(const SpatialFunction& p_field,
                                           const SampleSpec& spec);

// (A2) for t^{p(x)}: log-Holder decay |1/p(x)-1/p_inf| <= C / log(e + |x|).
ConditionReport check_a2_variable_exponent(const SpatialFunction& p_field, double p_inf,
                                           const SampleSpec& spec);

// (A1) for t^p + a(x) t^q: Holder seminorm of a with exponent
// (n/p)(q-p), clamped to (0,1] with a note when the printed exponent
// exceeds 1. witness = estimated seminorm over sampled pairs.
ConditionReport check_a1_double_phase(const SpatialFunction& a_field, double p, double q,
                                      int dim, const SampleSpec& spec);

} // namespace phimax
