#pragma once

#include <cstdint>
#include <vector>

#include "phimax/maximal.hpp"

namespace phimax {

// A field with its discrete weak gradient: central differences at
// interior nodes, one-sided at box edges.
struct SobolevField {
    GridField u;
    std::vector<GridField> grad; // one component per axis
};

SobolevField weak_gradient(const GridField& u);

// ||u||_{1,phi} = ||u||_phi + sum_i ||D_i u||_phi.
double sobolev_norm(const PhiFunction& phi, const SobolevField& sf, double tol = 1e-8);

// Nodes within 2h of an edge where |f| jumps by more than
// threshold_frac * max|f|; pointwise derivative checks skip these.
std::vector<std::uint8_t> jump_mask(const GridField& f, double threshold_frac = 0.25);

// Discretization allowance for pointwise derivative comparisons.
double default_slack(const SobolevField& f);

struct GradientBoundOptions {
    double r_max = 8.0;
    double slack = -1.0;          // < 0: use default_slack(f)
    double jump_threshold = 0.25;
    double norm_tol = 1e-8;
    int threads = 1;
};

// |D_i Mf(x)| <= M(D_i f)(x) + slack at every unmasked node. Reports the
// worst violation against slack 0 in `value` and the Sobolev operator
// ratio ||Mf||_{1,phi} / ||f||_{1,phi} in the details.
VerificationReport check_gradient_bound(const PhiFunction& phi, const SobolevField& f,
                                        const GradientBoundOptions& opt = {});

struct DerivativeFormulaOptions {
    double r_max = 8.0;
    double slack = -1.0;        // < 0: use default_slack(f)
    double radius_tol_rel = 1e-9;
    double strict_gap_rel = 1e-3;  // argmax must beat distant radii by this * Mf(x)
    double cluster_window = 0.25;  // "distant" means farther than this from the cluster
    double branch_window_h = 4.0;  // stencil argmax radii may drift this many h
    double jump_threshold = 0.25;
};

// At unmasked nodes whose radius set is a single cluster with a strict
// argmax: D_i Mf(x) matches the ball average of D_i|f| over the optimal
// radius (or D_i|f|(x) itself when the 0-marker is optimal) within slack.
VerificationReport check_derivative_formula(const PhiFunction& phi, const SobolevField& f,
                                            const DerivativeFormulaOptions& opt = {});

// Measure (h^dim * node count) of {x in B(0,R) : some radius of f_m at x
// is farther than lambda from every radius of f at x}.
double radius_stability(const GridField& f, const GridField& f_m, double R, double lambda,
                        double r_max, double tol_rel = 1e-9);

struct UniformBoundOptions {
    double r_max = 8.0;
    double tol_rel = 1e-9;
    double window = -1.0; // < 0: max(2h, 0.05 * R0(f))
};

// One radius bound must cover every member of a convergent sequence: all
// bounds finite, and the last quarter of the sequence within a window of
// the limit field's bound.
VerificationReport uniform_radius_bound_check(const GridField& f,
                                              const std::vector<GridField>& sequence, double R,
                                              const UniformBoundOptions& opt = {});

// One perturbation step per m; all members are grid-representable.
struct PerturbationFamily {
    enum class Kind { Scale, Bump, MollifiedNoise };

    Kind kind = Kind::Scale;
    std::string name = "scale";
    double amplitude = 1.0; // amplitude at m = 1 is amplitude * decay
    double decay = 0.8;     // per-step geometric factor
    Point center;           // bump location
    double width = 1.0;     // bump width
    std::uint64_t seed = 1; // noise stream

    static PerturbationFamily scale_family(double amplitude, double decay);
    static PerturbationFamily bump_family(double amplitude, double decay, Point center,
                                          double width);
    static PerturbationFamily noise_family(double amplitude, double decay, std::uint64_t seed);

    GridField perturbed(const GridField& f, int m) const;
};

struct ContinuityTrace {
    int m = 0;
    double input_gap = 0.0;          // ||f_m - f||_{1,phi}
    double output_gap = 0.0;         // ||Mf_m - Mf||_{1,phi}
    double input_u_gap = 0.0;        // component norms
    double input_grad_gap = 0.0;
    double output_u_gap = 0.0;
    double output_grad_gap = 0.0;
    double stability_measure = 0.0;  // radius_stability at this m
    double oscillation_diag = 0.0;   // sup_x osc of r -> avg_{B(x,r)} D_i f over |r1-r2| <= delta0
};

struct ContinuityOptions {
    int m_steps = 32;
    double r_max = 6.0;
    double R = 2.0;      // stability ball
    double lambda = 0.25;
    double delta0 = 0.25; // oscillation window
    double norm_tol = 1e-8;
    double radius_tol_rel = 1e-9;
    int x_sample_stride = 8; // node stride for the oscillation diagnostic
    int threads = 1;
};

// One trace per m. Throws precondition_error with diagnostics when the
// input gaps fail to decrease.
std::vector<ContinuityTrace> continuity_experiment(const PhiFunction& phi, const SobolevField& f,
                                                   const PerturbationFamily& family,
                                                   const ContinuityOptions& opt = {});

std::string continuity_csv(const std::vector<ContinuityTrace>& traces);

} // namespace phimax
