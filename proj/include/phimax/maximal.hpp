#pragma once

#include <vector>

#include "phimax/conditions.hpp"
#include "phimax/grid.hpp"
#include "phimax/norms.hpp"
#include "phimax/report.hpp"

namespace phimax {

// Near-optimal averaging radii at one node: every r listed reproduces the
// maximal value within tol; 0.0 is the r -> 0 marker (value |f(x)|).
struct RadiusSet {
    Point x;
    std::vector<double> radii; // sorted, possibly starting with the 0-marker
    double tol = 0.0;
    double max_value = 0.0;   // Mf(x)

    double max_radius() const { return radii.empty() ? 0.0 : radii.back(); }
    bool contains_zero_marker() const { return !radii.empty() && radii.front() == 0.0; }
};

// Precomputed lattice offsets sorted by distance from the center node.
// Averages over all candidate radii at a node cost one pass over the
// largest ball: each radius extends the previous partial sum by one
// shell, in a fixed order, so results match the per-radius recomputation
// bit for bit.
class BallScanner {
public:
    BallScanner(const Grid& grid, double r_max);

    const Grid& grid() const { return grid_; }
    // candidate_radii(grid, r_max): 0-marker first
    const std::vector<double>& radii() const { return radii_; }

    // out[k] = average of (|f| if absolute) over B(node, radii()[k]);
    // out[0] is the r -> 0 value at the node itself.
    void profile(const GridField& f, std::size_t node, bool absolute,
                 std::vector<double>& out) const;

    // max over the profile without materializing it: Mf at one node.
    double max_average(const GridField& f, std::size_t node) const;

    // same value computed the slow way: every radius re-accumulated from
    // scratch, in the same offset order as the incremental pass.
    double max_average_recomputed(const GridField& f, std::size_t node) const;

private:
    Grid grid_;
    std::vector<double> radii_;
    std::vector<int> off_i_, off_j_;
    std::vector<std::size_t> cut_; // cut_[k]: offsets within radius index k
};

// Discrete Hardy-Littlewood maximal function: at each node the maximum of
// ball averages of |f| over candidate_radii(grid, r_max), including the
// r -> 0 value |f(x)|. Shares the input grid.
GridField maximal_function(const GridField& field, double r_max, int threads = 1);

// Reference path: recomputes every radius from scratch in the same shell
// order. Kept for the bit-identity test against the incremental path.
GridField maximal_function_naive(const GridField& field, double r_max);

// Averages of |f| over B(x, r) for every candidate radius at one node,
// index-aligned with candidate_radii(grid, r_max) (entry 0 = |f(x)|).
std::vector<double> average_profile(const GridField& field, std::size_t node, double r_max);

// Signed variant (no absolute value), for derivative averages.
std::vector<double> signed_average_profile(const GridField& field, std::size_t node,
                                           double r_max);

RadiusSet radius_set(const GridField& field, std::size_t node, double r_max, double tol_rel = 1e-9);
RadiusSet radius_set(const BallScanner& scan, const GridField& field, std::size_t node,
                     double tol_rel = 1e-9);

// Constants for the decay bound: p with (aDec)_p for phi, the (aInc)_{p'}
// witness a of phi*, and the largest beta in (0,1] with phi*(x,beta) <= 1.
struct DecayConstants {
    double p = 2.0;
    double p_conj = 2.0; // p' = p/(p-1)
    double a = 1.0;
    double beta = 1.0;
};

DecayConstants decay_constants(const PhiFunction& phi, const SampleSpec& spec);

// Average decay: for |B(x,r)| >= 1 (continuum measure),
//   avg_{B(x,r)} |f| <= (2 a^{1/p'} / beta) ||f||_phi |B(x,r)|^{1/p'-1}.
// Balls with |B| < 1 are reported as skipped, not failed.
VerificationReport average_decay_bound(const PhiFunction& phi, const GridField& field, double p,
                                       double a, double beta, const Ball& ball,
                                       double tol = 1e-9);

// Largest radius-set radius over nodes in B(0,R); no integrand needed.
double max_optimal_radius(const GridField& field, double R, double r_max, double tol_rel = 1e-9);

// Same bound, but also derives the a-priori radius beyond which the decay
// bound's right side falls below (1/|B(0,2Rhat)|) int_{B(0,Rhat)} |f|, and
// asserts the measured bound does not exceed it. Throws
// undefined_bound_error for the zero field.
double radius_upper_bound(const PhiFunction& phi, const GridField& field, double R, double r_max,
                          double tol_rel = 1e-9, VerificationReport* report = nullptr);

// Localization: with frak_R > R0 + R, zeroing the field outside
// B(0,frak_R) changes neither the maximal values nor the radius sets on
// B(0,R). Equality of maximal values is exact.
VerificationReport localization_check(const GridField& field, double R, double frak_R,
                                      double r_max, double tol_rel = 1e-9);

} // namespace phimax
