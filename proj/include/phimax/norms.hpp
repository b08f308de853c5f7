#pragma once

#include <vector>

#include "phimax/grid.hpp"
#include "phimax/phi_function.hpp"
#include "phimax/report.hpp"

namespace phimax {

// Modular value, Luxemburg norm, and the bisection certificate for one
// (phi, field) pair.
struct NormReport {
    double modular = 0.0;
    double norm = 0.0;
    long bisection_iters = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double tolerance = 0.0;
};

// rho_phi(f) = h^dim * sum phi(x_i, |f_i|).
double modular(const PhiFunction& phi, const GridField& field);

// Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} by bisection on the
// non-increasing map lambda -> rho(f/lambda). The returned norm is the
// upper bracket end, so rho(f/norm) <= 1 is certified; relative bracket
// width <= tol. Zero field -> 0.
NormReport luxemburg_norm(const PhiFunction& phi, const GridField& field, double tol = 1e-8);

// Norm of the field restricted to |x| > r (tail) or to |x| <= r.
NormReport luxemburg_norm_outside(const PhiFunction& phi, const GridField& field, double r,
                                  double tol = 1e-8);

// min{(rho/a)^{1/p}, 1} <= ||f|| <= max{(a rho)^{1/p}, 1}, for phi
// satisfying (aInc)_p with constant a.
VerificationReport check_norm_modular_comparison(const PhiFunction& phi, double p, double a,
                                                 const GridField& field, double tol = 1e-7);

// int |f||g| <= 2 ||f||_phi ||g||_{phi*}, with phi* evaluated numerically.
VerificationReport check_holder(const PhiFunction& phi, const GridField& f, const GridField& g,
                                const SearchSpec& search = {}, double tol = 1e-6);

// L^phi embeds into L^p on finite measure: the ratio ||f||_p / ||f||_phi
// must stay bounded over the family and move less than 20% between the
// coarse fields and their refined counterparts.
VerificationReport check_embedding(const PhiFunction& phi, double p,
                                   const std::vector<GridField>& fields,
                                   const std::vector<GridField>& refined_fields,
                                   double ratio_cap = 1e3);

// Smallest grid-aligned R with ||f||_{phi, outside B(0,R)} < eps; follows
// the modular budget: the tail integral of phi(x, |f|/(eps/2)) <= 1.
double tail_radius(const PhiFunction& phi, const GridField& field, double eps);

// Largest lambda such that every union of grid cells with measure < lambda
// has norm < eps. Greedy worst set: cells sorted by phi(x_i,|f_i|/(eps/2))
// descending, accumulated until the modular budget 1 is spent.
double smallness_threshold(const PhiFunction& phi, const GridField& field, double eps);

} // namespace phimax
