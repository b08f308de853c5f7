#include "phimax/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/util.hpp"

namespace phimax {

namespace {

void require_in_domain(const PhiFunction& phi, const GridField& field) {
    if (!phi.domain().contains_box(field.grid.box()))
        throw domain_error("field grid is not contained in the integrand's domain box");
}

double modular_of_scaled(const PhiFunction& phi, const GridField& field, double inv_lambda) {
    const double vol = field.grid.cell_volume();
    std::vector<double> terms(field.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double t = std::fabs(field.values[i]) * inv_lambda;
        terms[i] = t == 0.0 ? 0.0 : vol * phi(field.grid.node(i), t);
    }
    return pairwise_sum(terms);
}

} // namespace

double modular(const PhiFunction& phi, const GridField& field) {
    require_in_domain(phi, field);
    return modular_of_scaled(phi, field, 1.0);
}

NormReport luxemburg_norm(const PhiFunction& phi, const GridField& field, double tol) {
    if (tol <= 0.0) throw argument_error("luxemburg_norm: tol must be positive");
    require_in_domain(phi, field);

    NormReport report;
    report.tolerance = tol;
    report.modular = modular_of_scaled(phi, field, 1.0);
    if (field.is_zero()) return report; // norm 0, modular 0

    // upper end: cheap (aInc)_1-style bound, then doubled until rho <= 1
    const double p_guess = std::max(1.0, phi.growth_lower());
    const double meas = field.grid.box().measure();
    double hi = std::max(1.0, field.max_abs() * std::pow(std::max(meas, 1e-300), 1.0 / p_guess));
    int growth = 0;
    while (modular_of_scaled(phi, field, 1.0 / hi) > 1.0) {
        hi *= 2.0;
        if (++growth > 200)
            throw numerical_error("luxemburg_norm: could not bracket the unit modular level");
    }

    double lo = 0.0;
    long iters = 0;
    while ((hi - lo) > tol * hi && iters < 400) {
        const double mid = 0.5 * (lo + hi);
        if (modular_of_scaled(phi, field, 1.0 / mid) > 1.0)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }

    report.norm = hi; // certified: rho(f/hi) <= 1 <= rho(f/lo)
    report.bisection_iters = iters;
    report.bracket_lo = lo;
    report.bracket_hi = hi;
    return report;
}

NormReport luxemburg_norm_outside(const PhiFunction& phi, const GridField& field, double r,
                                  double tol) {
    return luxemburg_norm(phi, keep_outside(field, r), tol);
}

VerificationReport check_norm_modular_comparison(const PhiFunction& phi, double p, double a,
                                                 const GridField& field, double tol) {
    VerificationReport r;
    r.name = "norm_modular_comparison";
    r.tolerance = tol;

    const NormReport nr = luxemburg_norm(phi, field);
    const double rho = nr.modular;
    const double lower = std::min(std::pow(rho / a, 1.0 / p), 1.0);
    const double upper = std::max(std::pow(a * rho, 1.0 / p), 1.0);

    const double slack_lo = nr.norm - lower;
    const double slack_hi = upper - nr.norm;
    r.value = std::min(slack_lo, slack_hi);
    r.iters = nr.bisection_iters;
    r.passed = slack_lo >= -tol * std::max(1.0, nr.norm) && slack_hi >= -tol * std::max(1.0, nr.norm);
    r.details = {{"modular", rho}, {"norm", nr.norm}, {"lower", lower}, {"upper", upper},
                 {"p", p}, {"a", a}};
    return r;
}

VerificationReport check_holder(const PhiFunction& phi, const GridField& f, const GridField& g,
                                const SearchSpec& search, double tol) {
    if (!f.grid.same_layout(g.grid)) throw argument_error("check_holder: field grids differ");
    VerificationReport r;
    r.name = "holder_inequality";
    r.tolerance = tol;

    const double vol = f.grid.cell_volume();
    std::vector<double> terms(f.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = vol * std::fabs(f.values[i]) * std::fabs(g.values[i]);
    const double lhs = pairwise_sum(terms);

    const PhiFunction conj = conjugate_phi(phi, search);
    const NormReport nf = luxemburg_norm(phi, f);
    const NormReport ng = luxemburg_norm(conj, g);
    const double rhs = 2.0 * nf.norm * ng.norm;

    r.value = rhs - lhs;
    r.iters = nf.bisection_iters + ng.bisection_iters;
    r.passed = lhs <= rhs * (1.0 + tol) + tol;
    r.details = {{"lhs", lhs}, {"rhs", rhs}, {"norm_f", nf.norm}, {"norm_g_conjugate", ng.norm}};
    return r;
}

VerificationReport check_embedding(const PhiFunction& phi, double p,
                                   const std::vector<GridField>& fields,
                                   const std::vector<GridField>& refined_fields,
                                   double ratio_cap) {
    VerificationReport r;
    r.name = "embedding_ratio";
    r.tolerance = 0.20; // refinement stability window

    const auto max_ratio = [&](const std::vector<GridField>& fs) {
        double worst = 0.0;
        for (const GridField& f : fs) {
            if (f.is_zero()) continue; // ratio undefined; skipped
            const PhiFunction lp = PhiFunction::power_law(p, phi.domain());
            const double np = luxemburg_norm(lp, f).norm;
            const double nphi = luxemburg_norm(phi, f).norm;
            worst = std::max(worst, np / nphi);
        }
        return worst;
    };

    const double coarse = max_ratio(fields);
    const double fine = refined_fields.empty() ? coarse : max_ratio(refined_fields);
    const double drift = coarse > 0.0 ? std::fabs(fine - coarse) / coarse : 0.0;

    r.value = std::max(coarse, fine);
    r.iters = static_cast<long>(fields.size() + refined_fields.size());
    r.passed = std::isfinite(coarse) && std::isfinite(fine) && r.value <= ratio_cap &&
               drift <= r.tolerance;
    r.details = {{"ratio_coarse", coarse}, {"ratio_fine", fine}, {"drift", drift},
                 {"cap", ratio_cap}, {"p", p}};
    return r;
}

double tail_radius(const PhiFunction& phi, const GridField& field, double eps) {
    if (eps <= 0.0) throw argument_error("tail_radius: eps must be positive");
    require_in_domain(phi, field);
    if (field.is_zero()) return 0.0;

    // proof-shaped search: smallest grid-aligned R whose tail modular at
    // scale eps/2 fits in the unit budget
    const Grid& g = field.grid;
    const double vol = g.cell_volume();
    std::vector<std::pair<double, double>> by_dist(field.values.size()); // (|x_i|, contribution)
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double t = std::fabs(field.values[i]) / (eps / 2.0);
        by_dist[i] = {norm(g.node(i)), t == 0.0 ? 0.0 : vol * phi(g.node(i), t)};
    }
    std::sort(by_dist.begin(), by_dist.end());

    // walk inward: tail sum over |x| > R
    double tail = 0.0;
    double needed = 0.0; // smallest distance that must stay inside
    for (std::size_t k = by_dist.size(); k-- > 0;) {
        tail += by_dist[k].second;
        if (tail > 1.0) {
            needed = by_dist[k].first;
            break;
        }
    }
    // round up to the grid step
    const double R = std::ceil(needed / g.h - 1e-12) * g.h;
    return std::max(0.0, R);
}

double smallness_threshold(const PhiFunction& phi, const GridField& field, double eps) {
    if (eps <= 0.0) throw argument_error("smallness_threshold: eps must be positive");
    require_in_domain(phi, field);

    const Grid& g = field.grid;
    const double vol = g.cell_volume();
    const double box_measure = g.size() * vol;
    if (field.is_zero()) return box_measure;

    std::vector<double> contrib(field.values.size());
    for (std::size_t i = 0; i < contrib.size(); ++i) {
        const double t = std::fabs(field.values[i]) / (eps / 2.0);
        contrib[i] = t == 0.0 ? 0.0 : vol * phi(g.node(i), t);
    }
    std::sort(contrib.begin(), contrib.end(), std::greater<>());

    // greedy worst set: cells with largest contributions first
    double sum = 0.0;
    std::size_t k = 0;
    while (k < contrib.size() && sum + contrib[k] <= 1.0) sum += contrib[k++];
    const double lambda = static_cast<double>(k + 1) * vol;
    return std::min(lambda, box_measure);
}

} // namespace phimax
