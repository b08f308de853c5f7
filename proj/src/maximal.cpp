#include "phimax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/util.hpp"

namespace phimax {

BallScanner::BallScanner(const Grid& grid, double r_max) : grid_(grid) {
    radii_ = candidate_radii(grid, r_max);
    const int K = static_cast<int>(radii_.size()) - 1;
    const long long K2 = static_cast<long long>(K) * K;
    const int m = K / 2 + 1;

    // offsets with 4 (di^2 + dj^2) <= K^2, sorted by distance then (dj, di);
    // integer comparisons make ball membership exact
    struct Entry {
        long long d2x4;
        int di, dj;
    };
    std::vector<Entry> entries;
    const int j_range = grid.dim == 2 ? m : 0;
    for (int dj = -j_range; dj <= j_range; ++dj)
        for (int di = -m; di <= m; ++di) {
            const long long d2x4 = 4 * (static_cast<long long>(di) * di +
                                        static_cast<long long>(dj) * dj);
            if (d2x4 <= K2) entries.push_back({d2x4, di, dj});
        }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.d2x4 != b.d2x4) return a.d2x4 < b.d2x4;
        if (a.dj != b.dj) return a.dj < b.dj;
        return a.di < b.di;
    });

    off_i_.resize(entries.size());
    off_j_.resize(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
        off_i_[e] = entries[e].di;
        off_j_[e] = entries[e].dj;
    }
    cut_.assign(static_cast<std::size_t>(K) + 1, 0);
    std::size_t ptr = 0;
    for (int k = 1; k <= K; ++k) {
        const long long k2 = static_cast<long long>(k) * k;
        while (ptr < entries.size() && entries[ptr].d2x4 <= k2) ++ptr;
        cut_[static_cast<std::size_t>(k)] = ptr;
    }
    cut_[0] = 1; // the center offset alone
}

void BallScanner::profile(const GridField& f, std::size_t node, bool absolute,
                          std::vector<double>& out) const {
    const Grid& g = f.grid;
    const int nx = g.extents[0];
    const int ci = static_cast<int>(node % nx);
    const int cj = static_cast<int>(node / nx);
    const std::size_t K = radii_.size() - 1;
    out.resize(K + 1);

    const double center = f.values[node];
    out[0] = absolute ? std::fabs(center) : center;

    double sum = 0.0;
    std::size_t ptr = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        for (; ptr < cut_[k]; ++ptr) {
            const int i = ci + off_i_[ptr];
            const int j = cj + off_j_[ptr];
            if (g.in_bounds(i, j)) {
                const double v = f.values[g.index(i, j)];
                sum += absolute ? std::fabs(v) : v;
            }
        }
        out[k] = sum / static_cast<double>(cut_[k]);
    }
}

double BallScanner::max_average(const GridField& f, std::size_t node) const {
    const Grid& g = f.grid;
    const int nx = g.extents[0];
    const int ci = static_cast<int>(node % nx);
    const int cj = static_cast<int>(node / nx);
    const std::size_t K = radii_.size() - 1;

    double best = std::fabs(f.values[node]);
    double sum = 0.0;
    std::size_t ptr = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        for (; ptr < cut_[k]; ++ptr) {
            const int i = ci + off_i_[ptr];
            const int j = cj + off_j_[ptr];
            if (g.in_bounds(i, j)) sum += std::fabs(f.values[g.index(i, j)]);
        }
        best = std::max(best, sum / static_cast<double>(cut_[k]));
    }
    return best;
}

GridField maximal_function(const GridField& field, double r_max, int threads) {
    const BallScanner scan(field.grid, r_max);
    GridField out{field.grid, std::vector<double>(field.values.size())};
    parallel_for(field.values.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) out.values[n] = scan.max_average(field, n);
    });
    return out;
}

double BallScanner::max_average_recomputed(const GridField& f, std::size_t node) const {
    const Grid& g = f.grid;
    const int nx = g.extents[0];
    const int ci = static_cast<int>(node % nx);
    const int cj = static_cast<int>(node / nx);
    const std::size_t K = radii_.size() - 1;

    double best = std::fabs(f.values[node]);
    for (std::size_t k = 1; k <= K; ++k) {
        double sum = 0.0;
        for (std::size_t ptr = 0; ptr < cut_[k]; ++ptr) {
            const int i = ci + off_i_[ptr];
            const int j = cj + off_j_[ptr];
            if (g.in_bounds(i, j)) sum += std::fabs(f.values[g.index(i, j)]);
        }
        best = std::max(best, sum / static_cast<double>(cut_[k]));
    }
    return best;
}

GridField maximal_function_naive(const GridField& field, double r_max) {
    const BallScanner scan(field.grid, r_max);
    GridField out{field.grid, std::vector<double>(field.values.size())};
    for (std::size_t n = 0; n < field.values.size(); ++n)
        out.values[n] = scan.max_average_recomputed(field, n);
    return out;
}

std::vector<double> average_profile(const GridField& field, std::size_t node, double r_max) {
    const BallScanner scan(field.grid, r_max);
    std::vector<double> out;
    scan.profile(field, node, true, out);
    return out;
}

std::vector<double> signed_average_profile(const GridField& field, std::size_t node,
                                           double r_max) {
    const BallScanner scan(field.grid, r_max);
    std::vector<double> out;
    scan.profile(field, node, false, out);
    return out;
}

RadiusSet radius_set(const BallScanner& scan, const GridField& field, std::size_t node,
                     double tol_rel) {
    std::vector<double> prof;
    scan.profile(field, node, true, prof);
    const double max_value = *std::max_element(prof.begin(), prof.end());
    const double tol = tol_rel * max_value;

    RadiusSet set;
    set.x = field.grid.node(node);
    set.tol = tol;
    set.max_value = max_value;
    for (std::size_t k = 0; k < prof.size(); ++k)
        if (prof[k] >= max_value - tol) set.radii.push_back(scan.radii()[k]);
    return set;
}

RadiusSet radius_set(const GridField& field, std::size_t node, double r_max, double tol_rel) {
    const BallScanner scan(field.grid, r_max);
    return radius_set(scan, field, node, tol_rel);
}

DecayConstants decay_constants(const PhiFunction& phi, const SampleSpec& spec) {
    DecayConstants c;
    c.p = phi.growth_upper();
    if (c.p <= 1.0 + 1e-12)
        throw argument_error("decay_constants: need an (aDec)_p exponent above 1");
    c.p_conj = c.p / (c.p - 1.0);

    const PhiFunction conj = conjugate_phi(phi);
    const ConditionReport ainc = check_ainc(conj, c.p_conj, 1.0 + 1e-6, spec);
    c.a = ainc.witness_constant;
    const ConditionReport a0 = check_a0_upper(conj, spec);
    if (!a0.passed)
        throw numerical_error("decay_constants: no beta in (0,1] with phi*(x,beta) <= 1 on samples");
    c.beta = a0.witness_constant;
    return c;
}

VerificationReport average_decay_bound(const PhiFunction& phi, const GridField& field, double p,
                                       double a, double beta, const Ball& ball, double tol) {
    if (p <= 1.0) throw argument_error("average_decay_bound: p must exceed 1");
    if (a < 1.0 || beta <= 0.0 || beta > 1.0)
        throw argument_error("average_decay_bound: need a >= 1 and beta in (0,1]");

    VerificationReport r;
    r.name = "average_decay_bound";
    r.tolerance = tol;

    const double measure = ball_measure(ball.radius, field.grid.dim);
    if (measure < 1.0) {
        r.skipped = true;
        r.note = "|B| < 1: bound not applicable at this radius";
        return r;
    }

    const double p_conj = p / (p - 1.0);
    const double lhs = ball_average(abs_field(field), ball);
    const double norm_f = luxemburg_norm(phi, field).norm;
    const double rhs =
        (2.0 * std::pow(a, 1.0 / p_conj) / beta) * norm_f * std::pow(measure, 1.0 / p_conj - 1.0);

    r.value = rhs - lhs;
    r.passed = lhs <= rhs * (1.0 + tol) + tol;
    r.details = {{"lhs", lhs},   {"rhs", rhs},   {"ball_measure", measure},
                 {"norm_f", norm_f}, {"a", a}, {"beta", beta}, {"p", p}};
    return r;
}

namespace {

std::vector<std::size_t> nodes_in_ball(const Grid& g, double R) {
    std::vector<std::size_t> nodes;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (norm(g.node(n)) <= R) nodes.push_back(n);
    return nodes;
}

} // namespace

double max_optimal_radius(const GridField& field, double R, double r_max, double tol_rel) {
    if (field.is_zero())
        throw undefined_bound_error("max_optimal_radius: undefined for the zero field");
    const BallScanner scan(field.grid, r_max);
    double R0 = 0.0;
    for (std::size_t n : nodes_in_ball(field.grid, R))
        R0 = std::max(R0, radius_set(scan, field, n, tol_rel).max_radius());
    return R0;
}

double radius_upper_bound(const PhiFunction& phi, const GridField& field, double R, double r_max,
                          double tol_rel, VerificationReport* report) {
    if (field.is_zero())
        throw undefined_bound_error("radius_upper_bound: undefined for the zero field");
    if (R <= 0.0) throw argument_error("radius_upper_bound: R must be positive");

    const double R0 = max_optimal_radius(field, R, r_max, tol_rel);

    // a-priori bound: the decay estimate's right side falls below the
    // average of |f| over B(0, Rhat) measured against |B(0, 2 Rhat)|
    SampleSpec spec;
    spec.t_count = 100;
    spec.spatial = SampleSpec::from_grid(field.grid, 33);
    const DecayConstants c = decay_constants(phi, spec);

    const int dim = field.grid.dim;
    const double R_hat = std::max(R, field.support_radius());
    const double vol = field.grid.cell_volume();
    double mass = 0.0;
    for (std::size_t n : nodes_in_ball(field.grid, R_hat)) mass += std::fabs(field.values[n]) * vol;
    const double lower = mass / ball_measure(2.0 * R_hat, dim);

    const double norm_f = luxemburg_norm(phi, field).norm;
    const double K_const = (2.0 * std::pow(c.a, 1.0 / c.p_conj) / c.beta) * norm_f;
    // K |B|^{-1/p} < lower  <=>  |B| > (K / lower)^p
    double measure_bound = std::pow(K_const / lower, c.p);
    measure_bound = std::max(measure_bound, 1.0); // estimate requires |B| >= 1
    const double r_apriori =
        dim == 1 ? measure_bound / 2.0 : std::sqrt(measure_bound / M_PI);

    if (report) {
        report->name = "radius_upper_bound";
        report->value = R0;
        report->tolerance = 0.0;
        report->passed = std::isfinite(R0) && R0 <= r_apriori;
        report->details = {{"R0", R0},       {"r_apriori", r_apriori}, {"R", R},
                           {"r_max", r_max}, {"a", c.a},               {"beta", c.beta},
                           {"p", c.p}};
        if (R0 >= r_max - field.grid.h)
            report->note = "R0 reached the candidate cap r_max; raise r_max to certify";
    }
    if (R0 > r_apriori) {
        std::ostringstream diag;
        diag << "radius_upper_bound: measured R0=" << R0 << " exceeds the a-priori bound "
             << r_apriori;
        throw numerical_error(diag.str());
    }
    return R0;
}

VerificationReport localization_check(const GridField& field, double R, double frak_R,
                                      double r_max, double tol_rel) {
    VerificationReport r;
    r.name = "localization";

    const double R0 = max_optimal_radius(field, R, r_max, tol_rel);
    if (frak_R <= R0 + R) {
        std::ostringstream diag;
        diag << "localization_check: need frak_R > R0 + R = " << R0 + R << ", got " << frak_R;
        throw precondition_error(diag.str());
    }

    const GridField g = keep_inside(field, frak_R);
    const BallScanner scan(field.grid, r_max);

    double worst_gap = 0.0;
    bool sets_equal = true;
    long checked = 0;
    for (std::size_t n : nodes_in_ball(field.grid, R)) {
        const RadiusSet sf = radius_set(scan, field, n, tol_rel);
        const RadiusSet sg = radius_set(scan, g, n, tol_rel);
        worst_gap = std::max(worst_gap, std::fabs(sf.max_value - sg.max_value));
        if (sf.radii != sg.radii) sets_equal = false;
        ++checked;
    }
    r.value = worst_gap;
    r.iters = checked;
    r.passed = worst_gap == 0.0 && sets_equal;
    r.details = {{"R", R}, {"frak_R", frak_R}, {"R0", R0}, {"max_value_gap", worst_gap},
                 {"radius_sets_equal", sets_equal ? 1.0 : 0.0}};
    return r;
}

} // namespace phimax
