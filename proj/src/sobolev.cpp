#include "phimax/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/util.hpp"

namespace phimax {

SobolevField weak_gradient(const GridField& u) {
    const Grid& g = u.grid;
    const int nx = g.extents[0];
    const int ny = g.extents[1];
    SobolevField sf;
    sf.u = u;

    GridField dx{g, std::vector<double>(u.values.size())};
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double d;
            if (i == 0)
                d = (u.values[g.index(1, j)] - u.values[g.index(0, j)]) / g.h;
            else if (i == nx - 1)
                d = (u.values[g.index(nx - 1, j)] - u.values[g.index(nx - 2, j)]) / g.h;
            else
                d = (u.values[g.index(i + 1, j)] - u.values[g.index(i - 1, j)]) / (2.0 * g.h);
            dx.values[g.index(i, j)] = d;
        }
    sf.grad.push_back(std::move(dx));

    if (g.dim == 2) {
        GridField dy{g, std::vector<double>(u.values.size())};
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double d;
                if (j == 0)
                    d = (u.values[g.index(i, 1)] - u.values[g.index(i, 0)]) / g.h;
                else if (j == ny - 1)
                    d = (u.values[g.index(i, ny - 1)] - u.values[g.index(i, ny - 2)]) / g.h;
                else
                    d = (u.values[g.index(i, j + 1)] - u.values[g.index(i, j - 1)]) / (2.0 * g.h);
                dy.values[g.index(i, j)] = d;
            }
        sf.grad.push_back(std::move(dy));
    }
    return sf;
}

double sobolev_norm(const PhiFunction& phi, const SobolevField& sf, double tol) {
    double total = luxemburg_norm(phi, sf.u, tol).norm;
    for (const GridField& gcomp : sf.grad) total += luxemburg_norm(phi, gcomp, tol).norm;
    return total;
}

std::vector<std::uint8_t> jump_mask(const GridField& f, double threshold_frac) {
    const Grid& g = f.grid;
    const int nx = g.extents[0];
    const int ny = g.extents[1];
    std::vector<std::uint8_t> mask(f.values.size(), 0);
    const double tau = threshold_frac * f.max_abs();
    if (tau == 0.0) return mask;

    const auto mark_around = [&](int i, int j) {
        for (int dj = -2; dj <= 2; ++dj)
            for (int di = -2; di <= 2; ++di) {
                const int ii = i + di, jj = j + dj;
                if (g.in_bounds(ii, jj)) mask[g.index(ii, jj)] = 1;
            }
    };

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (i + 1 < nx &&
                std::fabs(f.values[g.index(i + 1, j)] - f.values[g.index(i, j)]) > tau) {
                mark_around(i, j);
                mark_around(i + 1, j);
            }
            if (j + 1 < ny &&
                std::fabs(f.values[g.index(i, j + 1)] - f.values[g.index(i, j)]) > tau) {
                mark_around(i, j);
                mark_around(i, j + 1);
            }
            // the zero extension is a neighbor too: support clipped by the
            // box edge is a jump
            const bool x_edge = i == 0 || i == nx - 1;
            const bool y_edge = g.dim == 2 && (j == 0 || j == ny - 1);
            if ((x_edge || y_edge) && std::fabs(f.values[g.index(i, j)]) > tau) mark_around(i, j);
        }
    return mask;
}

double default_slack(const SobolevField& f) {
    double gmax = 0.0;
    for (const GridField& comp : f.grad) gmax = std::max(gmax, comp.max_abs());
    const double scale = std::max(f.u.support_diameter(), f.u.grid.h);
    return 4.0 * f.u.grid.h * (gmax + f.u.max_abs() / scale);
}

VerificationReport check_gradient_bound(const PhiFunction& phi, const SobolevField& f,
                                        const GradientBoundOptions& opt) {
    VerificationReport r;
    r.name = "gradient_bound";

    const auto mask = jump_mask(f.u, opt.jump_threshold);
    const double allowance = opt.slack < 0.0 ? default_slack(f) : opt.slack;
    r.tolerance = allowance;

    const GridField mf = maximal_function(f.u, opt.r_max, opt.threads);
    const SobolevField dmf = weak_gradient(mf);

    double worst = -1e300;
    long unmasked = 0;
    long violations = 0;
    for (std::size_t axis = 0; axis < f.grad.size(); ++axis) {
        const GridField mdf = maximal_function(f.grad[axis], opt.r_max, opt.threads);
        for (std::size_t n = 0; n < mf.values.size(); ++n) {
            if (mask[n]) continue;
            if (axis == 0) ++unmasked;
            const double gap = std::fabs(dmf.grad[axis].values[n]) - mdf.values[n];
            worst = std::max(worst, gap);
            if (gap > allowance) ++violations;
        }
    }

    const double norm_f = sobolev_norm(phi, f, opt.norm_tol);
    const double norm_mf = sobolev_norm(phi, dmf, opt.norm_tol);
    const double ratio = norm_f > 0.0 ? norm_mf / norm_f : 0.0;

    r.value = std::max(0.0, worst); // violation slack against a zero allowance
    r.iters = unmasked;
    r.passed = violations == 0;
    r.details = {{"allowance", allowance},
                 {"worst_gap", worst},
                 {"violations", static_cast<double>(violations)},
                 {"unmasked_nodes", static_cast<double>(unmasked)},
                 {"operator_ratio", ratio}};
    return r;
}

namespace {

// Cluster test: the near-optimal radii form one tight cluster (wide flat
// ties are degenerate, not unique), and no distant radius comes close to
// the maximum. Radii between the cluster and the window may be
// near-optimal; a smooth average profile is nearly flat next to its peak.
bool unique_strict_argmax(const RadiusSet& rs, const std::vector<double>& prof,
                          const std::vector<double>& radii, double h, double strict_gap_rel,
                          double window) {
    if (rs.radii.empty()) return false;
    if (rs.radii.back() - rs.radii.front() > 2.0 * h + 1e-12) return false;
    for (std::size_t i = 1; i < rs.radii.size(); ++i)
        if (rs.radii[i] - rs.radii[i - 1] > 0.5 * h + 1e-12) return false;

    const double lo = rs.radii.front() - window, hi = rs.radii.back() + window;
    double best_outside = -1e300;
    for (std::size_t k = 0; k < prof.size(); ++k) {
        if (radii[k] >= lo && radii[k] <= hi) continue;
        best_outside = std::max(best_outside, prof[k]);
    }
    if (best_outside == -1e300) return true; // nothing beyond the window
    return best_outside <= rs.max_value * (1.0 - strict_gap_rel);
}

} // namespace

VerificationReport check_derivative_formula(const PhiFunction& phi, const SobolevField& f,
                                            const DerivativeFormulaOptions& opt) {
    (void)phi; // the formula is metric-free; phi fixes the space the field lives in
    VerificationReport r;
    r.name = "derivative_formula";

    const auto mask = jump_mask(f.u, opt.jump_threshold);
    const double allowance = opt.slack < 0.0 ? default_slack(f) : opt.slack;
    r.tolerance = allowance;

    const GridField mf = maximal_function(f.u, opt.r_max);
    const SobolevField dmf = weak_gradient(mf);
    const SobolevField dabs = weak_gradient(abs_field(f.u));

    const Grid& g = f.u.grid;
    const BallScanner scan(g, opt.r_max);
    const double h = g.h;

    // one pass for the per-node argmax clusters; a node is usable when its
    // near-optimal radii form a single tight cluster with no distant rival
    struct Cluster {
        bool tight = false;
        double lo = 0.0, hi = 0.0;
    };
    std::vector<Cluster> clusters(g.size());
    std::vector<RadiusSet> sets(g.size());
    {
        std::vector<double> prof;
        for (std::size_t n = 0; n < g.size(); ++n) {
            scan.profile(f.u, n, true, prof);
            sets[n] = radius_set(scan, f.u, n, opt.radius_tol_rel);
            Cluster& c = clusters[n];
            c.tight = unique_strict_argmax(sets[n], prof, scan.radii(), h, opt.strict_gap_rel,
                                           opt.cluster_window);
            c.lo = sets[n].radii.front();
            c.hi = sets[n].radii.back();
        }
    }

    // the difference stencil must live on one argmax branch: both stencil
    // neighbors tight, with argmax radii drifting at most a few steps from
    // the node's own (the formula holds a.e.; branch switches are the
    // excluded null set, an O(h)-wide node band here)
    const double branch_window = opt.branch_window_h * h;
    const auto same_branch = [&](const Cluster& a, const Cluster& b) {
        return b.tight && b.lo >= a.lo - branch_window && b.hi <= a.hi + branch_window;
    };

    const int nx = g.extents[0];
    double worst = 0.0;
    long qualifying = 0;
    long compared = 0;
    std::vector<double> dprof;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (mask[n] || !clusters[n].tight) continue;
        const int ci = static_cast<int>(n) % nx;
        const int cj = static_cast<int>(n) / nx;

        bool counted = false;
        for (std::size_t axis = 0; axis < f.grad.size(); ++axis) {
            const int di = axis == 0 ? 1 : 0;
            const int dj = axis == 0 ? 0 : 1;
            bool stencil_ok = true;
            for (int s : {-1, 1}) {
                const int ii = ci + s * di, jj = cj + s * dj;
                if (!g.in_bounds(ii, jj)) continue; // edge: one-sided stencil
                if (!same_branch(clusters[n], clusters[g.index(ii, jj)])) stencil_ok = false;
            }
            if (!stencil_ok) continue;
            if (!counted) {
                ++qualifying;
                counted = true;
            }

            const double lhs = dmf.grad[axis].values[n];
            bool have_dprof = false;
            for (double rad : sets[n].radii) {
                double rhs;
                if (rad == 0.0) {
                    rhs = dabs.grad[axis].values[n];
                } else {
                    if (!have_dprof) {
                        scan.profile(dabs.grad[axis], n, false, dprof);
                        have_dprof = true;
                    }
                    const std::size_t k =
                        static_cast<std::size_t>(std::llround(rad / (0.5 * h)));
                    rhs = dprof[k];
                }
                worst = std::max(worst, std::fabs(lhs - rhs));
                ++compared;
            }
        }
    }

    r.value = worst;
    r.iters = qualifying;
    r.passed = worst <= allowance;
    r.details = {{"allowance", allowance},
                 {"qualifying_nodes", static_cast<double>(qualifying)},
                 {"comparisons", static_cast<double>(compared)}};
    return r;
}

namespace {

std::vector<std::size_t> nodes_in_ball(const Grid& g, double R) {
    std::vector<std::size_t> nodes;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (norm(g.node(n)) <= R) nodes.push_back(n);
    return nodes;
}

double stability_measure(const BallScanner& scan, const GridField& f, const GridField& f_m,
                         const std::vector<std::size_t>& nodes, double lambda, double tol_rel) {
    long bad = 0;
    for (std::size_t n : nodes) {
        const RadiusSet rs = radius_set(scan, f, n, tol_rel);
        const RadiusSet rs_m = radius_set(scan, f_m, n, tol_rel);
        bool contained = true;
        for (double rm : rs_m.radii) {
            double d_min = 1e300;
            for (double rf : rs.radii) d_min = std::min(d_min, std::fabs(rm - rf));
            if (d_min > lambda) {
                contained = false;
                break;
            }
        }
        if (!contained) ++bad;
    }
    return static_cast<double>(bad) * f.grid.cell_volume();
}

} // namespace

double radius_stability(const GridField& f, const GridField& f_m, double R, double lambda,
                        double r_max, double tol_rel) {
    if (lambda <= 0.0) throw argument_error("radius_stability: lambda must be positive");
    if (!f.grid.same_layout(f_m.grid)) throw argument_error("radius_stability: grids differ");
    const BallScanner scan(f.grid, r_max);
    return stability_measure(scan, f, f_m, nodes_in_ball(f.grid, R), lambda, tol_rel);
}

VerificationReport uniform_radius_bound_check(const GridField& f,
                                              const std::vector<GridField>& sequence, double R,
                                              const UniformBoundOptions& opt) {
    VerificationReport r;
    r.name = "uniform_radius_bound";

    const double R0 = max_optimal_radius(f, R, opt.r_max, opt.tol_rel);
    std::vector<double> bounds;
    bounds.reserve(sequence.size());
    for (const GridField& fm : sequence)
        bounds.push_back(max_optimal_radius(fm, R, opt.r_max, opt.tol_rel));

    const double window = opt.window < 0.0 ? std::max(2.0 * f.grid.h, 0.05 * R0) : opt.window;
    double overall = R0;
    bool finite = std::isfinite(R0);
    for (double b : bounds) {
        overall = std::max(overall, b);
        finite = finite && std::isfinite(b);
    }
    // the tail of the sequence must have settled near the limit's bound
    const std::size_t tail = std::max<std::size_t>(1, sequence.size() / 4);
    double tail_drift = 0.0;
    for (std::size_t m = bounds.size() - tail; m < bounds.size(); ++m)
        tail_drift = std::max(tail_drift, std::fabs(bounds[m] - R0));

    r.value = overall;
    r.iters = static_cast<long>(sequence.size());
    r.tolerance = window;
    r.passed = finite && tail_drift <= window;
    r.details = {{"R0_limit", R0},
                 {"max_bound", overall},
                 {"tail_drift", tail_drift},
                 {"window", window}};
    return r;
}

PerturbationFamily PerturbationFamily::scale_family(double amplitude, double decay) {
    PerturbationFamily p;
    p.kind = Kind::Scale;
    p.name = "scale";
    p.amplitude = amplitude;
    p.decay = decay;
    return p;
}

PerturbationFamily PerturbationFamily::bump_family(double amplitude, double decay, Point center,
                                                   double width) {
    PerturbationFamily p;
    p.kind = Kind::Bump;
    p.name = "bump";
    p.amplitude = amplitude;
    p.decay = decay;
    p.center = center;
    p.width = width;
    return p;
}

PerturbationFamily PerturbationFamily::noise_family(double amplitude, double decay,
                                                    std::uint64_t seed) {
    PerturbationFamily p;
    p.kind = Kind::MollifiedNoise;
    p.name = "mollified_noise";
    p.amplitude = amplitude;
    p.decay = decay;
    p.seed = seed;
    return p;
}

namespace {

double quartic_bump(double d, double width) {
    const double s = d / width;
    if (s >= 1.0) return 0.0;
    const double t = 1.0 - s * s;
    return t * t;
}

} // namespace

GridField PerturbationFamily::perturbed(const GridField& f, int m) const {
    if (m < 1) throw argument_error("perturbation step m must be >= 1");
    const double amp = amplitude * std::pow(decay, m);
    switch (kind) {
        case Kind::Scale:
            return scale(f, 1.0 + amp);
        case Kind::Bump: {
            GridField out = f;
            for (std::size_t n = 0; n < out.values.size(); ++n)
                out.values[n] += amp * quartic_bump(dist(f.grid.node(n), center), width);
            return out;
        }
        case Kind::MollifiedNoise: {
            // fixed shape per seed: a handful of random smooth bumps
            GridField out = f;
            SplitMix64 rng(seed);
            const Box box = f.grid.box();
            for (int b = 0; b < 8; ++b) {
                const Point c{rng.uniform(box.lo.x, box.hi.x),
                              f.grid.dim == 2 ? rng.uniform(box.lo.y, box.hi.y) : 0.0};
                const double w = rng.uniform(0.5, 1.5);
                const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
                for (std::size_t n = 0; n < out.values.size(); ++n)
                    out.values[n] += amp * s * quartic_bump(dist(f.grid.node(n), c), w);
            }
            return out;
        }
    }
    throw argument_error("unknown perturbation kind");
}

std::vector<ContinuityTrace> continuity_experiment(const PhiFunction& phi, const SobolevField& f,
                                                   const PerturbationFamily& family,
                                                   const ContinuityOptions& opt) {
    const Grid& grid = f.u.grid;
    const BallScanner scan(grid, opt.r_max);
    const auto stability_nodes = nodes_in_ball(grid, opt.R);

    const GridField mf = maximal_function(f.u, opt.r_max, opt.threads);
    const SobolevField dmf = weak_gradient(mf);

    // proof-mirroring diagnostic: oscillation of r -> avg_{B(x,r)} D_i f
    // over radius pairs closer than delta0, at sampled x
    double oscillation = 0.0;
    {
        std::vector<double> prof;
        const auto& radii = scan.radii();
        for (std::size_t axis = 0; axis < f.grad.size(); ++axis) {
            for (std::size_t n = 0; n < grid.size();
                 n += static_cast<std::size_t>(std::max(1, opt.x_sample_stride))) {
                if (norm(grid.node(n)) > opt.R) continue;
                scan.profile(f.grad[axis], n, false, prof);
                for (std::size_t i = 0; i < prof.size(); ++i)
                    for (std::size_t j = i + 1;
                         j < prof.size() && radii[j] - radii[i] <= opt.delta0; ++j)
                        oscillation = std::max(oscillation, std::fabs(prof[j] - prof[i]));
            }
        }
    }

    std::vector<ContinuityTrace> traces;
    traces.reserve(static_cast<std::size_t>(opt.m_steps));
    for (int m = 1; m <= opt.m_steps; ++m) {
        const GridField u_m = family.perturbed(f.u, m);

        ContinuityTrace tr;
        tr.m = m;

        const SobolevField din = weak_gradient(subtract(u_m, f.u));
        tr.input_u_gap = luxemburg_norm(phi, din.u, opt.norm_tol).norm;
        tr.input_grad_gap = 0.0;
        for (const GridField& comp : din.grad)
            tr.input_grad_gap += luxemburg_norm(phi, comp, opt.norm_tol).norm;
        tr.input_gap = tr.input_u_gap + tr.input_grad_gap;

        const GridField mf_m = maximal_function(u_m, opt.r_max, opt.threads);
        const SobolevField dout = weak_gradient(subtract(mf_m, mf));
        tr.output_u_gap = luxemburg_norm(phi, dout.u, opt.norm_tol).norm;
        tr.output_grad_gap = 0.0;
        for (const GridField& comp : dout.grad)
            tr.output_grad_gap += luxemburg_norm(phi, comp, opt.norm_tol).norm;
        tr.output_gap = tr.output_u_gap + tr.output_grad_gap;

        tr.stability_measure =
            stability_measure(scan, f.u, u_m, stability_nodes, opt.lambda, opt.radius_tol_rel);
        tr.oscillation_diag = oscillation;
        traces.push_back(tr);
    }

    // the harness contract: input gaps must actually decrease
    for (std::size_t i = 1; i < traces.size(); ++i) {
        if (traces[i].input_gap > traces[i - 1].input_gap * (1.0 + 1e-9)) {
            std::ostringstream diag;
            diag << "continuity_experiment: input gaps are not decreasing (m=" << traces[i].m
                 << ": " << traces[i].input_gap << " after " << traces[i - 1].input_gap << ")";
            throw precondition_error(diag.str());
        }
    }
    return traces;
}

std::string continuity_csv(const std::vector<ContinuityTrace>& traces) {
    std::ostringstream out;
    out << "m,input_gap,output_gap,stability_measure,oscillation_diag\n";
    out.precision(17);
    for (const ContinuityTrace& t : traces)
        out << t.m << ',' << t.input_gap << ',' << t.output_gap << ',' << t.stability_measure
            << ',' << t.oscillation_diag << '\n';
    return out.str();
}

} // namespace phimax
