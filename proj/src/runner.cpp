#include "phimax/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "phimax/errors.hpp"
#include "phimax/maximal.hpp"
#include "phimax/norms.hpp"
#include "phimax/util.hpp"

namespace phimax {

Command parse_command(const std::string& name) {
    if (name == "norm") return Command::Norm;
    if (name == "maximal") return Command::Maximal;
    if (name == "conditions") return Command::Conditions;
    if (name == "verify") return Command::Verify;
    if (name == "continuity") return Command::Continuity;
    throw argument_error("unknown command: " + name +
                         " (expected norm|maximal|conditions|verify|continuity)");
}

namespace {

const char* command_name(Command c) {
    switch (c) {
        case Command::Norm: return "norm";
        case Command::Maximal: return "maximal";
        case Command::Conditions: return "conditions";
        case Command::Verify: return "verify";
        case Command::Continuity: return "continuity";
    }
    return "?";
}

// Run one suite member; an exception becomes a failed report instead of
// aborting the batch.
template <typename Fn>
void guarded(RunReport& rr, const std::string& name, Fn&& fn) {
    try {
        rr.reports.push_back(fn());
    } catch (const std::exception& e) {
        VerificationReport r;
        r.name = name;
        r.passed = false;
        r.note = std::string("error: ") + e.what();
        rr.reports.push_back(std::move(r));
    }
}

VerificationReport from_norm(const std::string& name, const NormReport& nr) {
    VerificationReport r;
    r.name = name;
    r.passed = true;
    r.value = nr.norm;
    r.tolerance = nr.tolerance;
    r.iters = nr.bisection_iters;
    r.details = {{"modular", nr.modular}, {"bracket_lo", nr.bracket_lo},
                 {"bracket_hi", nr.bracket_hi}};
    return r;
}

VerificationReport from_condition(const std::string& name, const ConditionReport& cr) {
    VerificationReport r;
    r.name = name;
    r.passed = cr.passed;
    r.value = cr.witness_constant;
    r.tolerance = cr.tolerance;
    r.iters = cr.samples_used;
    r.note = cr.note;
    r.details = {{"exponent", cr.exponent}};
    if (cr.counterexample) {
        r.details.emplace_back("cx_x", cr.counterexample->x.x);
        r.details.emplace_back("cx_s", cr.counterexample->s);
        r.details.emplace_back("cx_t", cr.counterexample->t);
    }
    return r;
}

void run_norm(RunReport& rr, const ExperimentConfig& cfg) {
    for (const auto& [name, field] : cfg.fields)
        guarded(rr, "norm/" + name, [&, &f = field] {
            return from_norm("norm/" + name, luxemburg_norm(cfg.phi, f, cfg.norm_tol));
        });
}

void run_maximal(RunReport& rr, const ExperimentConfig& cfg) {
    for (const auto& [name, field] : cfg.fields) {
        guarded(rr, "maximal/" + name, [&, &f = field] {
            const GridField mf = maximal_function(f, cfg.r_max, cfg.threads);

            std::ostringstream ffile;
            write_field(ffile, mf);
            rr.artifacts.emplace_back("mf_" + name + ".field", ffile.str());

            const BallScanner scan(f.grid, cfg.r_max);
            std::ostringstream csv;
            csv.precision(17);
            csv << (f.grid.dim == 1 ? "x,mf,radii" : "x,y,mf,radii") << '\n';
            for (std::size_t n = 0; n < mf.values.size(); ++n) {
                const Point p = f.grid.node(n);
                csv << p.x << ',';
                if (f.grid.dim == 2) csv << p.y << ',';
                csv << mf.values[n];
                for (double r : radius_set(scan, f, n, cfg.radius_tol).radii) csv << ',' << r;
                csv << '\n';
            }
            rr.artifacts.emplace_back("mf_" + name + ".csv", csv.str());

            VerificationReport r;
            r.name = "maximal/" + name;
            r.passed = true;
            r.value = mf.max_abs();
            r.iters = static_cast<long>(mf.values.size());
            return r;
        });
    }
}

void run_conditions(RunReport& rr, const ExperimentConfig& cfg) {
    SampleSpec spec;
    spec.spatial = SampleSpec::from_grid(cfg.grid, 128);

    const double p_lo = cfg.phi.growth_lower();
    const double q_hi = cfg.phi.growth_upper();
    guarded(rr, "condition/aInc", [&] {
        return from_condition("condition/aInc",
                              check_ainc(cfg.phi, p_lo, 1.0 + 1e-6, spec));
    });
    guarded(rr, "condition/aDec", [&] {
        return from_condition("condition/aDec",
                              check_adec(cfg.phi, q_hi, 1.0 + 1e-6, spec));
    });
    guarded(rr, "condition/A0", [&] {
        return from_condition("condition/A0", check_a0(cfg.phi, spec));
    });
    if (cfg.phi.family() == PhiFamily::VariableExponent) {
        guarded(rr, "condition/A1", [&] {
            return from_condition("condition/A1",
                                  check_a1_variable_exponent(cfg.phi.p_field(), spec));
        });
        guarded(rr, "condition/A2", [&] {
            SampleSpec decay_spec = spec;
            decay_spec.spatial = SampleSpec::log_radial(cfg.grid.box(), 128);
            // limit exponent: configured, else sampled at the far corner
            double p_inf = cfg.phi.p_field()({cfg.grid.box().hi.x, cfg.grid.box().hi.y});
            if (cfg.kv.has("conditions.p_inf"))
                p_inf = std::stod(cfg.kv.get("conditions.p_inf"));
            return from_condition(
                "condition/A2", check_a2_variable_exponent(cfg.phi.p_field(), p_inf, decay_spec));
        });
    }
    if (cfg.phi.family() == PhiFamily::DoublePhase) {
        guarded(rr, "condition/A1", [&] {
            return from_condition("condition/A1",
                                  check_a1_double_phase(cfg.phi.a_field(), cfg.phi.p(),
                                                        cfg.phi.q(), cfg.grid.dim, spec));
        });
    }
}

void run_verify(RunReport& rr, const ExperimentConfig& cfg) {
    SampleSpec spec;
    spec.spatial = SampleSpec::from_grid(cfg.grid, 64);
    spec.t_count = 120;

    // structural norm inequalities per field
    const double p_lo = cfg.phi.growth_lower();
    const double a_inc = check_ainc(cfg.phi, p_lo, 1.0 + 1e-6, spec).witness_constant * (1.0 + 1e-9);
    for (const auto& [name, field] : cfg.fields) {
        guarded(rr, "norm_modular/" + name, [&, &f = field] {
            VerificationReport r = check_norm_modular_comparison(cfg.phi, p_lo, a_inc, f);
            r.name = "norm_modular/" + name;
            return r;
        });
    }

    for (std::size_t i = 0; i + 1 < cfg.fields.size(); ++i) {
        guarded(rr, "holder/" + cfg.fields[i].first, [&] {
            VerificationReport r =
                check_holder(cfg.phi, cfg.fields[i].second, cfg.fields[i + 1].second);
            r.name = "holder/" + cfg.fields[i].first + "*" + cfg.fields[i + 1].first;
            return r;
        });
    }

    guarded(rr, "embedding", [&] {
        std::vector<GridField> coarse, fine;
        for (const auto& [name, field] : cfg.fields) {
            coarse.push_back(field);
            fine.push_back(refine_linear(field));
        }
        VerificationReport r = check_embedding(cfg.phi, p_lo, coarse, fine);
        r.name = "embedding";
        return r;
    });

    for (const auto& [name, field] : cfg.fields) {
        guarded(rr, "tail_radius/" + name, [&, &f = field] {
            const double R = tail_radius(cfg.phi, f, cfg.verify_eps);
            const double tail_norm =
                luxemburg_norm_outside(cfg.phi, f, R, cfg.norm_tol).norm;
            VerificationReport r;
            r.name = "tail_radius/" + name;
            r.value = R;
            r.tolerance = cfg.verify_eps;
            r.passed = tail_norm < cfg.verify_eps;
            r.details = {{"tail_norm", tail_norm}};
            return r;
        });
        guarded(rr, "smallness/" + name, [&, &f = field] {
            const double lambda = smallness_threshold(cfg.phi, f, cfg.verify_eps);
            // certificate: the greedy worst set below measure lambda
            const double vol = f.grid.cell_volume();
            std::vector<std::pair<double, std::size_t>> order(f.values.size());
            for (std::size_t n = 0; n < f.values.size(); ++n) {
                const double t = std::fabs(f.values[n]) / (cfg.verify_eps / 2.0);
                order[n] = {t == 0.0 ? 0.0 : vol * cfg.phi(f.grid.node(n), t), n};
            }
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            GridField worst{f.grid, std::vector<double>(f.values.size(), 0.0)};
            const std::size_t cells = static_cast<std::size_t>(
                std::max(0.0, std::floor(lambda / vol - 1e-9)));
            for (std::size_t k = 0; k < std::min(cells, order.size()); ++k)
                worst.values[order[k].second] = f.values[order[k].second];
            const double worst_norm = luxemburg_norm(cfg.phi, worst, cfg.norm_tol).norm;
            VerificationReport r;
            r.name = "smallness/" + name;
            r.value = lambda;
            r.tolerance = cfg.verify_eps;
            r.passed = worst_norm < cfg.verify_eps;
            r.details = {{"worst_set_norm", worst_norm},
                         {"cells", static_cast<double>(cells)}};
            return r;
        });
    }

    // decay bound at a few ball radii
    guarded(rr, "decay_constants", [&] {
        const DecayConstants c = decay_constants(cfg.phi, spec);
        VerificationReport r;
        r.name = "decay_constants";
        r.passed = true;
        r.value = c.a;
        r.details = {{"p", c.p}, {"p_conj", c.p_conj}, {"a", c.a}, {"beta", c.beta}};
        return r;
    });
    {
        DecayConstants c;
        bool have_c = true;
        try {
            c = decay_constants(cfg.phi, spec);
        } catch (const std::exception&) {
            have_c = false;
        }
        if (have_c) {
            for (const auto& [name, field] : cfg.fields) {
                for (double radius : {1.0, 2.0, 4.0}) {
                    std::ostringstream nm;
                    nm << "decay_bound/" << name << "@r=" << radius;
                    guarded(rr, nm.str(), [&, &f = field, nm2 = nm.str(), radius] {
                        VerificationReport r = average_decay_bound(
                            cfg.phi, f, c.p, c.a, c.beta, Ball{{0.0, 0.0}, radius});
                        r.name = nm2;
                        return r;
                    });
                }
            }
        }
    }

    for (const auto& [name, field] : cfg.fields) {
        if (field.is_zero()) continue;
        guarded(rr, "radius_bound/" + name, [&, &f = field] {
            VerificationReport r;
            radius_upper_bound(cfg.phi, f, cfg.verify_R, cfg.r_max, cfg.radius_tol, &r);
            r.name = "radius_bound/" + name;
            return r;
        });
        guarded(rr, "localization/" + name, [&, &f = field] {
            const double R0 = max_optimal_radius(f, cfg.verify_R, cfg.r_max, cfg.radius_tol);
            const double frak_R = R0 + cfg.verify_R + 1.0;
            VerificationReport r =
                localization_check(f, cfg.verify_R, frak_R, cfg.r_max, cfg.radius_tol);
            r.name = "localization/" + name;
            return r;
        });
        guarded(rr, "gradient_bound/" + name, [&, &f = field] {
            GradientBoundOptions opt;
            opt.r_max = cfg.r_max;
            opt.norm_tol = cfg.norm_tol;
            opt.threads = cfg.threads;
            VerificationReport r = check_gradient_bound(cfg.phi, weak_gradient(f), opt);
            r.name = "gradient_bound/" + name;
            return r;
        });
        guarded(rr, "derivative_formula/" + name, [&, &f = field] {
            DerivativeFormulaOptions opt;
            opt.r_max = cfg.r_max;
            opt.radius_tol_rel = cfg.radius_tol;
            VerificationReport r = check_derivative_formula(cfg.phi, weak_gradient(f), opt);
            r.name = "derivative_formula/" + name;
            return r;
        });
    }
}

void run_continuity(RunReport& rr, const ExperimentConfig& cfg) {
    guarded(rr, "continuity/" + cfg.continuity_family.name, [&] {
        const SobolevField f = weak_gradient(cfg.fields.front().second);
        rr.traces = continuity_experiment(cfg.phi, f, cfg.continuity_family, cfg.continuity);
        rr.artifacts.emplace_back("continuity.csv", continuity_csv(rr.traces));

        const double first = rr.traces.front().output_gap;
        const double last = rr.traces.back().output_gap;
        VerificationReport r;
        r.name = "continuity/" + cfg.continuity_family.name;
        r.value = first > 0.0 ? last / first : 0.0;
        r.tolerance = cfg.continuity_ratio;
        r.passed = last < cfg.continuity_ratio * first || (first == 0.0 && last == 0.0);
        r.iters = static_cast<long>(rr.traces.size());
        r.details = {{"first_output_gap", first},
                     {"final_output_gap", last},
                     {"final_stability", rr.traces.back().stability_measure}};
        return r;
    });
}

} // namespace

RunReport run(Command cmd, const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rr;
    rr.command = command_name(cmd);
    rr.config_hash = cfg.hash;
    rr.config_echo = cfg.kv.canonical();

    switch (cmd) {
        case Command::Norm: run_norm(rr, cfg); break;
        case Command::Maximal: run_maximal(rr, cfg); break;
        case Command::Conditions: run_conditions(rr, cfg); break;
        case Command::Verify: run_verify(rr, cfg); break;
        case Command::Continuity: run_continuity(rr, cfg); break;
    }

    rr.all_passed = true;
    for (const VerificationReport& r : rr.reports) rr.all_passed = rr.all_passed && r.ok();
    rr.wall_time_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return rr;
}

std::string report_csv_body(const RunReport& report) {
    std::string body = csv_header();
    for (const VerificationReport& r : report.reports) body += csv_row(r);
    return body;
}

std::string report_json_body(const RunReport& report) {
    nlohmann::json j;
    j["command"] = report.command;
    {
        std::ostringstream hx;
        hx << std::hex << report.config_hash;
        j["config"] = {{"hash", hx.str()}, {"echo", report.config_echo}};
    }
    j["pass"] = report.all_passed;
    auto& reports = j["reports"] = nlohmann::json::array();
    for (const VerificationReport& r : report.reports) {
        nlohmann::json e;
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["skipped"] = r.skipped;
        e["value"] = r.value;
        e["tolerance"] = r.tolerance;
        e["iters"] = r.iters;
        if (!r.note.empty()) e["note"] = r.note;
        for (const auto& [k, v] : r.details) e["details"][k] = v;
        reports.push_back(std::move(e));
    }
    if (!report.traces.empty()) {
        auto& traces = j["traces"] = nlohmann::json::array();
        for (const ContinuityTrace& t : report.traces) {
            traces.push_back({{"m", t.m},
                              {"input_gap", t.input_gap},
                              {"output_gap", t.output_gap},
                              {"input_u_gap", t.input_u_gap},
                              {"input_grad_gap", t.input_grad_gap},
                              {"output_u_gap", t.output_u_gap},
                              {"output_grad_gap", t.output_grad_gap},
                              {"stability_measure", t.stability_measure},
                              {"oscillation_diag", t.oscillation_diag}});
        }
    }
    return j.dump(2) + "\n";
}

void write_reports(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    write_text_atomic((fs::path(out_dir) / "report.csv").string(), report_csv_body(report));
    write_text_atomic((fs::path(out_dir) / "report.json").string(), report_json_body(report));
    {
        std::ostringstream t;
        t << "wall_time_ms " << report.wall_time_ms << '\n';
        write_text_atomic((fs::path(out_dir) / "timing.txt").string(), t.str());
    }
    for (const auto& [name, body] : report.artifacts)
        write_text_atomic((fs::path(out_dir) / name).string(), body);
}

} // namespace phimax
