// Batch front door: parses an experiment config, dispatches one command,
// writes machine-readable reports. Exit codes: 0 pass, 1 verification
// failure, 2 usage/config error, 3 numerical error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phimax/errors.hpp"
#include "phimax/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Musielak-Orlicz maximal-operator toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory for reports");
        sub->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--threads", threads, "worker threads for per-node sweeps");
    };

    for (const char* name : {"norm", "maximal", "conditions", "verify", "continuity"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors map onto exit code 2
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        phimax::KVConfig kv = phimax::KVConfig::parse_file(config_path);
        kv.apply_env();
        if (seed_set) kv.map["seed"] = std::to_string(seed);
        if (threads > 0) kv.map["threads"] = std::to_string(threads);
        if (!out_dir.empty()) kv.map["out.dir"] = out_dir;

        phimax::ExperimentConfig cfg = phimax::build_config(std::move(kv));
        const phimax::RunReport report = phimax::run(phimax::parse_command(command), cfg);

        const std::string dir = !out_dir.empty() ? out_dir
                                : !cfg.out_dir.empty() ? cfg.out_dir
                                                       : std::string("phimax-out");
        phimax::write_reports(report, dir);

        std::cout << phimax::report_csv_body(report);
        std::cout << (report.all_passed ? "PASS" : "FAIL") << " (" << report.reports.size()
                  << " reports, " << report.wall_time_ms << " ms, reports in " << dir << ")\n";
        return report.all_passed ? 0 : 1;
    } catch (const phimax::config_error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const phimax::format_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const phimax::argument_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const phimax::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
