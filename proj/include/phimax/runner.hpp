#pragma once

#include <string>
#include <vector>

#include "phimax/config.hpp"
#include "phimax/report.hpp"
#include "phimax/sobolev.hpp"

namespace phimax {

enum class Command { Norm, Maximal, Conditions, Verify, Continuity };

Command parse_command(const std::string& name); // throws argument_error

struct RunReport {
    std::string command;
    std::uint64_t config_hash = 0;
    std::string config_echo; // canonical config text
    std::vector<VerificationReport> reports;
    std::vector<ContinuityTrace> traces;                          // continuity only
    std::vector<std::pair<std::string, std::string>> artifacts;   // filename -> body
    double wall_time_ms = 0.0;
    bool all_passed = true;
};

// Deterministic for a fixed config and seed; any operation error is
// captured as a failed report rather than escaping.
RunReport run(Command cmd, const ExperimentConfig& cfg);

// report.csv rows and the structured report, excluding wall time.
std::string report_csv_body(const RunReport& report);
std::string report_json_body(const RunReport& report);

// Writes report.csv, report.json (with wall time added), and any
// artifacts under out_dir; every file is written atomically.
void write_reports(const RunReport& report, const std::string& out_dir);

} // namespace phimax
