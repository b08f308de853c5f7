#pragma once

#include <string>
#include <utility>
#include <vector>

namespace phimax {

// Outcome of one verified statement: pass/fail with the measured slack
// and whatever scalars explain the verdict.
struct VerificationReport {
    std::string name;
    bool passed = false;
    bool skipped = false; // precondition not applicable; not a failure
    double value = 0.0;   // principal measured quantity (slack, ratio, measure)
    double tolerance = 0.0;
    long iters = 0; // samples or iterations behind the verdict
    std::string note;
    std::vector<std::pair<std::string, double>> details;

    bool ok() const { return passed || skipped; }
};

// One CSV row per report: name,value,tolerance,passed,iters.
std::string csv_header();
std::string csv_row(const VerificationReport& r);

// Atomic text write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& body);

} // namespace phimax
