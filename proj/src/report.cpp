#include "phimax/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phimax/errors.hpp"

namespace phimax {

std::string csv_header() { return "name,value,tolerance,passed,iters\n"; }

std::string csv_row(const VerificationReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.name << ',' << r.value << ',' << r.tolerance << ','
        << (r.skipped ? "skipped" : (r.passed ? "true" : "false")) << ',' << r.iters << '\n';
    return out.str();
}

void write_text_atomic(const std::string& path, const std::string& body) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw format_error("cannot open for writing: " + tmp.string());
        out << body;
        if (!out) throw format_error("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace phimax
