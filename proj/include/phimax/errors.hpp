#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phimax {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument value (t < 0, tol <= 0, mismatched grids, ...).
struct argument_error : error {
    using error::error;
};

// Point outside an integrand's domain box.
struct domain_error : error {
    using error::error;
};

// Iteration/bracket budget exhausted; message carries diagnostics.
struct numerical_error : error {
    using error::error;
};

// sup_s(ts - phi(x,s)) still increasing at the bracket cap.
struct unbounded_conjugate_error : numerical_error {
    using numerical_error::numerical_error;
};

// Ball contains no lattice node.
struct empty_ball_error : argument_error {
    using argument_error::argument_error;
};

// Radius bounds are undefined for the zero field.
struct undefined_bound_error : argument_error {
    using argument_error::argument_error;
};

// A stated precondition (e.g. localization radius) does not hold.
struct precondition_error : argument_error {
    using argument_error::argument_error;
};

// Malformed field file or report file.
struct format_error : error {
    using error::error;
};

// Config validation; collects every issue, not just the first.
struct config_error : error {
    std::vector<std::string> issues;

    explicit config_error(std::vector<std::string> all)
        : error(join(all)), issues(std::move(all)) {}

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid config:";
        for (const auto& e : v) {
            s += "\n  - ";
            s += e;
        }
        return s;
    }
};

} // namespace phimax
