// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

// Plain scalar bisection for a monotone function; no shared code with the
// library's norm machinery.
inline double bisect(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error("oracle::bisect: no sign change");
    for (int i = 0; i < 400 && (hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Dense grid search for sup_{s in [0, s_max]} (t s - phi(s)).
inline double dense_sup(const std::function<double(double)>& phi, double t, double s_max,
                        int n = 2000000) {
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = s_max * i / n;
        best = std::max(best, t * s - phi(s));
    }
    return best;
}

// Midpoint quadrature on [a, b].
inline double quad(const std::function<double(double)>& f, double a, double b, int n = 200000) {
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
    return sum * h;
}

// Continuum maximal function of the indicator of [0,1] on the line:
// 1 on [0,1], 1/(2|distance to nearest edge... |) outside: for x > 1 the
// best ball reaches back to 0, giving 1/(2x); symmetric on the left.
inline double maximal_indicator_01(double x) {
    if (x >= 0.0 && x <= 1.0) return 1.0;
    if (x > 1.0) return 1.0 / (2.0 * x);
    return 1.0 / (2.0 * (1.0 - x));
}

} // namespace oracle
