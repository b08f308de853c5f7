#pragma once

#include <array>
#include <cmath>

namespace phimax {

// A point in R^n, n <= 2. 1-D code keeps y == 0 so Euclidean
// distances work uniformly in both dimensions.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

// Axis-aligned box, the set on which x-dependent integrands live.
struct Box {
    int dim = 1;
    Point lo;
    Point hi;

    bool contains(Point p, double slack = 1e-12) const {
        const double sx = slack * (1.0 + std::fabs(hi.x - lo.x));
        if (p.x < lo.x - sx || p.x > hi.x + sx) return false;
        if (dim == 2) {
            const double sy = slack * (1.0 + std::fabs(hi.y - lo.y));
            if (p.y < lo.y - sy || p.y > hi.y + sy) return false;
        }
        return true;
    }

    bool contains_box(const Box& other, double slack = 1e-12) const {
        if (other.dim != dim) return false;
        return contains(other.lo, slack) && contains(other.hi, slack);
    }

    double measure() const {
        const double mx = hi.x - lo.x;
        return dim == 1 ? mx : mx * (hi.y - lo.y);
    }

    static Box interval(double lo, double hi) { return Box{1, {lo, 0.0}, {hi, 0.0}}; }
    static Box rect(Point lo, Point hi) { return Box{2, lo, hi}; }
};

struct Ball {
    Point center;
    double radius = 0.0;
};

// Continuum measure of a ball: 2r in 1-D, pi r^2 in 2-D.
inline double ball_measure(double radius, int dim) {
    return dim == 1 ? 2.0 * radius : M_PI * radius * radius;
}

} // namespace phimax
