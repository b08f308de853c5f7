#include "phimax/spatial_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/grid.hpp"

namespace phimax {

SpatialFunction SpatialFunction::constant(double c) {
    std::ostringstream n;
    n << "constant(" << c << ")";
    return {n.str(), [c](Point) { return c; }};
}

SpatialFunction SpatialFunction::affine(double c0, double gx, double gy) {
    std::ostringstream n;
    n << "affine(" << c0 << "," << gx << "," << gy << ")";
    return {n.str(), [=](Point p) { return c0 + gx * p.x + gy * p.y; }};
}

SpatialFunction SpatialFunction::clamped_ramp(double c0, double slope, double x0, double width) {
    std::ostringstream n;
    n << "clamped_ramp(" << c0 << "," << slope << "," << x0 << "," << width << ")";
    return {n.str(), [=](Point p) {
                return c0 + slope * std::clamp(p.x - x0, 0.0, width);
            }};
}

SpatialFunction SpatialFunction::gaussian_bump(double c0, double amp, Point center, double width) {
    std::ostringstream n;
    n << "gaussian_bump(" << c0 << "," << amp << "," << width << ")";
    return {n.str(), [=](Point p) {
                const double d = dist(p, center);
                return c0 + amp * std::exp(-(d * d) / (width * width));
            }};
}

SpatialFunction SpatialFunction::log_decay(double c0, double amp) {
    std::ostringstream n;
    n << "log_decay(" << c0 << "," << amp << ")";
    return {n.str(), [=](Point p) { return c0 + amp / std::log(std::exp(1.0) + norm(p)); }};
}

SpatialFunction SpatialFunction::from_samples(std::shared_ptr<const GridField> samples) {
    if (!samples) throw argument_error("from_samples: null field");
    return {"samples", [samples](Point p) {
                const Grid& g = samples->grid;
                int i = static_cast<int>(std::lround((p.x - g.origin.x) / g.h));
                int j = g.dim == 2 ? static_cast<int>(std::lround((p.y - g.origin.y) / g.h)) : 0;
                i = std::clamp(i, 0, g.extents[0] - 1);
                j = std::clamp(j, 0, g.extents[1] - 1);
                return samples->values[g.index(i, j)];
            }};
}

} // namespace phimax
