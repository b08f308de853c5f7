#pragma once

#include <functional>
#include <memory>
#include <string>

#include "phimax/geometry.hpp"

namespace phimax {

struct GridField;

// A named scalar function of position, used for variable exponents p(x)
// and double-phase weights a(x). Immutable after construction.
class SpatialFunction {
public:
    using Fn = std::function<double(Point)>;

    SpatialFunction() = default;
    SpatialFunction(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    double operator()(Point p) const { return fn_(p); }
    const std::string& name() const { return name_; }
    bool valid() const { return static_cast<bool>(fn_); }

    // Built-in catalog.
    static SpatialFunction constant(double c);
    // c0 + gx*x + gy*y
    static SpatialFunction affine(double c0, double gx, double gy = 0.0);
    // c0 + slope * clamp(x - x0, 0, width), along the first axis
    static SpatialFunction clamped_ramp(double c0, double slope, double x0, double width);
    // c0 + amp * exp(-|p - center|^2 / width^2)
    static SpatialFunction gaussian_bump(double c0, double amp, Point center, double width);
    // c0 + amp / log(e + |p|)
    static SpatialFunction log_decay(double c0, double amp);
    // nearest-node lookup into a sampled field
    static SpatialFunction from_samples(std::shared_ptr<const GridField> samples);

private:
    std::string name_;
    Fn fn_;
};

} // namespace phimax
