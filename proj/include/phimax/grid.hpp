#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "phimax/geometry.hpp"

namespace phimax {

// Uniform node lattice over a box, n in {1,2}. Nodes are cell centers;
// the cell volume is h^dim.
struct Grid {
    int dim = 1;
    Point origin;              // first node
    double h = 1.0;
    std::array<int, 2> extents = {2, 1}; // node counts per axis; extents[1]==1 in 1-D

    std::size_t size() const {
        return static_cast<std::size_t>(extents[0]) * static_cast<std::size_t>(extents[1]);
    }

    Point node(int i, int j = 0) const {
        return {origin.x + i * h, origin.y + j * h};
    }

    Point node(std::size_t flat) const {
        const int nx = extents[0];
        return node(static_cast<int>(flat % nx), static_cast<int>(flat / nx));
    }

    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * extents[0] + static_cast<std::size_t>(i);
    }

    bool in_bounds(int i, int j = 0) const {
        return i >= 0 && i < extents[0] && j >= 0 && j < extents[1];
    }

    double cell_volume() const { return dim == 1 ? h : h * h; }

    Box box() const {
        return Box{dim, origin, {origin.x + (extents[0] - 1) * h,
                                 origin.y + (extents[1] - 1) * h}};
    }

    bool same_layout(const Grid& o) const {
        return dim == o.dim && h == o.h && origin.x == o.origin.x && origin.y == o.origin.y &&
               extents == o.extents;
    }

    // Grid over [lo, hi] with spacing h; extents rounded so the last node
    // lands on hi up to rounding.
    static Grid over_interval(double lo, double hi, double h);
    static Grid over_rect(Point lo, Point hi, double h);
    // Same box, spacing halved.
    Grid refined() const;
};

// A scalar field sampled at grid nodes, interpreted as identically zero
// outside the box. Values are finite by construction.
struct GridField {
    Grid grid;
    std::vector<double> values;

    double max_abs() const;
    bool is_zero() const;
    // Largest |node| over nodes with a nonzero value; 0 for the zero field.
    double support_radius() const;
    // Diameter of the nonzero-value node set (at least h when nonzero).
    double support_diameter() const;
};

GridField make_field(const Grid& grid, const std::function<double(Point)>& generator);

// Field file: header "dim h n1 [n2] origin..." then node values row-major.
GridField read_field(std::istream& in);
GridField read_field_file(const std::string& path);
void write_field(std::ostream& out, const GridField& f);
void write_field_file(const std::string& path, const GridField& f);

// Pointwise algebra. Grids must share layout.
GridField abs_field(const GridField& f);
GridField scale(const GridField& f, double c);
GridField add(const GridField& f, const GridField& g);
GridField subtract(const GridField& f, const GridField& g);
// Zero the values at nodes with |node| > r (keep inside B(0,r)).
GridField keep_inside(const GridField& f, double r);
// Zero the values at nodes with |node| <= r (keep the tail).
GridField keep_outside(const GridField& f, double r);
// Same box at spacing h/2; new nodes linearly interpolated.
GridField refine_linear(const GridField& f);

// Mean of the field over lattice nodes within Euclidean distance <= radius
// of the center. Lattice nodes outside the box count toward the node
// count but contribute zero (zero extension). Throws empty_ball_error if
// no lattice node is inside.
double ball_average(const GridField& field, const Ball& ball);

// Discrete radius candidates {k h/2 : k = 1..ceil(2 r_max / h)} prefixed by
// 0.0, the marker for the r -> 0+ limit (whose value is |f(x)|).
std::vector<double> candidate_radii(const Grid& grid, double r_max);

constexpr double kZeroRadiusMarker = 0.0;

} // namespace phimax
