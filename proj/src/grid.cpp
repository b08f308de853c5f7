#include "phimax/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/util.hpp"

namespace phimax {

namespace {

int count_nodes(double lo, double hi, double h) {
    // last node lands on hi up to rounding
    return static_cast<int>(std::llround((hi - lo) / h)) + 1;
}

void require_valid(const Grid& g) {
    if (g.h <= 0.0) throw argument_error("grid spacing must be positive");
    if (g.dim != 1 && g.dim != 2) throw argument_error("grid dimension must be 1 or 2");
    if (g.extents[0] < 2 || (g.dim == 2 && g.extents[1] < 2))
        throw argument_error("grid needs at least 2 nodes per axis");
}

} // namespace

Grid Grid::over_interval(double lo, double hi, double h) {
    Grid g;
    g.dim = 1;
    g.origin = {lo, 0.0};
    g.h = h;
    g.extents = {count_nodes(lo, hi, h), 1};
    require_valid(g);
    return g;
}

Grid Grid::over_rect(Point lo, Point hi, double h) {
    Grid g;
    g.dim = 2;
    g.origin = lo;
    g.h = h;
    g.extents = {count_nodes(lo.x, hi.x, h), count_nodes(lo.y, hi.y, h)};
    require_valid(g);
    return g;
}

Grid Grid::refined() const {
    Grid g = *this;
    g.h = h / 2.0;
    g.extents = {2 * (extents[0] - 1) + 1, dim == 2 ? 2 * (extents[1] - 1) + 1 : 1};
    return g;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

bool GridField::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double GridField::support_radius() const {
    double r = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) r = std::max(r, norm(grid.node(i)));
    return r;
}

double GridField::support_diameter() const {
    double lo_x = std::numeric_limits<double>::max(), hi_x = std::numeric_limits<double>::lowest();
    double lo_y = lo_x, hi_y = hi_x;
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) continue;
        any = true;
        const Point p = grid.node(i);
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    if (!any) return 0.0;
    return std::max(grid.h, std::hypot(hi_x - lo_x, hi_y - lo_y));
}

GridField make_field(const Grid& grid, const std::function<double(Point)>& generator) {
    require_valid(grid);
    GridField f{grid, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double v = generator(grid.node(i));
        if (!std::isfinite(v)) throw argument_error("field generator produced a non-finite value");
        f.values[i] = v;
    }
    return f;
}

GridField read_field(std::istream& in) {
    int dim = 0;
    double h = 0.0;
    if (!(in >> dim >> h)) throw format_error("field file: bad header");
    if (dim != 1 && dim != 2) throw format_error("field file: dim must be 1 or 2");
    Grid g;
    g.dim = dim;
    g.h = h;
    if (dim == 1) {
        if (!(in >> g.extents[0] >> g.origin.x)) throw format_error("field file: bad 1-D header");
        g.extents[1] = 1;
    } else {
        if (!(in >> g.extents[0] >> g.extents[1] >> g.origin.x >> g.origin.y))
            throw format_error("field file: bad 2-D header");
    }
    require_valid(g);
    GridField f{g, std::vector<double>(g.size())};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (!(in >> f.values[i]))
            throw format_error("field file: expected " + std::to_string(f.values.size()) +
                               " values, got " + std::to_string(i));
        if (!std::isfinite(f.values[i])) throw format_error("field file: non-finite value");
    }
    double extra;
    if (in >> extra) throw format_error("field file: trailing values beyond the declared shape");
    return f;
}

GridField read_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open field file: " + path);
    return read_field(in);
}

namespace {

void print_double(std::ostream& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.write(buf, res.ptr - buf);
}

} // namespace

void write_field(std::ostream& out, const GridField& f) {
    const Grid& g = f.grid;
    out << g.dim << ' ';
    print_double(out, g.h);
    out << ' ' << g.extents[0];
    if (g.dim == 2) out << ' ' << g.extents[1];
    out << ' ';
    print_double(out, g.origin.x);
    if (g.dim == 2) {
        out << ' ';
        print_double(out, g.origin.y);
    }
    out << '\n';
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        print_double(out, f.values[i]);
        out << (((i + 1) % 8 == 0) ? '\n' : ' ');
    }
    out << '\n';
}

void write_field_file(const std::string& path, const GridField& f) {
    std::ostringstream body;
    write_field(body, f);
    std::ofstream out(path);
    if (!out) throw format_error("cannot write field file: " + path);
    out << body.str();
}

namespace {

GridField combine(const GridField& f, const GridField& g, bool add_op) {
    if (!f.grid.same_layout(g.grid)) throw argument_error("field grids do not match");
    GridField out{f.grid, std::vector<double>(f.values.size())};
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = add_op ? f.values[i] + g.values[i] : f.values[i] - g.values[i];
    return out;
}

} // namespace

GridField abs_field(const GridField& f) {
    GridField out = f;
    for (double& v : out.values) v = std::fabs(v);
    return out;
}

GridField scale(const GridField& f, double c) {
    GridField out = f;
    for (double& v : out.values) v *= c;
    return out;
}

GridField add(const GridField& f, const GridField& g) { return combine(f, g, true); }
GridField subtract(const GridField& f, const GridField& g) { return combine(f, g, false); }

GridField keep_inside(const GridField& f, double r) {
    GridField out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (norm(f.grid.node(i)) > r) out.values[i] = 0.0;
    return out;
}

GridField keep_outside(const GridField& f, double r) {
    GridField out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (norm(f.grid.node(i)) <= r) out.values[i] = 0.0;
    return out;
}

GridField refine_linear(const GridField& f) {
    const Grid fine = f.grid.refined();
    GridField out{fine, std::vector<double>(fine.size())};
    const Grid& g = f.grid;
    for (int j = 0; j < fine.extents[1]; ++j)
        for (int i = 0; i < fine.extents[0]; ++i) {
            const int ci = i / 2, cj = j / 2;
            const bool mi = (i % 2) != 0, mj = (j % 2) != 0;
            double v;
            if (!mi && !mj) {
                v = f.values[g.index(ci, cj)];
            } else if (mi && !mj) {
                v = 0.5 * (f.values[g.index(ci, cj)] + f.values[g.index(ci + 1, cj)]);
            } else if (!mi && mj) {
                v = 0.5 * (f.values[g.index(ci, cj)] + f.values[g.index(ci, cj + 1)]);
            } else {
                v = 0.25 * (f.values[g.index(ci, cj)] + f.values[g.index(ci + 1, cj)] +
                            f.values[g.index(ci, cj + 1)] + f.values[g.index(ci + 1, cj + 1)]);
            }
            out.values[fine.index(i, j)] = v;
        }
    return out;
}

double ball_average(const GridField& field, const Ball& ball) {
    if (ball.radius <= 0.0) throw argument_error("ball radius must be positive");
    const Grid& g = field.grid;
    const double r2 = ball.radius * ball.radius;

    // lattice index window around the ball; indices may leave the box
    const int i_lo = static_cast<int>(std::ceil((ball.center.x - ball.radius - g.origin.x) / g.h - 1e-12));
    const int i_hi = static_cast<int>(std::floor((ball.center.x + ball.radius - g.origin.x) / g.h + 1e-12));
    int j_lo = 0, j_hi = 0;
    if (g.dim == 2) {
        j_lo = static_cast<int>(std::ceil((ball.center.y - ball.radius - g.origin.y) / g.h - 1e-12));
        j_hi = static_cast<int>(std::floor((ball.center.y + ball.radius - g.origin.y) / g.h + 1e-12));
    }

    long count = 0;
    double sum = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double dy = g.dim == 2 ? g.origin.y + j * g.h - ball.center.y : 0.0;
        for (int i = i_lo; i <= i_hi; ++i) {
            const double dx = g.origin.x + i * g.h - ball.center.x;
            if (dx * dx + dy * dy > r2 * (1.0 + 1e-14)) continue;
            ++count;
            if (g.in_bounds(i, j)) sum += field.values[g.index(i, j)];
        }
    }
    if (count == 0) throw empty_ball_error("ball contains no lattice node");
    return sum / static_cast<double>(count);
}

std::vector<double> candidate_radii(const Grid& grid, double r_max) {
    if (r_max < grid.h) throw argument_error("r_max must be at least the grid spacing");
    const int k_max = static_cast<int>(std::ceil(2.0 * r_max / grid.h - 1e-12));
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(k_max) + 1);
    radii.push_back(kZeroRadiusMarker);
    for (int k = 1; k <= k_max; ++k) radii.push_back(k * grid.h / 2.0);
    return radii;
}

} // namespace phimax
