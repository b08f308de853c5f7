#include "phimax/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phimax/errors.hpp"
#include "phimax/util.hpp"

extern char** environ;

namespace phimax {

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

} // namespace

std::string KVConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = map.find(key);
    return it == map.end() ? fallback : it->second;
}

std::string KVConfig::canonical() const {
    std::ostringstream out;
    for (const auto& [k, v] : map) out << k << " = " << v << '\n';
    return out.str();
}

KVConfig KVConfig::parse_text(const std::string& text) {
    KVConfig kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> issues;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected `key = value`");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            issues.push_back("line " + std::to_string(lineno) + ": empty key");
        else
            kv.map[key] = val;
    }
    if (!issues.empty()) throw config_error(issues);
    return kv;
}

KVConfig KVConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void KVConfig::apply_env(const char* prefix) {
    const std::string pre(prefix);
    for (char** env = environ; env && *env; ++env) {
        const std::string entry(*env);
        if (entry.rfind(pre, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string key = entry.substr(pre.size(), eq - pre.size());
        // dots are spelled "__" in environment names
        for (std::size_t p; (p = key.find("__")) != std::string::npos;)
            key.replace(p, 2, ".");
        map[key] = entry.substr(eq + 1);
    }
}

namespace {

// Typed getters that collect issues instead of throwing one at a time.
struct Reader {
    const KVConfig& kv;
    std::vector<std::string>& issues;

    bool has(const std::string& key) const { return kv.has(key); }

    double num(const std::string& key, double fallback, bool required = false) const {
        if (!kv.has(key)) {
            if (required) issues.push_back(key + ": required");
            return fallback;
        }
        const std::string s = kv.get(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            issues.push_back(key + ": not a number: `" + s + "`");
            return fallback;
        }
    }

    long integer(const std::string& key, long fallback, bool required = false) const {
        const double v = num(key, static_cast<double>(fallback), required);
        return static_cast<long>(v);
    }

    std::string str(const std::string& key, const std::string& fallback,
                    bool required = false) const {
        if (!kv.has(key) && required) issues.push_back(key + ": required");
        return kv.get(key, fallback);
    }

    double positive(const std::string& key, double fallback, bool required = false) const {
        const double v = num(key, fallback, required);
        if (v <= 0.0) issues.push_back(key + ": must be positive");
        return v;
    }
};

} // namespace

SpatialFunction build_spatial(const KVConfig& kv, const std::string& prefix,
                              std::vector<std::string>& issues) {
    Reader rd{kv, issues};
    const std::string kind = rd.str(prefix + ".kind", "", true);
    if (kind == "constant") return SpatialFunction::constant(rd.num(prefix + ".c0", 0.0, true));
    if (kind == "affine")
        return SpatialFunction::affine(rd.num(prefix + ".c0", 0.0, true),
                                       rd.num(prefix + ".gx", 0.0, true),
                                       rd.num(prefix + ".gy", 0.0));
    if (kind == "clamped_ramp")
        return SpatialFunction::clamped_ramp(
            rd.num(prefix + ".c0", 0.0, true), rd.num(prefix + ".slope", 1.0, true),
            rd.num(prefix + ".x0", 0.0), rd.positive(prefix + ".width", 1.0));
    if (kind == "gaussian_bump")
        return SpatialFunction::gaussian_bump(
            rd.num(prefix + ".c0", 0.0, true), rd.num(prefix + ".amp", 1.0, true),
            {rd.num(prefix + ".cx", 0.0), rd.num(prefix + ".cy", 0.0)},
            rd.positive(prefix + ".width", 1.0));
    if (kind == "log_decay")
        return SpatialFunction::log_decay(rd.num(prefix + ".c0", 0.0, true),
                                          rd.num(prefix + ".amp", 1.0, true));
    if (kind == "file") {
        const std::string path = rd.str(prefix + ".path", "", true);
        if (!path.empty()) {
            if (!std::filesystem::exists(path)) {
                issues.push_back(prefix + ".path: file not found: " + path);
            } else {
                try {
                    auto samples = std::make_shared<GridField>(read_field_file(path));
                    return SpatialFunction::from_samples(samples);
                } catch (const std::exception& e) {
                    issues.push_back(prefix + ".path: " + std::string(e.what()));
                }
            }
        }
        return SpatialFunction::constant(1.0);
    }
    if (!kind.empty()) issues.push_back(prefix + ".kind: unknown spatial function `" + kind + "`");
    return SpatialFunction::constant(1.0);
}

namespace {

double smoothstep(double t) {
    const double s = std::clamp(t, 0.0, 1.0);
    return s * s * (3.0 - 2.0 * s);
}

double quartic_bump(double d, double width) {
    const double s = d / width;
    if (s >= 1.0) return 0.0;
    const double t = 1.0 - s * s;
    return t * t;
}

} // namespace

GridField build_field(const Grid& grid, const KVConfig& kv, const std::string& prefix,
                      std::uint64_t seed, std::vector<std::string>& issues) {
    Reader rd{kv, issues};
    const std::string kind = rd.str(prefix + ".kind", "", true);
    const double amp = rd.num(prefix + ".amplitude", 1.0);

    const auto zero = [&] { return make_field(grid, [](Point) { return 0.0; }); };

    if (kind == "zero") return zero();
    if (kind == "constant") return make_field(grid, [=](Point) { return amp; });
    if (kind == "indicator") {
        const double lo = rd.num(prefix + ".lo", 0.0, true);
        const double hi = rd.num(prefix + ".hi", 1.0, true);
        if (hi <= lo) issues.push_back(prefix + ": indicator needs lo < hi");
        return make_field(grid, [=](Point p) { return p.x >= lo && p.x <= hi ? amp : 0.0; });
    }
    if (kind == "tent") {
        const double c = rd.num(prefix + ".center", 0.0);
        const double w = rd.positive(prefix + ".width", 1.0);
        return make_field(grid,
                          [=](Point p) { return amp * std::max(0.0, 1.0 - dist(p, {c, 0.0}) / w); });
    }
    if (kind == "quartic_bump") {
        const double cx = rd.num(prefix + ".center", 0.0);
        const double cy = rd.num(prefix + ".center_y", 0.0);
        const double w = rd.positive(prefix + ".width", 1.0);
        return make_field(grid,
                          [=](Point p) { return amp * quartic_bump(dist(p, {cx, cy}), w); });
    }
    if (kind == "cos2_bump") {
        const double c = rd.num(prefix + ".center", 0.0);
        const double w = rd.positive(prefix + ".width", 1.0);
        return make_field(grid, [=](Point p) {
            const double d = dist(p, {c, 0.0});
            if (d >= w) return 0.0;
            const double v = std::cos(M_PI * d / (2.0 * w));
            return amp * v * v;
        });
    }
    if (kind == "gaussian") {
        const double c = rd.num(prefix + ".center", 0.0);
        const double w = rd.positive(prefix + ".width", 1.0);
        return make_field(grid, [=](Point p) {
            const double d = dist(p, {c, 0.0});
            return amp * std::exp(-(d * d) / (w * w));
        });
    }
    if (kind == "smooth_plateau") {
        // 1 on [lo+roll, hi-roll], smooth C^1 rolloff of width `roll`
        const double lo = rd.num(prefix + ".lo", -1.0, true);
        const double hi = rd.num(prefix + ".hi", 1.0, true);
        const double roll = rd.positive(prefix + ".roll", 0.5);
        if (hi - lo <= 2.0 * roll) issues.push_back(prefix + ": plateau narrower than rolloffs");
        return make_field(grid, [=](Point p) {
            return amp * smoothstep((p.x - lo) / roll) * smoothstep((hi - p.x) / roll);
        });
    }
    if (kind == "random_bumps") {
        const long count = rd.integer(prefix + ".count", 3);
        const double w = rd.positive(prefix + ".width", 1.0);
        SplitMix64 rng(seed ^ fnv1a(prefix));
        const Box box = grid.box();
        // centers inset by the width so no bump is clipped by the box
        const double lx = std::min(box.lo.x + w, box.hi.x), hx = std::max(box.hi.x - w, box.lo.x);
        const double ly = std::min(box.lo.y + w, box.hi.y), hy = std::max(box.hi.y - w, box.lo.y);
        std::vector<std::pair<Point, double>> bumps;
        for (long b = 0; b < count; ++b) {
            Point c{rng.uniform(lx, hx), grid.dim == 2 ? rng.uniform(ly, hy) : 0.0};
            bumps.emplace_back(c, rng.uniform(0.25, 1.0) * amp);
        }
        return make_field(grid, [=](Point p) {
            double v = 0.0;
            for (const auto& [c, a] : bumps) v += a * quartic_bump(dist(p, c), w);
            return v;
        });
    }
    if (kind == "file") {
        const std::string path = rd.str(prefix + ".path", "", true);
        if (path.empty() || !std::filesystem::exists(path)) {
            issues.push_back(prefix + ".path: file not found: " + path);
            return zero();
        }
        try {
            GridField f = read_field_file(path);
            if (!f.grid.same_layout(grid))
                issues.push_back(prefix + ".path: field file grid does not match grid spec");
            return f;
        } catch (const std::exception& e) {
            issues.push_back(prefix + ".path: " + std::string(e.what()));
            return zero();
        }
    }
    if (!kind.empty()) issues.push_back(prefix + ".kind: unknown field generator `" + kind + "`");
    return zero();
}

namespace {

PhiFunction build_phi(const KVConfig& kv, const Box& box, std::vector<std::string>& issues) {
    Reader rd{kv, issues};
    const std::string family = rd.str("phi.family", "", true);
    const Box domain = box;

    const auto fallback = [&] { return PhiFunction::power_law(2.0, domain); };

    try {
        if (family == "power_law") {
            const double p = rd.num("phi.p", 2.0, true);
            if (p < 1.0) {
                issues.push_back("phi.p: must be >= 1");
                return fallback();
            }
            return PhiFunction::power_law(p, domain);
        }
        if (family == "autonomous") {
            const std::string kind = rd.str("phi.kind", "p_log");
            const double p = rd.num("phi.p", 2.0, true);
            if (p < 1.0) {
                issues.push_back("phi.p: must be >= 1");
                return fallback();
            }
            if (kind == "power")
                return PhiFunction::autonomous([p](double t) { return std::pow(t, p); }, p, domain,
                                               "autonomous_power");
            if (kind == "p_log")
                return PhiFunction::autonomous(
                    [p](double t) { return std::pow(t, p) * std::log(std::exp(1.0) + t); }, p,
                    domain, "autonomous_p_log");
            issues.push_back("phi.kind: unknown autonomous integrand `" + kind + "`");
            return fallback();
        }
        if (family == "variable_exponent") {
            if (!kv.has("phi.p_field.kind")) {
                issues.push_back("phi.p_field.kind: required");
                return fallback();
            }
            SpatialFunction pf = build_spatial(kv, "phi.p_field", issues);
            if (!issues.empty()) return fallback();
            return PhiFunction::variable_exponent(pf, domain);
        }
        if (family == "double_phase") {
            const double p = rd.num("phi.p", 2.0, true);
            const double q = rd.num("phi.q", 0.0, true);
            if (q <= p) issues.push_back("phi.q: must exceed phi.p");
            if (!kv.has("phi.a_field.kind")) issues.push_back("phi.a_field.kind: required");
            SpatialFunction af = kv.has("phi.a_field.kind")
                                     ? build_spatial(kv, "phi.a_field", issues)
                                     : SpatialFunction::constant(0.0);
            if (q <= p || p < 1.0) return fallback();
            return PhiFunction::double_phase(p, q, af, domain);
        }
        if (!family.empty()) issues.push_back("phi.family: unknown family `" + family + "`");
    } catch (const std::exception& e) {
        issues.push_back(std::string("phi: ") + e.what());
    }
    return fallback();
}

} // namespace

ExperimentConfig build_config(KVConfig kv) {
    std::vector<std::string> issues;
    Reader rd{kv, issues};

    // grid block
    const long dim = rd.integer("grid.dim", 1, true);
    const double h = rd.positive("grid.h", 0.015625, true);
    Grid grid;
    if (dim != 1 && dim != 2) issues.push_back("grid.dim: must be 1 or 2");
    const double lx = rd.num("grid.lo.x", -4.0, true);
    const double hx = rd.num("grid.hi.x", 4.0, true);
    if (hx <= lx) issues.push_back("grid.hi.x: must exceed grid.lo.x");
    double ly = 0.0, hy = 0.0;
    if (dim == 2) {
        ly = rd.num("grid.lo.y", -4.0, true);
        hy = rd.num("grid.hi.y", 4.0, true);
        if (hy <= ly) issues.push_back("grid.hi.y: must exceed grid.lo.y");
    }
    if (issues.empty()) {
        grid = dim == 1 ? Grid::over_interval(lx, hx, h)
                        : Grid::over_rect({lx, ly}, {hx, hy}, h);
    }

    ExperimentConfig cfg;
    cfg.kv = std::move(kv);
    cfg.grid = grid;
    cfg.phi = PhiFunction::power_law(2.0, grid.box());
    Reader rd2{cfg.kv, issues};

    cfg.norm_tol = rd2.positive("norm.tol", 1e-8);
    cfg.r_max = rd2.positive("maximal.r_max", 8.0);
    cfg.radius_tol = rd2.positive("maximal.radius_tol", 1e-9);
    cfg.seed = static_cast<std::uint64_t>(rd2.integer("seed", 1));
    cfg.threads = static_cast<int>(rd2.integer("threads", 1));
    cfg.out_dir = rd2.str("out.dir", "");
    if (cfg.r_max < h) issues.push_back("maximal.r_max: must be at least grid.h");

    if (issues.empty()) {
        cfg.phi = build_phi(cfg.kv, grid.box(), issues);

        // field blocks: field.0.*, field.1.*, ...
        for (int idx = 0;; ++idx) {
            const std::string prefix = "field." + std::to_string(idx);
            if (!cfg.kv.has(prefix + ".kind")) break;
            GridField f = build_field(grid, cfg.kv, prefix, cfg.seed, issues);
            const std::string name =
                cfg.kv.get(prefix + ".name", cfg.kv.get(prefix + ".kind") + "_" +
                                                 std::to_string(idx));
            cfg.fields.emplace_back(name, std::move(f));
        }
        if (cfg.fields.empty()) issues.push_back("field.0.kind: at least one field is required");
    }

    cfg.verify_R = rd2.positive("verify.R", 2.0);
    cfg.verify_eps = rd2.positive("verify.eps", 0.1);
    cfg.verify_draws = static_cast<int>(rd2.integer("verify.draws", 100));

    const std::string pk = rd2.str("continuity.kind", "bump");
    const double pamp = rd2.positive("continuity.amplitude", 0.5);
    const double pdecay = rd2.positive("continuity.decay", 0.8);
    if (pdecay >= 1.0) issues.push_back("continuity.decay: must be below 1");
    if (pk == "scale")
        cfg.continuity_family = PerturbationFamily::scale_family(pamp, pdecay);
    else if (pk == "bump")
        cfg.continuity_family = PerturbationFamily::bump_family(
            pamp, pdecay, {rd2.num("continuity.center", 0.0), rd2.num("continuity.center_y", 0.0)},
            rd2.positive("continuity.width", 1.0));
    else if (pk == "noise")
        cfg.continuity_family = PerturbationFamily::noise_family(pamp, pdecay, cfg.seed);
    else
        issues.push_back("continuity.kind: unknown perturbation family `" + pk + "`");

    cfg.continuity.m_steps = static_cast<int>(rd2.integer("continuity.m_steps", 32));
    cfg.continuity.r_max = rd2.positive("continuity.r_max", cfg.r_max);
    cfg.continuity.R = rd2.positive("continuity.R", 2.0);
    cfg.continuity.lambda = rd2.positive("continuity.lambda", 0.25);
    cfg.continuity.delta0 = rd2.positive("continuity.delta0", 0.25);
    cfg.continuity.norm_tol = cfg.norm_tol;
    cfg.continuity.radius_tol_rel = cfg.radius_tol;
    cfg.continuity.threads = cfg.threads;
    cfg.continuity_ratio = rd2.positive("continuity.ratio", 0.1);
    if (cfg.continuity.m_steps < 2) issues.push_back("continuity.m_steps: must be at least 2");

    if (!issues.empty()) throw config_error(issues);
    cfg.hash = fnv1a(cfg.kv.canonical());
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    KVConfig kv = KVConfig::parse_text(text);
    kv.apply_env();
    return build_config(std::move(kv));
}

ExperimentConfig parse_config(const std::string& path) {
    KVConfig kv = KVConfig::parse_file(path);
    kv.apply_env();
    return build_config(std::move(kv));
}

} // namespace phimax
