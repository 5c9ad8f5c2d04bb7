#include "sphmesh/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ConfigError(os.str());
}

std::vector<double> parse_numbers(const std::string& v, const std::string& origin, int line) {
    std::istringstream is(v);
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    if (!is.eof()) fail(origin, line, "malformed numeric list '" + v + "'");
    return out;
}

Vec3 parse_vec(const std::string& v, const std::string& origin, int line) {
    auto nums = parse_numbers(v, origin, line);
    if (nums.size() < 2 || nums.size() > 3) fail(origin, line, "expected 2 or 3 coordinates");
    return {nums[0], nums[1], nums.size() == 3 ? nums[2] : 0.0};
}

double parse_double(const std::string& v, const std::string& origin, int line) {
    auto nums = parse_numbers(v, origin, line);
    if (nums.size() != 1) fail(origin, line, "expected one number, got '" + v + "'");
    return nums[0];
}

long long parse_int(const std::string& v, const std::string& origin, int line) {
    try {
        std::size_t pos;
        long long x = std::stoll(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (...) {
    }
    fail(origin, line, "expected an integer, got '" + v + "'");
}

bool parse_bool(const std::string& v, const std::string& origin, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    fail(origin, line, "expected a boolean, got '" + v + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::map<int, std::pair<bool, std::vector<Vec3>>> curve_decl;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.empty()) fail(origin, lineno, "empty value for '" + key + "'");

        if (key == "dim") {
            cfg.dim = static_cast<int>(parse_int(val, origin, lineno));
            if (cfg.dim != 2 && cfg.dim != 3) fail(origin, lineno, "dim must be 2 or 3");
        } else if (key == "geometry") {
            if (val == "circle") cfg.geometry = GeometryKind::Circle;
            else if (val == "sphere") cfg.geometry = GeometryKind::Sphere;
            else if (val == "box") cfg.geometry = GeometryKind::Box;
            else if (val == "zalesak") cfg.geometry = GeometryKind::Zalesak;
            else if (val == "field") cfg.geometry = GeometryKind::Field;
            else fail(origin, lineno, "unknown geometry '" + val + "'");
        } else if (key == "geometry.center") {
            cfg.geo_center = parse_vec(val, origin, lineno);
        } else if (key == "geometry.radius") {
            cfg.geo_radius = parse_double(val, origin, lineno);
        } else if (key == "geometry.box_min") {
            cfg.geo_box_min = parse_vec(val, origin, lineno);
        } else if (key == "geometry.box_max") {
            cfg.geo_box_max = parse_vec(val, origin, lineno);
        } else if (key == "geometry.slot_width") {
            cfg.geo_slot_width = parse_double(val, origin, lineno);
        } else if (key == "geometry.slot_length") {
            cfg.geo_slot_length = parse_double(val, origin, lineno);
        } else if (key == "geometry.field_file") {
            cfg.geo_field_file = val;
        } else if (key == "grid_spacing") {
            cfg.grid_spacing = parse_double(val, origin, lineno);
        } else if (key == "sizing") {
            if (val == "constant") cfg.sizing = SizingSpecKind::Constant;
            else if (val == "radial") cfg.sizing = SizingSpecKind::Radial;
            else if (val == "gridded") cfg.sizing = SizingSpecKind::Gridded;
            else fail(origin, lineno, "unknown sizing '" + val + "'");
        } else if (key == "sizing.h_min") {
            cfg.h_min = parse_double(val, origin, lineno);
        } else if (key == "sizing.h_max") {
            cfg.h_max = parse_double(val, origin, lineno);
        } else if (key == "sizing.h0") {
            cfg.sizing_h0 = parse_double(val, origin, lineno);
        } else if (key == "sizing.slope") {
            cfg.sizing_slope = parse_double(val, origin, lineno);
        } else if (key == "sizing.r0") {
            cfg.sizing_r0 = parse_double(val, origin, lineno);
        } else if (key == "sizing.focus") {
            cfg.sizing_focus = parse_vec(val, origin, lineno);
        } else if (key == "sizing.field_file") {
            cfg.sizing_field_file = val;
        } else if (key.rfind("curve.", 0) == 0) {
            int id = static_cast<int>(parse_int(key.substr(6), origin, lineno));
            std::istringstream vs(val);
            std::string closed_tok;
            vs >> closed_tok;
            bool closed = closed_tok == "closed";
            if (!closed && closed_tok != "open")
                fail(origin, lineno, "curve value must start with open|closed");
            std::vector<double> nums;
            double x;
            while (vs >> x) nums.push_back(x);
            if (nums.size() % 3 != 0 || nums.size() < 6)
                fail(origin, lineno, "curve needs x y z triplets (at least 2 points)");
            std::vector<Vec3> pts;
            for (std::size_t n = 0; n < nums.size(); n += 3)
                pts.push_back({nums[n], nums[n + 1], nums[n + 2]});
            if (curve_decl.count(id)) fail(origin, lineno, "duplicate curve id");
            curve_decl[id] = {closed, std::move(pts)};
        } else if (key.rfind("singularity.", 0) == 0) {
            int id = static_cast<int>(parse_int(key.substr(12), origin, lineno));
            cfg.singularities.push_back({id, parse_vec(val, origin, lineno)});
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(val, origin, lineno));
            cfg.has_seed = true;
        } else if (key == "mode") {
            if (val == "improved") cfg.mode = RunMode::Improved;
            else if (val == "baseline") cfg.mode = RunMode::Baseline;
            else fail(origin, lineno, "mode must be improved|baseline");
        } else if (key == "correction") {
            cfg.correction = parse_bool(val, origin, lineno);
        } else if (key == "init_sampling") {
            if (val == "density") cfg.init_sampling = InitSampling::Density;
            else if (val == "uniform") cfg.init_sampling = InitSampling::Uniform;
            else fail(origin, lineno, "init_sampling must be density|uniform");
        } else if (key == "nullify_period") {
            cfg.nullify_period = parse_int(val, origin, lineno);
        } else if (key == "damping") {
            cfg.damping = parse_double(val, origin, lineno);
        } else if (key == "dt_collapse_ratio") {
            cfg.dt_collapse_ratio = parse_double(val, origin, lineno);
        } else if (key == "transition_steps") {
            cfg.transition_steps = parse_int(val, origin, lineno);
        } else if (key == "phase_two_budget") {
            cfg.phase_two_budget = parse_int(val, origin, lineno);
        } else if (key == "max_steps") {
            cfg.max_steps = parse_int(val, origin, lineno);
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "snapshot_cadence") {
            cfg.snapshot_cadence = parse_int(val, origin, lineno);
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(parse_int(val, origin, lineno));
        } else if (key == "deterministic") {
            cfg.deterministic = parse_bool(val, origin, lineno);
        } else {
            fail(origin, lineno, "unknown key '" + key + "'");
        }
    }

    for (auto& [id, decl] : curve_decl) cfg.curves.emplace_back(id, decl.second, decl.first);

    if (const char* env = std::getenv("SPHMESH_OUTPUT_DIR")) cfg.output_dir = env;

    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate(const RunConfig& cfg) {
    if (!cfg.has_seed) throw ConfigError("config: 'seed' is required (no wall-clock default)");
    if (cfg.h_min >= cfg.h_max) throw ConfigError("config: need sizing.h_min < sizing.h_max");
    if (cfg.h_min <= 0.0) throw ConfigError("config: sizing.h_min must be positive");
    if (cfg.damping < 0.0 || cfg.damping > 0.2)
        throw ConfigError("config: damping must lie in [0, 0.2]");
    if (cfg.nullify_period < 1) throw ConfigError("config: nullify_period must be >= 1");
    if (cfg.snapshot_cadence < 1) throw ConfigError("config: snapshot_cadence must be >= 1");
    if (cfg.dim == 3 && cfg.geometry == GeometryKind::Circle)
        throw ConfigError("config: use geometry = sphere in 3D");
    if (cfg.dim == 2 && cfg.geometry == GeometryKind::Sphere)
        throw ConfigError("config: use geometry = circle in 2D");
    if (cfg.geometry == GeometryKind::Zalesak && cfg.dim != 2)
        throw ConfigError("config: zalesak geometry is 2D");
}

std::string canonical_config(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "dim = " << cfg.dim << "\n";
    switch (cfg.geometry) {
        case GeometryKind::Circle: os << "geometry = circle\n"; break;
        case GeometryKind::Sphere: os << "geometry = sphere\n"; break;
        case GeometryKind::Box: os << "geometry = box\n"; break;
        case GeometryKind::Zalesak: os << "geometry = zalesak\n"; break;
        case GeometryKind::Field: os << "geometry = field\n"; break;
    }
    auto vec = [&](const Vec3& v) {
        std::ostringstream s;
        s.precision(17);
        s << v.x << " " << v.y << " " << v.z;
        return s.str();
    };
    os << "geometry.center = " << vec(cfg.geo_center) << "\n";
    os << "geometry.radius = " << cfg.geo_radius << "\n";
    os << "geometry.box_min = " << vec(cfg.geo_box_min) << "\n";
    os << "geometry.box_max = " << vec(cfg.geo_box_max) << "\n";
    os << "geometry.slot_width = " << cfg.geo_slot_width << "\n";
    os << "geometry.slot_length = " << cfg.geo_slot_length << "\n";
    if (!cfg.geo_field_file.empty()) os << "geometry.field_file = " << cfg.geo_field_file << "\n";
    if (cfg.grid_spacing > 0.0) os << "grid_spacing = " << cfg.grid_spacing << "\n";
    switch (cfg.sizing) {
        case SizingSpecKind::Constant: os << "sizing = constant\n"; break;
        case SizingSpecKind::Radial: os << "sizing = radial\n"; break;
        case SizingSpecKind::Gridded: os << "sizing = gridded\n"; break;
    }
    os << "sizing.h_min = " << cfg.h_min << "\n";
    os << "sizing.h_max = " << cfg.h_max << "\n";
    os << "sizing.h0 = " << cfg.sizing_h0 << "\n";
    os << "sizing.slope = " << cfg.sizing_slope << "\n";
    os << "sizing.r0 = " << cfg.sizing_r0 << "\n";
    os << "sizing.focus = " << vec(cfg.sizing_focus) << "\n";
    if (!cfg.sizing_field_file.empty())
        os << "sizing.field_file = " << cfg.sizing_field_file << "\n";
    for (const auto& c : cfg.curves) {
        os << "curve." << c.id() << " = " << (c.closed() ? "closed" : "open");
        for (const auto& p : c.points()) os << "  " << vec(p);
        os << "\n";
    }
    for (const auto& s : cfg.singularities)
        os << "singularity." << s.id << " = " << vec(s.position) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "mode = " << (cfg.mode == RunMode::Improved ? "improved" : "baseline") << "\n";
    os << "correction = " << (cfg.correction ? "on" : "off") << "\n";
    os << "init_sampling = "
       << (cfg.init_sampling == InitSampling::Density ? "density" : "uniform") << "\n";
    os << "nullify_period = " << cfg.nullify_period << "\n";
    os << "damping = " << cfg.damping << "\n";
    os << "dt_collapse_ratio = " << cfg.dt_collapse_ratio << "\n";
    os << "transition_steps = " << cfg.transition_steps << "\n";
    os << "phase_two_budget = " << cfg.phase_two_budget << "\n";
    os << "max_steps = " << cfg.max_steps << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "snapshot_cadence = " << cfg.snapshot_cadence << "\n";
    os << "workers = " << cfg.workers << "\n";
    os << "deterministic = " << (cfg.deterministic ? "true" : "false") << "\n";
    return os.str();
}

} // namespace sphmesh
