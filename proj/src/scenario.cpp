#include "swarm/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace swarm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct IniDoc {
    // section -> key -> value, insertion order preserved separately for errors
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<ConfigError> errors;
};

IniDoc parse_ini(const std::string& text) {
    IniDoc doc;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                doc.errors.push_back({"line " + std::to_string(lineno),
                                      "malformed section header: " + line});
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            doc.sections[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            doc.errors.push_back({"line " + std::to_string(lineno),
                                  "expected key = value: " + line});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            doc.errors.push_back({"line " + std::to_string(lineno), "empty key"});
            continue;
        }
        doc.sections[section][key] = value;
    }
    return doc;
}

// Typed key reader: records every key it touches so leftovers can be
// reported as unknown, and collects parse failures with field paths.
class Reader {
public:
    Reader(const IniDoc& doc, std::vector<ConfigError>& errors)
        : doc_(doc), errors_(errors) {}

    bool has(const std::string& sec, const std::string& key) {
        auto s = doc_.sections.find(sec);
        return s != doc_.sections.end() && s->second.count(key) > 0;
    }

    template <typename F>
    void get(const std::string& sec, const std::string& key, F&& parse) {
        consumed_.insert({sec, key});
        auto s = doc_.sections.find(sec);
        if (s == doc_.sections.end()) return;
        auto k = s->second.find(key);
        if (k == s->second.end()) return;
        if (!parse(k->second)) {
            errors_.push_back({field(sec, key), "cannot parse value '" + k->second + "'"});
        }
    }

    void num(const std::string& sec, const std::string& key, double& out,
             bool allow_inf = false) {
        get(sec, key, [&](const std::string& v) {
            if (allow_inf && (v == "inf" || v == "infinity")) {
                out = kInf;
                return true;
            }
            char* end = nullptr;
            double d = std::strtod(v.c_str(), &end);
            if (end == v.c_str() || *end != '\0') return false;
            out = d;
            return true;
        });
    }

    void integer(const std::string& sec, const std::string& key, int& out) {
        get(sec, key, [&](const std::string& v) {
            char* end = nullptr;
            long d = std::strtol(v.c_str(), &end, 10);
            if (end == v.c_str() || *end != '\0') return false;
            out = static_cast<int>(d);
            return true;
        });
    }

    void integer(const std::string& sec, const std::string& key, long& out) {
        get(sec, key, [&](const std::string& v) {
            char* end = nullptr;
            long d = std::strtol(v.c_str(), &end, 10);
            if (end == v.c_str() || *end != '\0') return false;
            out = d;
            return true;
        });
    }

    void u64(const std::string& sec, const std::string& key, std::uint64_t& out,
             bool& present) {
        get(sec, key, [&](const std::string& v) {
            char* end = nullptr;
            unsigned long long d = std::strtoull(v.c_str(), &end, 10);
            if (end == v.c_str() || *end != '\0') return false;
            out = d;
            present = true;
            return true;
        });
    }

    void flag(const std::string& sec, const std::string& key, bool& out) {
        get(sec, key, [&](const std::string& v) {
            if (v == "true" || v == "1" || v == "yes") {
                out = true;
                return true;
            }
            if (v == "false" || v == "0" || v == "no") {
                out = false;
                return true;
            }
            return false;
        });
    }

    void finish_unknown_check() {
        for (const auto& [sec, kv] : doc_.sections) {
            for (const auto& [key, value] : kv) {
                if (!consumed_.count({sec, key})) {
                    errors_.push_back({field(sec, key), "unknown key"});
                }
            }
        }
    }

    static std::string field(const std::string& sec, const std::string& key) {
        return "[" + sec + "]." + key;
    }

private:
    const IniDoc& doc_;
    std::vector<ConfigError>& errors_;
    std::set<std::pair<std::string, std::string>> consumed_;
};

}  // namespace

ScenarioConfig default_config(Mode mode) {
    ScenarioConfig c;
    c.mode = mode;
    switch (mode) {
        case Mode::formation:
            c.sim_steps = 90;
            c.n_uavs = 9;
            c.shape.kind = ShapeKind::circle;
            c.shape.center = Vec2(100.0, 100.0);
            c.shape.radius = 60.0;
            c.weights = {1.0, 100.0, 10.0};
            c.limits.sigma_speed = 0.05;
            c.limits.sigma_heading = 0.005;
            c.limits.sigma_xpos = 0.2;
            c.limits.sigma_ypos = 0.2;
            c.start = {Vec2(-100.0, -100.0), 100.0, 15.0, 5.0, 0.785};
            c.eval_mult = 150;
            break;
        case Mode::tracking:
            c.sim_steps = 150;
            c.n_uavs = 5;
            c.n_targets = 1;
            c.weights = {1.0, 1000.0, 10.0};
            c.limits.sigma_speed = 0.05;
            c.limits.sigma_heading = 0.005;
            c.limits.sigma_xpos = 0.2;
            c.limits.sigma_ypos = 0.2;
            c.start = {Vec2(0.0, 0.0), 40.0, 12.0, 3.0, 0.0};
            c.targets = {6.0, 10.0, 0.3, 0.1};
            c.eval_mult = 120;
            break;
        case Mode::fusion:
            c.n_uavs = 10;  // sensor count
            c.limits.T = 1.0;
            c.targets.process_intensity = 0.05;
            c.schedule = {3, 300, 0.5};
            c.fusion.truth0 << 100.0, 100.0, 1.2, 0.8, 0.0, 0.0;
            c.sim_steps = c.schedule.Z;
            break;
    }
    return c;
}

ConfigResult parse_config(const std::string& text) {
    ConfigResult res;
    IniDoc doc = parse_ini(text);
    res.errors = doc.errors;
    Reader r(doc, res.errors);

    // Mode first: defaults depend on it.
    Mode mode = Mode::formation;
    bool mode_known = true;
    r.get("scenario", "mode", [&](const std::string& v) {
        if (v == "formation") mode = Mode::formation;
        else if (v == "tracking") mode = Mode::tracking;
        else if (v == "fusion") mode = Mode::fusion;
        else { mode_known = false; return false; }
        return true;
    });
    ScenarioConfig& c = res.cfg;
    c = default_config(mode_known ? mode : Mode::formation);

    r.u64("scenario", "seed", c.seed, c.seed_set);
    r.integer("scenario", "sim_steps", c.sim_steps);
    r.integer("scenario", "n_uavs", c.n_uavs);
    r.integer("scenario", "n_sensors", c.n_uavs);  // alias for fusion mode
    r.integer("scenario", "n_targets", c.n_targets);
    r.flag("scenario", "centralized", c.centralized);
    if (r.has("scenario", "neighborhood_threshold_m")) {
        r.num("scenario", "neighborhood_threshold_m", c.neighborhood_threshold, true);
    }
    r.num("scenario", "arrival_tol_m", c.arrival_tol);

    r.get("shape", "kind", [&](const std::string& v) {
        if (v == "circle") c.shape.kind = ShapeKind::circle;
        else if (v == "rectangle") c.shape.kind = ShapeKind::rectangle;
        else if (v == "square") c.shape.kind = ShapeKind::square;
        else return false;
        return true;
    });
    r.num("shape", "center_x", c.shape.center.x());
    r.num("shape", "center_y", c.shape.center.y());
    r.num("shape", "radius", c.shape.radius);
    r.num("shape", "width", c.shape.width);
    r.num("shape", "height", c.shape.height);
    r.num("shape", "side", c.shape.side);
    r.num("shape", "min_sep_m", c.dest_min_sep);

    r.num("start", "center_x", c.start.center.x());
    r.num("start", "center_y", c.start.center.y());
    r.num("start", "extent_m", c.start.extent);
    r.num("start", "min_sep_m", c.start.min_sep);
    r.num("start", "speed", c.start.speed);
    r.num("start", "heading", c.start.heading);

    r.num("uav", "v_min", c.limits.v_min);
    r.num("uav", "v_max", c.limits.v_max);
    r.num("uav", "f_min", c.limits.f_min);
    r.num("uav", "f_max", c.limits.f_max);
    r.num("uav", "phi_max", c.limits.phi_max);
    r.num("uav", "g", c.limits.g);
    r.num("uav", "T", c.limits.T);
    r.num("uav", "sigma_speed", c.limits.sigma_speed);
    r.num("uav", "sigma_heading", c.limits.sigma_heading);
    r.num("uav", "sigma_xpos", c.limits.sigma_xpos);
    r.num("uav", "sigma_ypos", c.limits.sigma_ypos);
    r.flag("uav", "reclamp_speed", c.limits.reclamp_speed);

    r.num("weights", "w1", c.weights.w1);
    r.num("weights", "w2", c.weights.w2);
    r.num("weights", "d_coll_thresh_m", c.weights.d_coll_thresh);

    r.integer("planner", "horizon", c.horizon);
    r.integer("planner", "eval_mult", c.eval_mult);
    r.num("planner", "x_tol", c.x_tol);
    r.num("planner", "f_tol", c.f_tol);
    r.integer("planner", "restarts", c.restarts);

    r.num("targets", "speed", c.targets.speed);
    r.num("targets", "spawn_radius", c.targets.spawn_radius);
    r.num("targets", "heading0", c.targets.heading0);
    r.num("targets", "process_intensity", c.targets.process_intensity);
    r.num("targets", "init_x", c.fusion.truth0(0));
    r.num("targets", "init_y", c.fusion.truth0(1));
    r.num("targets", "init_vx", c.fusion.truth0(2));
    r.num("targets", "init_vy", c.fusion.truth0(3));

    r.num("sensor", "range_frac", c.sensor.range_frac);
    r.num("sensor", "angular_sigma", c.sensor.angular_sigma);
    r.num("sensor", "r_floor_m", c.sensor.r_floor);

    r.integer("schedule", "M", c.schedule.M);
    r.integer("schedule", "Z", c.schedule.Z);
    r.num("schedule", "alpha", c.schedule.alpha);
    r.get("schedule", "algo", [&](const std::string& v) {
        if (v == "consensus") c.algo = FusionAlgo::consensus;
        else if (v == "bayes") c.algo = FusionAlgo::bayes;
        else return false;
        return true;
    });

    r.integer("graph", "config", c.fusion.graph_config);
    r.integer("graph", "degree", c.fusion.degree);
    r.num("graph", "edge_prob", c.fusion.edge_prob);
    r.integer("graph", "n_edges", c.fusion.n_edges);
    r.num("graph", "region_m", c.fusion.region);

    if (!mode_known) {
        res.errors.push_back({"[scenario].mode", "must be formation, tracking or fusion"});
    }
    r.finish_unknown_check();

    if (c.mode == Mode::fusion) c.sim_steps = c.schedule.Z;

    auto semantic = validate_config(c);
    res.errors.insert(res.errors.end(), semantic.begin(), semantic.end());
    return res;
}

ConfigResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult res;
        res.errors.push_back({path, "cannot open config file"});
        return res;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<ConfigError> validate_config(const ScenarioConfig& c) {
    std::vector<ConfigError> e;
    auto bad = [&](const std::string& f, const std::string& m) { e.push_back({f, m}); };

    if (!c.seed_set) bad("[scenario].seed", "required");
    if (c.sim_steps < 1) bad("[scenario].sim_steps", "must be >= 1");
    if (c.n_uavs < 1) bad("[scenario].n_uavs", "must be >= 1");
    if (c.neighborhood_threshold == 0.0) {
        bad("[scenario].neighborhood_threshold_m",
            "must be positive, 'inf', or omitted for nearest-neighbor mode");
    }
    if (c.arrival_tol <= 0.0) bad("[scenario].arrival_tol_m", "must be positive");

    if (c.limits.v_min < 0.0) bad("[uav].v_min", "must be >= 0");
    if (c.limits.v_max <= c.limits.v_min) bad("[uav].v_max", "must exceed v_min");
    if (c.limits.f_min > c.limits.f_max) bad("[uav].f_min", "must not exceed f_max");
    if (c.limits.phi_max <= 0.0 || c.limits.phi_max >= std::numbers::pi / 2.0) {
        bad("[uav].phi_max", "must lie in (0, pi/2)");
    }
    if (c.limits.T <= 0.0) bad("[uav].T", "must be positive");
    if (c.limits.sigma_speed < 0.0) bad("[uav].sigma_speed", "must be >= 0");
    if (c.limits.sigma_heading < 0.0) bad("[uav].sigma_heading", "must be >= 0");
    if (c.limits.sigma_xpos < 0.0) bad("[uav].sigma_xpos", "must be >= 0");
    if (c.limits.sigma_ypos < 0.0) bad("[uav].sigma_ypos", "must be >= 0");

    if (c.weights.w1 < 0.0) bad("[weights].w1", "must be >= 0");
    if (c.weights.w2 < 0.0) bad("[weights].w2", "must be >= 0");
    if (c.weights.d_coll_thresh <= 0.0) bad("[weights].d_coll_thresh_m", "must be positive");

    if (c.horizon < 1) bad("[planner].horizon", "must be >= 1");
    if (c.eval_mult < 0) bad("[planner].eval_mult", "must be >= 0");
    if (c.x_tol <= 0.0) bad("[planner].x_tol", "must be positive");
    if (c.f_tol <= 0.0) bad("[planner].f_tol", "must be positive");
    if (c.restarts < 0) bad("[planner].restarts", "must be >= 0");

    if (c.mode == Mode::formation) {
        try {
            double per = c.shape.perimeter();
            if (static_cast<double>(c.n_uavs) * c.dest_min_sep > per) {
                bad("[shape].min_sep_m", "shape perimeter cannot fit " +
                                             std::to_string(c.n_uavs) + " destinations");
            }
        } catch (const std::invalid_argument& ex) {
            bad("[shape]", ex.what());
        }
        if (c.dest_min_sep <= 0.0) bad("[shape].min_sep_m", "must be positive");
        if (c.start.extent <= 0.0) bad("[start].extent_m", "must be positive");
        if (c.start.min_sep <= 0.0) bad("[start].min_sep_m", "must be positive");
        if (c.start.speed < c.limits.v_min || c.start.speed > c.limits.v_max) {
            bad("[start].speed", "must lie within [v_min, v_max]");
        }
    }

    if (c.mode == Mode::tracking) {
        if (c.n_targets < 1 || c.n_targets > c.n_uavs) {
            bad("[scenario].n_targets", "need 1 <= n_targets <= n_uavs");
        }
        if (c.targets.speed < 0.0) bad("[targets].speed", "must be >= 0");
        if (c.targets.spawn_radius < 0.0) bad("[targets].spawn_radius", "must be >= 0");
        if (c.targets.process_intensity < 0.0) {
            bad("[targets].process_intensity", "must be >= 0");
        }
        if (c.start.extent <= 0.0) bad("[start].extent_m", "must be positive");
        if (c.start.min_sep <= 0.0) bad("[start].min_sep_m", "must be positive");
    }

    if (c.mode == Mode::tracking || c.mode == Mode::fusion) {
        if (c.sensor.range_frac <= 0.0) bad("[sensor].range_frac", "must be positive");
        if (c.sensor.angular_sigma <= 0.0) bad("[sensor].angular_sigma", "must be positive");
        if (c.sensor.r_floor <= 0.0) bad("[sensor].r_floor_m", "must be positive");
    }

    if (c.mode == Mode::fusion) {
        const int n = c.n_uavs;
        if (c.schedule.M < 1 || c.schedule.M > c.schedule.Z) {
            bad("[schedule].M", "need 1 <= M <= Z");
        }
        if (c.schedule.Z < 1) bad("[schedule].Z", "must be >= 1");
        if (!(c.schedule.alpha >= 0.0 && c.schedule.alpha <= 1.0)) {
            bad("[schedule].alpha", "must lie in [0, 1]");
        }
        if (c.fusion.region <= 0.0) bad("[graph].region_m", "must be positive");
        switch (c.fusion.graph_config) {
            case 1:
                if (c.fusion.degree < 1 || c.fusion.degree >= n ||
                    (static_cast<long>(n) * c.fusion.degree) % 2 != 0 ||
                    (c.fusion.degree == 1 && n != 2)) {
                    bad("[graph].degree", "no connected " + std::to_string(c.fusion.degree) +
                                              "-regular graph on " + std::to_string(n) + " sensors");
                }
                break;
            case 2:
                if (!(c.fusion.edge_prob > 0.0 && c.fusion.edge_prob <= 1.0)) {
                    bad("[graph].edge_prob", "must lie in (0, 1]");
                }
                break;
            case 3: {
                long max_edges = static_cast<long>(n) * (n - 1) / 2;
                if (c.fusion.n_edges < n - 1 || c.fusion.n_edges > max_edges) {
                    bad("[graph].n_edges", "must lie in [n-1, n(n-1)/2]");
                }
                break;
            }
            default:
                bad("[graph].config", "must be 1, 2 or 3");
        }
    }
    return e;
}

std::string describe(const std::vector<ConfigError>& errors) {
    std::ostringstream out;
    for (const auto& err : errors) out << err.field << ": " << err.message << "\n";
    return out.str();
}

}  // namespace swarm
