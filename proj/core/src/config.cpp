#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "enclosure/config.hpp"

namespace enclosure {

using nlohmann::json;

namespace {

json to_json(const YAML::Node& n) {
    switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
        return nullptr;
    case YAML::NodeType::Sequence: {
        json a = json::array();
        for (const auto& c : n) a.push_back(to_json(c));
        return a;
    }
    case YAML::NodeType::Map: {
        json o = json::object();
        for (const auto& kv : n) o[kv.first.as<std::string>()] = to_json(kv.second);
        return o;
    }
    case YAML::NodeType::Scalar:
        break;
    }
    const std::string s = n.Scalar();
    if (n.Tag() == "!") return s; // quoted
    if (s == "true" || s == "True") return true;
    if (s == "false" || s == "False") return false;
    if (s == "null" || s == "~") return nullptr;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    return s;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("config " + where + ": " + what);
}

void check_keys(const json& o, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!o.is_object()) fail(where, "expected a mapping");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : o.items())
        if (!ok.count(k)) fail(where, "unknown key '" + k + "'");
}

double num(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

std::string str(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

cplx complex_value(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {num(v[0], where), num(v[1], where)};
    fail(where, "expected a number or [re, im]");
}

Vec3 point(const json& v, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim) fail(where, "expected a list of " + std::to_string(dim));
    Vec3 p = Vec3::Zero();
    for (int a = 0; a < dim; ++a) p[a] = num(v[a], where);
    return p;
}

std::vector<double> num_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) fail(where, "expected a non-empty list");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(num(x, where));
    return out;
}

ObstacleShape parse_obstacle(const json& o, int dim) {
    check_keys(o, "medium.obstacle", {"kind", "center", "radius", "semi_axes", "balls"});
    const std::string kind = str(o.at("kind"), "medium.obstacle.kind");
    if (kind == "empty") return ObstacleShape::empty();
    if (kind == "ball")
        return ObstacleShape::ball(point(o.at("center"), dim, "medium.obstacle.center"),
                                   num(o.at("radius"), "medium.obstacle.radius"));
    if (kind == "ellipsoid") {
        Vec3 axes = point(o.at("semi_axes"), dim, "medium.obstacle.semi_axes");
        if (dim == 2) axes[2] = 1.0;
        return ObstacleShape::ellipsoid(point(o.at("center"), dim, "medium.obstacle.center"), axes);
    }
    if (kind == "union") {
        std::vector<Ball> balls;
        if (!o.contains("balls") || !o.at("balls").is_array()) fail("medium.obstacle.balls", "expected a list");
        for (const auto& b : o.at("balls")) {
            check_keys(b, "medium.obstacle.balls[]", {"center", "radius"});
            balls.push_back({point(b.at("center"), dim, "medium.obstacle.balls[].center"),
                             num(b.at("radius"), "medium.obstacle.balls[].radius")});
        }
        return ObstacleShape::union_of_balls(std::move(balls));
    }
    fail("medium.obstacle.kind", "unknown kind '" + kind + "'");
}

template <class F>
void opt(const json& o, const char* key, F&& f) {
    if (o.contains(key) && !o.at(key).is_null()) f(o.at(key));
}

} // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dim_mode(int dim) { return dim == 3 ? "paper" : "extension-2d"; }

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    check_keys(root, "root", {"dim", "domain", "medium", "cgo", "probes", "solver", "fit", "forward",
                              "admissibility", "output", "seed"});
    RunConfig c;
    c.dim = integer(root.at("dim"), "dim");
    if (c.dim != 2 && c.dim != 3) fail("dim", "must be 2 or 3");
    const int dim = c.dim;

    const json& d = root.at("domain");
    check_keys(d, "domain", {"kind", "lo", "hi", "center", "radius", "resolution"});
    const std::string dk = str(d.at("kind"), "domain.kind");
    if (dk == "box")
        c.domain = DomainSpec::box(dim, point(d.at("lo"), dim, "domain.lo"), point(d.at("hi"), dim, "domain.hi"));
    else if (dk == "ball")
        c.domain = DomainSpec::ball(dim, point(d.at("center"), dim, "domain.center"), num(d.at("radius"), "domain.radius"));
    else
        fail("domain.kind", "must be box or ball");
    c.domain.validate();
    const json& res = d.at("resolution");
    if (res.is_number_integer()) {
        c.resolution = {res.get<int>(), res.get<int>(), dim == 3 ? res.get<int>() : 1};
    } else if (res.is_array() && static_cast<int>(res.size()) == dim) {
        for (int a = 0; a < dim; ++a) c.resolution[a] = integer(res[a], "domain.resolution");
        if (dim == 2) c.resolution[2] = 1;
    } else {
        fail("domain.resolution", "expected an integer or a list of " + std::to_string(dim));
    }
    for (int a = 0; a < dim; ++a)
        if (c.resolution[a] < 8) fail("domain.resolution", "at least 8 nodes per axis");

    const json& m = root.at("medium");
    check_keys(m, "medium", {"kappa", "gamma_D", "q_D", "A_D", "obstacle"});
    c.medium = MediumSpec::background(num(m.at("kappa"), "medium.kappa"));
    opt(m, "gamma_D", [&](const json& v) { c.medium.gamma_D = complex_value(v, "medium.gamma_D"); });
    opt(m, "q_D", [&](const json& v) { c.medium.q_D = complex_value(v, "medium.q_D"); });
    opt(m, "A_D", [&](const json& v) {
        if (!v.is_array() || static_cast<int>(v.size()) != dim) fail("medium.A_D", "expected a list of " + std::to_string(dim));
        for (int a = 0; a < dim; ++a) c.medium.A_D[a] = complex_value(v[a], "medium.A_D");
    });
    c.medium.shape = m.contains("obstacle") ? parse_obstacle(m.at("obstacle"), dim) : ObstacleShape::empty();
    c.medium.validate();

    opt(root, "cgo", [&](const json& g) {
        check_keys(g, "cgo", {"K", "g0", "r_min", "amplitude_resolution", "amplitude_margin", "h", "t", "check_h",
                              "route"});
        opt(g, "K", [&](const json& v) { c.cgo.K = integer(v, "cgo.K"); });
        if (c.cgo.K < 0 || c.cgo.K > 2) fail("cgo.K", "must be 0, 1 or 2");
        opt(g, "g0", [&](const json& v) {
            const std::string s = str(v, "cgo.g0");
            if (s == "one")
                c.cgo.g0 = HolomorphicSeed::One;
            else if (s == "z")
                c.cgo.g0 = HolomorphicSeed::Z;
            else
                fail("cgo.g0", "must be one or z");
        });
        opt(g, "r_min", [&](const json& v) { c.cgo.amplitude.r_min_fraction = num(v, "cgo.r_min"); });
        opt(g, "amplitude_resolution",
            [&](const json& v) { c.cgo.amplitude.resolution = integer(v, "cgo.amplitude_resolution"); });
        opt(g, "amplitude_margin", [&](const json& v) { c.cgo.amplitude.margin_fraction = num(v, "cgo.amplitude_margin"); });
        opt(g, "h", [&](const json& v) { c.cgo.h = num_list(v, "cgo.h"); });
        opt(g, "check_h", [&](const json& v) { c.cgo.check_h = num_list(v, "cgo.check_h"); });
        opt(g, "route", [&](const json& v) {
            const std::string s = str(v, "cgo.route");
            if (s == "reflected")
                c.cgo.route = IndicatorRoute::Reflected;
            else if (s == "direct")
                c.cgo.route = IndicatorRoute::Direct;
            else
                fail("cgo.route", "must be reflected or direct");
        });
        opt(g, "t", [&](const json& t) {
            check_keys(t, "cgo.t", {"rule", "value", "offsets"});
            const std::string rule = str(t.at("rule"), "cgo.t.rule");
            if (rule == "far")
                c.cgo.t_rule = RunConfig::Cgo::TRule::Far;
            else if (rule == "fixed")
                c.cgo.t_rule = RunConfig::Cgo::TRule::Fixed;
            else if (rule == "truth")
                c.cgo.t_rule = RunConfig::Cgo::TRule::Truth;
            else
                fail("cgo.t.rule", "must be far, fixed or truth");
            opt(t, "value", [&](const json& v) { c.cgo.t_value = num(v, "cgo.t.value"); });
            opt(t, "offsets", [&](const json& v) { c.cgo.t_offsets = num_list(v, "cgo.t.offsets"); });
        });
    });
    for (std::size_t i = 0; i < c.cgo.h.size(); ++i) {
        if (!(c.cgo.h[i] > 0.0)) fail("cgo.h", "values must be positive");
        if (i > 0 && !(c.cgo.h[i] < c.cgo.h[i - 1])) fail("cgo.h", "must be strictly decreasing");
    }
    for (double h : c.cgo.check_h)
        if (!(h > 0.0)) fail("cgo.check_h", "values must be positive");
    if (c.cgo.t_rule == RunConfig::Cgo::TRule::Truth && c.medium.shape.is_empty())
        fail("cgo.t.rule", "truth requires an obstacle");

    opt(root, "probes", [&](const json& p) {
        check_keys(p, "probes", {"count", "radius", "offset", "jitter", "points", "w"});
        opt(p, "count", [&](const json& v) { c.probes.layout.count = integer(v, "probes.count"); });
        opt(p, "radius", [&](const json& v) { c.probes.layout.radius = num(v, "probes.radius"); });
        opt(p, "offset", [&](const json& v) { c.probes.layout.offset = num(v, "probes.offset"); });
        opt(p, "jitter", [&](const json& v) { c.probes.layout.jitter = num(v, "probes.jitter"); });
        opt(p, "points", [&](const json& v) {
            if (!v.is_array() || v.empty()) fail("probes.points", "expected a non-empty list");
            for (const auto& x : v) c.probes.points.push_back(point(x, dim, "probes.points[]"));
        });
        opt(p, "w", [&](const json& v) { c.probes.w = point(v, dim, "probes.w"); });
    });
    if (c.probes.points.empty() && c.probes.layout.count < 1) fail("probes.count", "must be positive");
    for (const auto& x : c.probes.points)
        if (c.domain.in_hull(x)) fail("probes.points", "x0 must lie outside the domain");

    opt(root, "solver", [&](const json& s) {
        check_keys(s, "solver", {"tolerance", "max_iterations", "method"});
        opt(s, "tolerance", [&](const json& v) { c.solver.tolerance = num(v, "solver.tolerance"); });
        opt(s, "max_iterations", [&](const json& v) { c.solver.max_iterations = integer(v, "solver.max_iterations"); });
        opt(s, "method", [&](const json& v) {
            const std::string x = str(v, "solver.method");
            if (x == "auto")
                c.solver.method = SolverOptions::Method::Auto;
            else if (x == "direct")
                c.solver.method = SolverOptions::Method::Direct;
            else if (x == "krylov")
                c.solver.method = SolverOptions::Method::Krylov;
            else
                fail("solver.method", "must be auto, direct or krylov");
        });
    });
    if (!(c.solver.tolerance > 0.0) || c.solver.max_iterations < 1) fail("solver", "tolerance and cap must be positive");

    opt(root, "fit", [&](const json& f) {
        check_keys(f, "fit", {"model"});
        const std::string s = str(f.at("model"), "fit.model");
        if (s == "affine")
            c.fit_model = FitModel::Affine;
        else if (s == "affine_hlogh")
            c.fit_model = FitModel::AffineHLogH;
        else
            fail("fit.model", "must be affine or affine_hlogh");
    });

    opt(root, "forward", [&](const json& f) {
        check_keys(f, "forward", {"data", "gradient", "h", "t", "probe"});
        opt(f, "data", [&](const json& v) { c.forward.data = str(v, "forward.data"); });
        if (c.forward.data != "linear" && c.forward.data != "cgo") fail("forward.data", "must be linear or cgo");
        opt(f, "gradient", [&](const json& v) { c.forward.gradient = point(v, dim, "forward.gradient"); });
        opt(f, "h", [&](const json& v) { c.forward.h = num(v, "forward.h"); });
        opt(f, "t", [&](const json& v) { c.forward.t = num(v, "forward.t"); });
        opt(f, "probe", [&](const json& v) { c.forward.probe = integer(v, "forward.probe"); });
    });

    opt(root, "admissibility", [&](const json& a) {
        check_keys(a, "admissibility", {"a_inv", "b", "c"});
        c.admissibility_norms = std::array<double, 3>{num(a.at("a_inv"), "admissibility.a_inv"),
                                                      num(a.at("b"), "admissibility.b"), num(a.at("c"), "admissibility.c")};
    });

    opt(root, "output", [&](const json& v) { c.output_dir = str(v, "output"); });
    opt(root, "seed", [&](const json& v) {
        if (!v.is_number_integer() || v.get<long long>() < 0) fail("seed", "expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    });
    c.probes.layout.seed = c.seed;

    c.canonical = root.dump();
    c.hash = fnv1a_hex(c.canonical);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace enclosure
