#include "combhom/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "combhom/states.hpp"

namespace combhom {
namespace cli {

using nlohmann::json;

std::vector<double> ShiftRange::values() const {
    std::vector<double> xs(count);
    if (count == 1) {
        xs[0] = min;
        return xs;
    }
    for (size_t i = 0; i + 1 < count; ++i)
        xs[i] = min + (max - min) * double(i) / double(count - 1);
    xs[count - 1] = max;
    return xs;
}

std::string to_string(ScanAxis a) {
    switch (a) {
        case ScanAxis::time:      return "time";
        case ScanAxis::frequency: return "frequency";
        case ScanAxis::plane:     return "plane";
    }
    throw std::invalid_argument("scan axis: unknown enum value");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (item.key() == name) {
                known = true;
                break;
            }
        if (!known) fail(join(path, item.key()), "unexpected key");
    }
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const char* key) {
    const json* v = find(j, key);
    if (!v) fail(join(path, key), "missing required key");
    return *v;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "must be a string");
    return j.get<std::string>();
}

double as_finite_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

double as_positive_number(const json& j, const std::string& path) {
    const double v = as_finite_number(j, path);
    if (v <= 0.0) fail(path, "must be positive");
    return v;
}

size_t as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "must be an integer");
    const auto v = j.get<long long>();
    if (v < 1) fail(path, "must be at least 1");
    return static_cast<size_t>(v);
}

shapes::ShapeSpec parse_shape(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    reject_unknown_keys(j, path, {"kind", "width", "center"});
    shapes::ShapeSpec shape;
    const std::string kind =
        as_string(require(j, path, "kind"), join(path, "kind"));
    if (kind == "gaussian")
        shape.kind = shapes::Kind::gaussian;
    else if (kind == "rectangle")
        shape.kind = shapes::Kind::rectangle;
    else if (kind == "sinc")
        shape.kind = shapes::Kind::sinc;
    else
        fail(join(path, "kind"),
             "must be one of \"gaussian\", \"rectangle\", \"sinc\"");
    shape.width =
        as_positive_number(require(j, path, "width"), join(path, "width"));
    if (const json* c = find(j, "center"))
        shape.center = as_finite_number(*c, join(path, "center"));
    return shape;
}

hom::StateSpec parse_state(const json& j) {
    const std::string path = "state";
    if (!j.is_object()) fail(path, "must be an object");
    const std::string kind =
        as_string(require(j, path, "kind"), "state.kind");
    if (kind == "comb") {
        reject_unknown_keys(j, path, {"kind", "omega_spacing", "line_shape",
                                      "envelope", "tooth_cutoff"});
        states::CombSpec spec;
        spec.omega_spacing = as_positive_number(
            require(j, path, "omega_spacing"), "state.omega_spacing");
        spec.line_shape =
            parse_shape(require(j, path, "line_shape"), "state.line_shape");
        spec.envelope =
            parse_shape(require(j, path, "envelope"), "state.envelope");
        if (const json* c = find(j, "tooth_cutoff")) {
            spec.tooth_cutoff = as_positive_number(*c, "state.tooth_cutoff");
            if (spec.tooth_cutoff >= 1.0)
                fail("state.tooth_cutoff", "must be below 1");
        }
        states::validate(spec);
        return spec;
    }
    if (kind == "entangled") {
        reject_unknown_keys(
            j, path, {"kind", "line_shape", "envelope", "reference_omega"});
        states::EntangledSpec spec;
        spec.line_shape =
            parse_shape(require(j, path, "line_shape"), "state.line_shape");
        spec.envelope =
            parse_shape(require(j, path, "envelope"), "state.envelope");
        if (const json* r = find(j, "reference_omega"))
            spec.reference_omega =
                as_finite_number(*r, "state.reference_omega");
        states::validate(spec);
        return spec;
    }
    fail("state.kind", "must be \"comb\" or \"entangled\"");
}

ShiftRange parse_range(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    reject_unknown_keys(j, path, {"min", "max", "count"});
    ShiftRange r;
    r.min = as_finite_number(require(j, path, "min"), join(path, "min"));
    r.max = as_finite_number(require(j, path, "max"), join(path, "max"));
    r.count = as_count(require(j, path, "count"), join(path, "count"));
    if (r.max < r.min) fail(join(path, "max"), "must not be below min");
    if (r.count == 1 && r.min != r.max)
        fail(join(path, "count"), "a single point needs min == max");
    if (r.count > 1 && r.min == r.max)
        fail(join(path, "count"), "a flat range needs count == 1");
    return r;
}

void parse_scan(const json& j, ScanConfig& config) {
    const std::string path = "scan";
    if (!j.is_object()) fail(path, "must be an object");
    reject_unknown_keys(j, path, {"axis", "delta_t", "delta_omega", "methods"});

    const std::string axis = as_string(require(j, path, "axis"), "scan.axis");
    if (axis == "time")
        config.axis = ScanAxis::time;
    else if (axis == "frequency")
        config.axis = ScanAxis::frequency;
    else if (axis == "plane")
        config.axis = ScanAxis::plane;
    else
        fail("scan.axis", "must be \"time\", \"frequency\" or \"plane\"");

    const json* dt = find(j, "delta_t");
    const json* dw = find(j, "delta_omega");
    const bool needs_t = config.axis != ScanAxis::frequency;
    const bool needs_w = config.axis != ScanAxis::time;
    if (needs_t && !dt) fail("scan.delta_t", "missing required key");
    if (needs_w && !dw) fail("scan.delta_omega", "missing required key");
    if (!needs_t && dt) fail("scan.delta_t", "not used on a frequency scan");
    if (!needs_w && dw) fail("scan.delta_omega", "not used on a time scan");
    if (dt) config.delta_t = parse_range(*dt, "scan.delta_t");
    if (dw) config.delta_omega = parse_range(*dw, "scan.delta_omega");

    if (const json* m = find(j, "methods")) {
        if (!m->is_array() || m->empty())
            fail("scan.methods", "must be a non-empty array");
        config.run_exact = false;
        config.run_approx = false;
        for (const auto& entry : *m) {
            const std::string name = as_string(entry, "scan.methods");
            if (name == "exact") {
                if (config.run_exact)
                    fail("scan.methods", "duplicate entry \"exact\"");
                config.run_exact = true;
            } else if (name == "approx") {
                if (config.run_approx)
                    fail("scan.methods", "duplicate entry \"approx\"");
                config.run_approx = true;
            } else {
                fail("scan.methods", "entries must be \"exact\" or \"approx\"");
            }
        }
    }
}

void parse_grid(const json& j, ScanConfig& config) {
    if (!j.is_object()) fail("grid", "must be an object");
    reject_unknown_keys(j, "grid", {"span_factor", "step_factor"});
    if (const json* s = find(j, "span_factor"))
        config.factors.span_factor =
            as_positive_number(*s, "grid.span_factor");
    if (const json* s = find(j, "step_factor"))
        config.factors.step_factor =
            as_positive_number(*s, "grid.step_factor");
}

} // namespace

ScanConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");
    reject_unknown_keys(j, "", {"state", "scan", "grid"});

    ScanConfig config;
    config.state = parse_state(require(j, "", "state"));
    parse_scan(require(j, "", "scan"), config);
    if (const json* g = find(j, "grid")) parse_grid(*g, config);
    return config;
}

ScanConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = {
        {"rect-comb",
         "comb under a sharp rectangular envelope, delay scan over a period"},
        {"gauss-comb", "gaussian comb, delay scan resolving the central dip"},
        {"entangled",
         "time-anticorrelated pair, frequency scan of the shallow dip"},
        {"2d-comb", "gaussian comb, joint delay and frequency offset map"},
    };
    return catalog;
}

ScanConfig preset_config(const std::string& name) {
    constexpr double pi = two_pi / 2.0;

    states::CombSpec gauss_comb;
    gauss_comb.omega_spacing = 1.0;
    gauss_comb.line_shape    = {shapes::Kind::gaussian, 0.05, 0.0};
    gauss_comb.envelope      = {shapes::Kind::gaussian, 20.0, 0.0};

    ScanConfig config;
    if (name == "rect-comb") {
        states::CombSpec spec = gauss_comb;
        spec.envelope = {shapes::Kind::rectangle, 20.0, 0.0};
        config.state = spec;
        config.axis = ScanAxis::time;
        config.delta_t = {-pi, pi, 201};
        config.factors = {16.0, 16.0};
        return config;
    }
    if (name == "gauss-comb") {
        config.state = gauss_comb;
        config.axis = ScanAxis::time;
        config.delta_t = {-0.1, 0.1, 101};
        config.factors = {16.0, 16.0};
        return config;
    }
    if (name == "entangled") {
        states::EntangledSpec spec;
        spec.line_shape = {shapes::Kind::gaussian, 0.05, 0.0};
        spec.envelope   = {shapes::Kind::gaussian, 20.0, 0.0};
        config.state = spec;
        config.axis = ScanAxis::frequency;
        config.delta_omega = {-0.5, 0.5, 101};
        config.factors = {16.0, 8.0};
        return config;
    }
    if (name == "2d-comb") {
        config.state = gauss_comb;
        config.axis = ScanAxis::plane;
        config.delta_t = {-two_pi / 8.0, two_pi / 8.0, 12};
        config.delta_omega = {-0.125, 0.125, 12};
        config.factors = {16.0, 16.0};
        return config;
    }
    throw std::invalid_argument("unknown preset \"" + name +
                                "\"; run `comb-hom presets` for the list");
}

} // namespace cli
} // namespace combhom
