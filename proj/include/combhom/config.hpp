// config.hpp: JSON scan configurations and the built-in presets.
#pragma once

#include <string>
#include <vector>

#include "combhom/hom.hpp"
#include "combhom/sampling.hpp"

namespace combhom {
namespace cli {

// count values evenly spaced from min to max inclusive.
struct ShiftRange {
    double min{0.0};
    double max{0.0};
    size_t count{1};

    std::vector<double> values() const;
};

enum class ScanAxis { time, frequency, plane };

std::string to_string(ScanAxis a);

struct ScanConfig {
    hom::StateSpec        state;
    ScanAxis              axis{ScanAxis::time};
    ShiftRange            delta_t;
    ShiftRange            delta_omega;
    bool                  run_exact{true};
    bool                  run_approx{true};
    sampling::GridFactors factors{};
};

// Parse a JSON config document. Unknown keys are rejected and every error
// names the offending field, e.g. "state.line_shape.width: must be positive".
ScanConfig parse_config(const std::string& text);

// parse_config on the contents of the file at path.
ScanConfig load_config(const std::string& path);

struct PresetInfo {
    std::string name;
    std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();

// Built-in configuration by name; throws std::invalid_argument for names
// not in the catalog.
ScanConfig preset_config(const std::string& name);

} // namespace cli
} // namespace combhom
