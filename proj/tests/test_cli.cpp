#include "doctest.h"

#include "combhom/config.hpp"
#include "combhom/states.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <variant>

using namespace combhom;
using namespace combhom::cli;

TEST_CASE("shift ranges enumerate inclusive endpoints") {
    const ShiftRange r{-1.0, 1.0, 5};
    const auto xs = r.values();
    REQUIRE(xs.size() == 5);
    CHECK(xs[0] == -1.0);
    CHECK(xs[1] == -0.5);
    CHECK(xs[2] == 0.0);
    CHECK(xs[4] == 1.0);

    const ShiftRange point{0.25, 0.25, 1};
    const auto single = point.values();
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.25);
}

TEST_CASE("a full comb config parses") {
    const std::string text = R"({
        "state": {
            "kind": "comb",
            "omega_spacing": 2.0,
            "line_shape": {"kind": "gaussian", "width": 0.1, "center": 0.5},
            "envelope": {"kind": "rectangle", "width": 30.0},
            "tooth_cutoff": 1e-8
        },
        "scan": {
            "axis": "plane",
            "delta_t": {"min": -0.3, "max": 0.3, "count": 7},
            "delta_omega": {"min": -0.2, "max": 0.2, "count": 5},
            "methods": ["exact"]
        },
        "grid": {"span_factor": 12.0, "step_factor": 10.0}
    })";
    const auto config = parse_config(text);

    REQUIRE(std::holds_alternative<states::CombSpec>(config.state));
    const auto& comb = std::get<states::CombSpec>(config.state);
    CHECK(comb.omega_spacing == 2.0);
    CHECK(comb.line_shape.kind == shapes::Kind::gaussian);
    CHECK(comb.line_shape.width == 0.1);
    CHECK(comb.line_shape.center == 0.5);
    CHECK(comb.envelope.kind == shapes::Kind::rectangle);
    CHECK(comb.envelope.width == 30.0);
    CHECK(comb.envelope.center == 0.0);
    CHECK(comb.tooth_cutoff == 1e-8);

    CHECK(config.axis == ScanAxis::plane);
    CHECK(config.delta_t.min == -0.3);
    CHECK(config.delta_t.count == 7);
    CHECK(config.delta_omega.max == 0.2);
    CHECK(config.delta_omega.count == 5);
    CHECK(config.run_exact);
    CHECK_FALSE(config.run_approx);
    CHECK(config.factors.span_factor == 12.0);
    CHECK(config.factors.step_factor == 10.0);
}

TEST_CASE("an entangled config fills the defaults") {
    const std::string text = R"({
        "state": {
            "kind": "entangled",
            "line_shape": {"kind": "gaussian", "width": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0}
        },
        "scan": {
            "axis": "frequency",
            "delta_omega": {"min": -0.5, "max": 0.5, "count": 11}
        }
    })";
    const auto config = parse_config(text);

    REQUIRE(std::holds_alternative<states::EntangledSpec>(config.state));
    const auto& pair = std::get<states::EntangledSpec>(config.state);
    CHECK(pair.reference_omega == 0.0);
    CHECK(config.axis == ScanAxis::frequency);
    CHECK(config.run_exact);
    CHECK(config.run_approx);
    CHECK(config.factors.span_factor == 8.0);
    CHECK(config.factors.step_factor == 8.0);
}

TEST_CASE("config errors name the offending field") {
    CHECK_THROWS_WITH_AS(parse_config("[1, 2]"),
                         "config: top level must be an object",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config("nonsense"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scan": {}})"),
                         "state: missing required key", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"state": {}, "scan": {}, "extra": 1})"),
        "extra: unexpected key", std::invalid_argument);
}

TEST_CASE("state parsing rejects bad fields") {
    auto parse_state_json = [](const std::string& state) {
        return parse_config(
            std::string(R"({"state": )") + state +
            R"(, "scan": {"axis": "time",
                          "delta_t": {"min": -1.0, "max": 1.0, "count": 3}}})");
    };

    CHECK_THROWS_WITH_AS(parse_state_json(R"({"kind": "laser"})"),
                         "state.kind: must be \"comb\" or \"entangled\"",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": -1.0,
            "line_shape": {"kind": "gaussian", "width": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0}})"),
        "state.omega_spacing: must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": 1.0,
            "line_shape": {"kind": "boxcar", "width": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0}})"),
        "state.line_shape.kind: must be one of \"gaussian\", \"rectangle\", "
        "\"sinc\"",
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": 1.0,
            "line_shape": {"kind": "gaussian", "width": 0.0},
            "envelope": {"kind": "gaussian", "width": 20.0}})"),
        "state.line_shape.width: must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": 1.0,
            "line_shape": {"kind": "gaussian", "width": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0},
            "tooth_cutoff": 1.5})"),
        "state.tooth_cutoff: must be below 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "entangled",
            "line_shape": {"kind": "gaussian", "width": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0},
            "omega_spacing": 1.0})"),
        "state.omega_spacing: unexpected key", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": 1.0,
            "line_shape": {"kind": "gaussian", "width": 0.05,
                           "sigma": 0.05},
            "envelope": {"kind": "gaussian", "width": 20.0}})"),
        "state.line_shape.sigma: unexpected key", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_state_json(R"({
            "kind": "comb", "omega_spacing": 1.0,
            "line_shape": {"kind": "gaussian", "width": "thin"},
            "envelope": {"kind": "gaussian", "width": 20.0}})"),
        "state.line_shape.width: must be a number", std::invalid_argument);
}

TEST_CASE("scan parsing ties ranges to the axis") {
    auto parse_scan_json = [](const std::string& scan) {
        return parse_config(
            std::string(R"({
                "state": {
                    "kind": "comb", "omega_spacing": 1.0,
                    "line_shape": {"kind": "gaussian", "width": 0.05},
                    "envelope": {"kind": "gaussian", "width": 20.0}
                },
                "scan": )") +
            scan + "}");
    };

    CHECK_THROWS_WITH_AS(parse_scan_json(R"({"axis": "sideways"})"),
                         "scan.axis: must be \"time\", \"frequency\" or "
                         "\"plane\"",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_scan_json(R"({"axis": "time"})"),
                         "scan.delta_t: missing required key",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3},
            "delta_omega": {"min": -1.0, "max": 1.0, "count": 3}})"),
        "scan.delta_omega: not used on a time scan", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "frequency",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3},
            "delta_omega": {"min": -1.0, "max": 1.0, "count": 3}})"),
        "scan.delta_t: not used on a frequency scan", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "plane",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3}})"),
        "scan.delta_omega: missing required key", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": 1.0, "max": -1.0, "count": 3}})"),
        "scan.delta_t.max: must not be below min", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 0}})"),
        "scan.delta_t.count: must be at least 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 2.5}})"),
        "scan.delta_t.count: must be an integer", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 1}})"),
        "scan.delta_t.count: a single point needs min == max",
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": 1.0, "max": 1.0, "count": 4}})"),
        "scan.delta_t.count: a flat range needs count == 1",
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3},
            "methods": []})"),
        "scan.methods: must be a non-empty array", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3},
            "methods": ["exact", "exact"]})"),
        "scan.methods: duplicate entry \"exact\"", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_scan_json(R"({
            "axis": "time",
            "delta_t": {"min": -1.0, "max": 1.0, "count": 3},
            "methods": ["oracle"]})"),
        "scan.methods: entries must be \"exact\" or \"approx\"",
        std::invalid_argument);
}

TEST_CASE("config files load from disk") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "combhom_cli_test.json";
    {
        std::ofstream out(path);
        out << R"({
            "state": {
                "kind": "comb", "omega_spacing": 1.0,
                "line_shape": {"kind": "gaussian", "width": 0.05},
                "envelope": {"kind": "gaussian", "width": 20.0}
            },
            "scan": {"axis": "time",
                     "delta_t": {"min": -0.1, "max": 0.1, "count": 11}}
        })";
    }
    const auto config = load_config(path.string());
    CHECK(config.delta_t.count == 11);
    fs::remove(path);

    CHECK_THROWS_AS(load_config((fs::temp_directory_path() /
                                 "combhom_no_such_file.json")
                                    .string()),
                    std::invalid_argument);
}

TEST_CASE("presets are consistent with the catalog") {
    const auto& catalog = preset_catalog();
    REQUIRE(catalog.size() == 4);
    for (const auto& entry : catalog) {
        CAPTURE(entry.name);
        const auto config = preset_config(entry.name);
        CHECK(config.run_exact);
        if (config.axis != ScanAxis::frequency)
            CHECK(config.delta_t.count > 1);
        if (config.axis != ScanAxis::time)
            CHECK(config.delta_omega.count > 1);
    }
    for (size_t i = 0; i < catalog.size(); ++i)
        for (size_t j = i + 1; j < catalog.size(); ++j)
            CHECK(catalog[i].name != catalog[j].name);

    CHECK_THROWS_AS(preset_config("fig-one"), std::invalid_argument);
}
