#include "combhom/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "combhom/config.hpp"
#include "combhom/errors.hpp"
#include "combhom/hom.hpp"
#include "combhom/oracle.hpp"
#include "combhom/sampling.hpp"
#include "combhom/states.hpp"

namespace combhom {
namespace cli {

namespace {

namespace fs = std::filesystem;

size_t threads_from_env() {
    const char* raw = std::getenv("COMB_HOM_THREADS");
    if (!raw || !*raw) return 0;
    for (const char* p = raw; *p; ++p)
        if (!std::isdigit(static_cast<unsigned char>(*p)))
            throw std::invalid_argument(
                "COMB_HOM_THREADS must be a non-negative integer");
    errno = 0;
    const unsigned long long v = std::strtoull(raw, nullptr, 10);
    if (errno != 0)
        throw std::invalid_argument("COMB_HOM_THREADS is out of range");
    return static_cast<size_t>(v);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const char* method_token(hom::Method m) {
    return m == hom::Method::exact_overlap ? "exact" : "approx";
}

constexpr const char* csv_header =
    "delta_t,delta_omega,coincidence,method,state_kind\n";

std::string csv_row(double dt, double dw, double c, hom::Method m,
                    hom::StateKind k) {
    return g17(dt) + "," + g17(dw) + "," + g17(c) + "," + hom::to_string(m) +
           "," + hom::to_string(k) + "\n";
}

std::string csv_from_curve(const hom::DipCurve& curve) {
    std::string text = csv_header;
    for (size_t i = 0; i < curve.shifts.size(); ++i) {
        const double dt =
            curve.axis == hom::ShiftAxis::time ? curve.shifts[i] : 0.0;
        const double dw =
            curve.axis == hom::ShiftAxis::frequency ? curve.shifts[i] : 0.0;
        text += csv_row(dt, dw, curve.coincidence[i], curve.method,
                        curve.state_kind);
    }
    return text;
}

std::string csv_from_surface(const hom::DipSurface& surface) {
    std::string text = csv_header;
    const size_t nw = surface.delta_omegas.size();
    for (size_t r = 0; r < surface.delta_ts.size(); ++r)
        for (size_t c = 0; c < nw; ++c)
            text += csv_row(surface.delta_ts[r], surface.delta_omegas[c],
                            surface.coincidence[r * nw + c], surface.method,
                            surface.state_kind);
    return text;
}

void write_atomic(const fs::path& target, const std::string& content) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() +
                                     " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

void describe_scales(std::ostream& out, const states::ScaleReport& r,
                     bool comb) {
    auto verdict = [](bool ok) { return ok ? "ok" : "violated"; };
    out << "scales:\n";
    out << "  spectral line width:     " << r.domega_phi << "\n";
    out << "  spectral envelope width: " << r.domega_eta << "\n";
    out << "  temporal envelope width: " << r.dt_eta << "\n";
    out << "  temporal line width:     " << r.dt_phi << "\n";
    if (comb) {
        out << "  tooth spacing: " << r.omega_spacing << ", period: "
            << r.period << "\n";
        out << "  frequency ordering (line < spacing < envelope): "
            << verdict(r.frequency_ordering_ok) << "\n";
        out << "  temporal ordering (envelope < period < line): "
            << verdict(r.temporal_ordering_ok) << "\n";
    } else {
        out << "  frequency ordering (line < envelope): "
            << verdict(r.frequency_ordering_ok) << "\n";
        out << "  temporal ordering (envelope < line): "
            << verdict(r.temporal_ordering_ok) << "\n";
    }
    out << "  uncertainty product: " << r.uncertainty_product << " (bound "
        << two_pi << "): " << verdict(r.bound_ok) << "\n";
}

void describe_state(std::ostream& out, const ScanConfig& config) {
    if (const auto* comb = std::get_if<states::CombSpec>(&config.state)) {
        out << "state: comb\n";
        describe_scales(out, states::check_scales(*comb), true);
        const auto spectral = states::spectral_grid(*comb, config.factors);
        const auto time = spectral.conjugate();
        out << "grids:\n";
        out << "  spectral: " << spectral.count << " samples, step "
            << spectral.step << ", from " << spectral.start << "\n";
        out << "  time:     " << time.count << " samples, step " << time.step
            << ", from " << time.start << "\n";
    } else {
        const auto& pair = std::get<states::EntangledSpec>(config.state);
        out << "state: entangled\n";
        describe_scales(out, states::check_scales(pair), false);
        double max_dt = 0.0;
        if (config.axis != ScanAxis::frequency)
            max_dt = std::max(std::abs(config.delta_t.min),
                              std::abs(config.delta_t.max));
        const auto grid =
            hom::entangled_overlap_grid(pair, max_dt, config.factors);
        out << "grids:\n";
        out << "  time-difference overlap: " << grid.count
            << " samples, step " << grid.step << ", from " << grid.start
            << "\n";
    }
}

void describe_scan(std::ostream& out, const ScanConfig& config) {
    out << "scan:\n";
    out << "  axis: " << to_string(config.axis) << "\n";
    auto line = [&](const char* name, const ShiftRange& r) {
        out << "  " << name << ": " << r.count << " points in [" << r.min
            << ", " << r.max << "]\n";
    };
    if (config.axis != ScanAxis::frequency) line("delta_t", config.delta_t);
    if (config.axis != ScanAxis::time) line("delta_omega", config.delta_omega);
    out << "  methods:";
    if (config.run_exact) out << " exact";
    if (config.run_approx) out << " approx";
    out << "\n";
}

void summarize_curve(std::ostream& out, const std::string& name,
                     const hom::DipCurve& curve) {
    size_t imin = 0;
    for (size_t i = 1; i < curve.coincidence.size(); ++i)
        if (curve.coincidence[i] < curve.coincidence[imin]) imin = i;
    const char* var =
        curve.axis == hom::ShiftAxis::time ? "delta_t" : "delta_omega";
    out << "  " << name << ": min " << curve.coincidence[imin] << " at "
        << var << " = " << curve.shifts[imin];
    std::optional<double> width;
    try {
        width = sampling::fwhm(curve.shifts, curve.coincidence);
    } catch (const std::invalid_argument&) {
    }
    if (width)
        out << ", dip fwhm " << *width;
    else
        out << ", dip fwhm n/a";
    out << "\n";
}

void summarize_surface(std::ostream& out, const std::string& name,
                       const hom::DipSurface& surface) {
    size_t imin = 0;
    for (size_t i = 1; i < surface.coincidence.size(); ++i)
        if (surface.coincidence[i] < surface.coincidence[imin]) imin = i;
    const size_t nw = surface.delta_omegas.size();
    out << "  " << name << ": min " << surface.coincidence[imin]
        << " at (delta_t = " << surface.delta_ts[imin / nw]
        << ", delta_omega = " << surface.delta_omegas[imin % nw] << ")\n";
}

struct VerifyOutcome {
    double product_dev{0.0};
    double entangled_dev{0.0};
};

constexpr double product_budget = 1e-4;
constexpr double entangled_budget = 1e-3;

// Cross-checks the fast paths against the brute-force oracle on reduced
// companion states: same structure as the scan states, scales shrunk so a
// full two-photon table fits in memory.
VerifyOutcome run_verify(size_t threads) {
    VerifyOutcome outcome;
    {
        states::CombSpec spec;
        spec.omega_spacing = 1.0;
        spec.line_shape    = {shapes::Kind::gaussian, 0.25, 0.0};
        spec.envelope      = {shapes::Kind::gaussian, 4.0, 0.0};
        const auto temporal = states::build_comb_temporal(spec);
        const auto cropped = sampling::normalized(sampling::crop_centered(
            temporal,
            std::min<size_t>(temporal.grid.count, oracle::default_size_cap)));
        const auto table = oracle::product_table(cropped, cropped);
        std::minstd_rand rng(12345u);
        std::uniform_int_distribution<int> cells(-20, 20);
        std::uniform_real_distribution<double> offsets(-0.5, 0.5);
        for (int i = 0; i < 25; ++i) {
            const hom::Shift s{cells(rng) * cropped.grid.step, offsets(rng)};
            const double fast = hom::coincidence_product(temporal, temporal, s);
            const double slow = oracle::coincidence_oracle(
                table, s, nullptr, oracle::DelayAssignment::second_argument,
                threads);
            outcome.product_dev =
                std::max(outcome.product_dev, std::abs(fast - slow));
        }
    }
    {
        states::EntangledSpec spec;
        spec.line_shape = {shapes::Kind::gaussian, 0.5, 0.0};
        spec.envelope   = {shapes::Kind::gaussian, 4.0, 0.0};
        const sampling::GridFactors factors{16.0, 8.0};
        const auto grid = states::entangled_time_grid(spec, factors);
        const auto table = states::build_entangled_temporal(spec, grid, grid);
        std::minstd_rand rng(54321u);
        std::uniform_int_distribution<int> cells(-16, 16);
        std::uniform_real_distribution<double> offsets(-0.2, 0.2);
        for (int i = 0; i < 25; ++i) {
            const hom::Shift s{cells(rng) * grid.step, offsets(rng)};
            const double fast = hom::coincidence_entangled(spec, s, factors);
            const double slow = oracle::coincidence_oracle(
                table, s, nullptr, oracle::DelayAssignment::second_argument,
                threads);
            outcome.entangled_dev =
                std::max(outcome.entangled_dev, std::abs(fast - slow));
        }
    }
    return outcome;
}

std::string verify_section(const VerifyOutcome& v) {
    auto line = [](const char* label, double dev, double budget) {
        std::ostringstream out;
        out << "  " << label << ": max |oracle - fast| = " << g3(dev)
            << " over 25 shifts (budget " << g3(budget) << "): "
            << (dev <= budget ? "ok" : "FAILED") << "\n";
        return out.str();
    };
    return "verify:\n" + line("product companion", v.product_dev,
                              product_budget) +
           line("entangled companion", v.entangled_dev, entangled_budget);
}

ScanConfig resolve(const std::string& config_path,
                   const std::string& preset) {
    if (!config_path.empty() && preset.empty()) return load_config(config_path);
    if (config_path.empty() && !preset.empty()) return preset_config(preset);
    throw std::invalid_argument("pass exactly one of --config or --preset");
}

int do_presets() {
    for (const auto& p : preset_catalog())
        std::cout << std::left << std::setw(12) << p.name << " " << p.summary
                  << "\n";
    return 0;
}

int do_check(const ScanConfig& config) {
    std::ostringstream out;
    out << std::setprecision(15);
    describe_state(out, config);
    describe_scan(out, config);
    std::cout << out.str() << "config ok\n";
    return 0;
}

int do_run(const ScanConfig& config, const std::string& out_dir,
           bool verify) {
    const size_t threads = threads_from_env();
    const hom::ScanOptions options{config.factors, threads};
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::ostringstream report;
    report << std::setprecision(15);
    report << "comb-hom scan report\n\n";
    describe_state(report, config);
    describe_scan(report, config);

    std::vector<std::pair<std::string, std::string>> files;
    std::ostringstream curves;
    curves << std::setprecision(15);
    curves << "outputs:\n";
    double cross = -1.0;

    if (config.axis != ScanAxis::plane) {
        const hom::ShiftAxis axis = config.axis == ScanAxis::time
                                        ? hom::ShiftAxis::time
                                        : hom::ShiftAxis::frequency;
        const auto shifts = (config.axis == ScanAxis::time ? config.delta_t
                                                           : config.delta_omega)
                                .values();
        std::optional<hom::DipCurve> exact, approx;
        if (config.run_exact)
            exact = hom::scan_1d(config.state, axis, shifts,
                                 hom::Method::exact_overlap, options);
        if (config.run_approx)
            approx = hom::scan_1d(config.state, axis, shifts,
                                  hom::Method::approx_formula, options);
        for (const auto* curve :
             {exact ? &*exact : nullptr, approx ? &*approx : nullptr}) {
            if (!curve) continue;
            const std::string name = to_string(config.axis) + "_" +
                                     method_token(curve->method) + ".csv";
            files.emplace_back(name, csv_from_curve(*curve));
            summarize_curve(curves, name, *curve);
        }
        if (exact && approx) {
            cross = 0.0;
            for (size_t i = 0; i < shifts.size(); ++i)
                cross = std::max(cross, std::abs(exact->coincidence[i] -
                                                 approx->coincidence[i]));
        }
    } else {
        const auto dts = config.delta_t.values();
        const auto dws = config.delta_omega.values();
        std::optional<hom::DipSurface> exact, approx;
        if (config.run_exact)
            exact = hom::scan_2d(config.state, dts, dws,
                                 hom::Method::exact_overlap, options);
        if (config.run_approx)
            approx = hom::scan_2d(config.state, dts, dws,
                                  hom::Method::approx_formula, options);
        for (const auto* surface :
             {exact ? &*exact : nullptr, approx ? &*approx : nullptr}) {
            if (!surface) continue;
            const std::string name = to_string(config.axis) + "_" +
                                     method_token(surface->method) + ".csv";
            files.emplace_back(name, csv_from_surface(*surface));
            summarize_surface(curves, name, *surface);
        }
        if (exact && approx) {
            cross = 0.0;
            for (size_t i = 0; i < exact->coincidence.size(); ++i)
                cross = std::max(cross, std::abs(exact->coincidence[i] -
                                                 approx->coincidence[i]));
        }
    }
    if (cross >= 0.0)
        curves << "  max |exact - approx| over the scan: " << g3(cross)
               << "\n";
    report << curves.str();

    bool verify_ok = true;
    if (verify) {
        const VerifyOutcome v = run_verify(threads);
        verify_ok = v.product_dev <= product_budget &&
                    v.entangled_dev <= entangled_budget;
        report << verify_section(v);
    }

    for (const auto& [name, content] : files)
        write_atomic(dir / name, content);
    write_atomic(dir / "report.txt", report.str());

    for (const auto& [name, content] : files)
        std::cout << "wrote " << (dir / name).string() << "\n";
    std::cout << "wrote " << (dir / "report.txt").string() << "\n";

    if (!verify_ok)
        throw ConsistencyError(
            "oracle cross-check exceeded its budget; details in report.txt");
    return 0;
}

} // namespace

int run_main(int argc, const char* const* argv) {
    CLI::App app{"Two-photon interference dip scans for frequency-comb and "
                 "time-anticorrelated states"};
    app.require_subcommand(1);

    std::string run_config, run_preset, out_dir = ".";
    bool verify = false;
    auto* run_cmd =
        app.add_subcommand("run", "run a scan and write CSV curves plus a "
                                  "report");
    auto* opt_config =
        run_cmd->add_option("--config", run_config, "JSON scan configuration");
    auto* opt_preset = run_cmd->add_option(
        "--preset", run_preset, "built-in configuration; see `presets`");
    opt_config->excludes(opt_preset);
    opt_preset->excludes(opt_config);
    run_cmd->add_option("--out", out_dir,
                        "output directory, created if missing");
    run_cmd->add_flag("--verify", verify,
                      "cross-check the fast paths against the brute-force "
                      "oracle on reduced companion states");

    std::string check_config, check_preset;
    auto* check_cmd = app.add_subcommand(
        "check", "validate a configuration and report scales and grids");
    auto* chk_config = check_cmd->add_option("--config", check_config,
                                             "JSON scan configuration");
    auto* chk_preset =
        check_cmd->add_option("--preset", check_preset, "built-in "
                                                        "configuration");
    chk_config->excludes(chk_preset);
    chk_preset->excludes(chk_config);

    auto* presets_cmd =
        app.add_subcommand("presets", "list built-in configurations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (presets_cmd->parsed()) return do_presets();
        if (check_cmd->parsed())
            return do_check(resolve(check_config, check_preset));
        return do_run(resolve(run_config, run_preset), out_dir, verify);
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cli
} // namespace combhom
