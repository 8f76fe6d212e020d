// End-to-end acceptance checks. Each criterion prints one pass/fail line;
// the exit status is the number of failed criteria.

#include "combhom/config.hpp"
#include "combhom/hom.hpp"
#include "combhom/oracle.hpp"
#include "combhom/sampling.hpp"
#include "combhom/shapes.hpp"
#include "combhom/states.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

using namespace combhom;
namespace fs = std::filesystem;

namespace {

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Checker {
    int failures = 0;

    void run(const char* id, const char* label,
             const std::function<std::pair<bool, std::string>()>& body) {
        bool ok = false;
        std::string detail;
        try {
            std::tie(ok, detail) = body();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("%-4s %-46s %s  %s\n", id, label, ok ? "pass" : "FAIL",
                    detail.c_str());
        std::fflush(stdout);
    }
};

std::vector<double> linspace(double lo, double hi, size_t count) {
    std::vector<double> xs(count);
    for (size_t i = 0; i + 1 < count; ++i)
        xs[i] = lo + (hi - lo) * double(i) / double(count - 1);
    xs[count - 1] = hi;
    return xs;
}

// Root of c(x) = target on [lo, hi], assuming c is monotone there.
double crossing(const std::function<double(double)>& c, double target,
                double lo, double hi) {
    double flo = c(lo) - target;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = c(mid) - target;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main() {
    Checker check;

    const cli::ScanConfig gauss_cfg = cli::preset_config("gauss-comb");
    const cli::ScanConfig pair_cfg = cli::preset_config("entangled");
    const auto& gauss = std::get<states::CombSpec>(gauss_cfg.state);
    const auto& pair = std::get<states::EntangledSpec>(pair_cfg.state);

    const auto temporal = states::build_comb_temporal(gauss, gauss_cfg.factors);
    auto comb_c = [&](double dt, double dw) {
        return hom::coincidence_product(temporal, temporal, {dt, dw});
    };
    auto pair_c = [&](double dt, double dw) {
        return hom::coincidence_entangled(pair, {dt, dw}, pair_cfg.factors);
    };

    const states::ScaleReport gauss_scales = states::check_scales(gauss);
    const double sigma_t = gauss_scales.dt_eta;
    const double period = gauss_scales.period;

    check.run("A1", "zero shift gives a perfect dip", [&] {
        double worst = 0.0;
        for (const auto& entry : cli::preset_catalog()) {
            const auto config = cli::preset_config(entry.name);
            const double c = std::visit(
                [&](const auto& spec) -> double {
                    using T = std::decay_t<decltype(spec)>;
                    if constexpr (std::is_same_v<T, states::CombSpec>) {
                        const auto state =
                            states::build_comb_temporal(spec, config.factors);
                        return hom::coincidence_product(state, state,
                                                        {0.0, 0.0});
                    } else {
                        return hom::coincidence_entangled(spec, {0.0, 0.0},
                                                          config.factors);
                    }
                },
                config.state);
            worst = std::max(worst, std::abs(c));
        }
        return std::make_pair(worst <= 1e-9,
                              "max |C(0,0)| = " + g3(worst) + " over " +
                                  std::to_string(cli::preset_catalog().size()) +
                                  " presets, limit 1e-9");
    });

    check.run("A2", "gaussian dips match the closed forms", [&] {
        double comb_dev = 0.0, pair_dev = 0.0;
        for (double dt : linspace(-4.0 * sigma_t, 4.0 * sigma_t, 101)) {
            const double comb_model =
                0.5 * (1.0 - std::exp(-dt * dt / (4.0 * sigma_t * sigma_t)));
            const double pair_model =
                0.5 * (1.0 - std::exp(-dt * dt / (2.0 * sigma_t * sigma_t)));
            comb_dev = std::max(comb_dev,
                                std::abs(comb_c(dt, 0.0) - comb_model));
            pair_dev = std::max(pair_dev,
                                std::abs(pair_c(dt, 0.0) - pair_model));
        }
        return std::make_pair(comb_dev <= 1e-4 && pair_dev <= 1e-4,
                              "comb " + g3(comb_dev) + ", entangled " +
                                  g3(pair_dev) + ", limit 1e-4");
    });

    check.run("A3", "comb dip is sqrt(2) wider than entangled", [&] {
        auto comb_dip = [&](double dt) { return comb_c(dt, 0.0); };
        auto pair_dip = [&](double dt) { return pair_c(dt, 0.0); };
        const double fwhm_comb =
            2.0 * crossing(comb_dip, 0.25, 0.0, 4.0 * sigma_t);
        const double fwhm_pair =
            2.0 * crossing(pair_dip, 0.25, 0.0, 4.0 * sigma_t);
        const double ratio = fwhm_comb / fwhm_pair;
        const double err = std::abs(ratio / std::sqrt(2.0) - 1.0);
        return std::make_pair(err <= 0.02,
                              "ratio " + g3(ratio) + ", off by " + g3(err) +
                                  ", limit 2%");
    });

    check.run("A4", "frequency dip is as narrow as one line", [&] {
        auto freq_dip = [&](double dw) { return comb_c(0.0, dw); };
        const double w = gauss_scales.domega_phi;
        const double predicted = 4.0 * w * std::sqrt(std::log(2.0));
        const double measured =
            2.0 * crossing(freq_dip, 0.25, 0.0,
                           0.4 * gauss_scales.omega_spacing);
        const double err = std::abs(measured / predicted - 1.0);
        double pair_max = 0.0;
        const double half_spacing = 0.5 * gauss_scales.omega_spacing;
        for (double dw : linspace(-half_spacing, half_spacing, 101))
            pair_max = std::max(pair_max, pair_c(0.0, dw));
        return std::make_pair(
            err <= 0.02 && pair_max < 0.01,
            "comb fwhm " + g3(measured) + " vs " + g3(predicted) +
                " (off by " + g3(err) + ", limit 2%), entangled max " +
                g3(pair_max) + ", limit 0.01");
    });

    check.run("A5", "the 2d surface separates cleanly", [&] {
        const auto plane_cfg = cli::preset_config("2d-comb");
        const auto dts = plane_cfg.delta_t.values();
        const auto dws = plane_cfg.delta_omega.values();
        const hom::ScanOptions options{plane_cfg.factors, 0};

        const auto exact = hom::scan_2d(plane_cfg.state, dts, dws,
                                        hom::Method::exact_overlap, options);
        const auto approx = hom::scan_2d(plane_cfg.state, dts, dws,
                                         hom::Method::approx_formula, options);
        double split_dev = 0.0;
        for (size_t i = 0; i < exact.coincidence.size(); ++i)
            split_dev = std::max(split_dev,
                                 std::abs(exact.coincidence[i] -
                                          approx.coincidence[i]));

        const hom::ScanOptions pair_options{pair_cfg.factors, 0};
        const auto surface =
            hom::scan_2d(hom::StateSpec{pair}, dts, dws,
                         hom::Method::exact_overlap, pair_options);
        double row_swing = 0.0;
        for (size_t i = 0; i < dts.size(); ++i) {
            double lo = 1.0, hi = 0.0;
            for (size_t j = 0; j < dws.size(); ++j) {
                const double c = surface.coincidence[i * dws.size() + j];
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            row_swing = std::max(row_swing, hi - lo);
        }
        return std::make_pair(
            split_dev <= 5e-3 && row_swing < 1e-3,
            "comb exact vs product form " + g3(split_dev) +
                " (limit 5e-3), entangled frequency swing " + g3(row_swing) +
                " (limit 1e-3)");
    });

    check.run("A6", "fast paths match the two-photon oracle", [&] {
        states::CombSpec comb;
        comb.omega_spacing = 1.0;
        comb.line_shape    = {shapes::Kind::gaussian, 0.25, 0.0};
        comb.envelope      = {shapes::Kind::gaussian, 4.0, 0.0};
        const auto state = states::build_comb_temporal(comb);
        const auto cropped = sampling::normalized(sampling::crop_centered(
            state, std::min<size_t>(state.grid.count,
                                    oracle::default_size_cap)));
        const auto table = oracle::product_table(cropped, cropped);
        std::minstd_rand comb_rng(12345u);
        std::uniform_int_distribution<int> comb_cells(-20, 20);
        std::uniform_real_distribution<double> comb_offsets(-0.5, 0.5);
        double comb_dev = 0.0;
        for (int i = 0; i < 25; ++i) {
            const hom::Shift s{comb_cells(comb_rng) * cropped.grid.step,
                               comb_offsets(comb_rng)};
            comb_dev = std::max(
                comb_dev, std::abs(hom::coincidence_product(state, state, s) -
                                   oracle::coincidence_oracle(table, s)));
        }

        states::EntangledSpec two;
        two.line_shape = {shapes::Kind::gaussian, 0.5, 0.0};
        two.envelope   = {shapes::Kind::gaussian, 4.0, 0.0};
        const sampling::GridFactors factors{16.0, 8.0};
        const auto grid = states::entangled_time_grid(two, factors);
        const auto joint = states::build_entangled_temporal(two, grid, grid);
        std::minstd_rand pair_rng(54321u);
        std::uniform_int_distribution<int> pair_cells(-16, 16);
        std::uniform_real_distribution<double> pair_offsets(-0.2, 0.2);
        double pair_dev = 0.0;
        for (int i = 0; i < 25; ++i) {
            const hom::Shift s{pair_cells(pair_rng) * grid.step,
                               pair_offsets(pair_rng)};
            pair_dev = std::max(
                pair_dev,
                std::abs(hom::coincidence_entangled(two, s, factors) -
                         oracle::coincidence_oracle(joint, s)));
        }
        return std::make_pair(comb_dev <= 1e-4 && pair_dev <= 1e-3,
                              "product " + g3(comb_dev) +
                                  " (limit 1e-4), entangled " + g3(pair_dev) +
                                  " (limit 1e-3), 25 shifts each");
    });

    check.run("A7", "scale orderings hold on every preset", [&] {
        bool ordered = true;
        for (const auto& entry : cli::preset_catalog()) {
            const auto config = cli::preset_config(entry.name);
            const auto report = std::visit(
                [](const auto& spec) { return states::check_scales(spec); },
                config.state);
            ordered = ordered && report.frequency_ordering_ok &&
                      report.temporal_ordering_ok && report.bound_ok;
        }
        const double product = gauss_scales.uncertainty_product;
        const double err = std::abs(product / 0.00125 - 1.0);
        return std::make_pair(ordered && err <= 0.01,
                              std::string(ordered ? "orderings ok"
                                                  : "ordering violated") +
                                  ", gaussian product " + g3(product) +
                                  " vs 0.00125 (off by " + g3(err) +
                                  ", limit 1%)");
    });

    check.run("A8", "spectral and direct builds agree pointwise", [&] {
        // The default tooth_cutoff truncates at the 1e-6 scale itself, so
        // tighten it until only the construction identity is visible.
        states::CombSpec tight = gauss;
        tight.tooth_cutoff = 1e-12;
        const auto via_dft =
            states::build_comb_temporal(tight, gauss_cfg.factors);
        const auto direct =
            states::build_comb_temporal_direct(tight, via_dft.grid);
        double dev = 0.0;
        for (size_t i = 0; i < via_dft.amplitudes.size(); ++i)
            dev = std::max(dev, std::abs(via_dft.amplitudes[i] -
                                         direct.amplitudes[i]));
        return std::make_pair(dev <= 1e-6,
                              "max pointwise gap " + g3(dev) + ", limit 1e-6");
    });

    check.run("A9", "the dip revives at whole periods", [&] {
        double worst = 0.0;
        bool interior = true;
        for (int m : {-2, -1, 1, 2}) {
            const auto window =
                linspace(m * period - 0.15, m * period + 0.15, 61);
            const auto curve =
                hom::scan_1d(hom::StateSpec{gauss}, hom::ShiftAxis::time,
                             window, hom::Method::exact_overlap,
                             {gauss_cfg.factors, 0});
            size_t at = 0;
            for (size_t i = 1; i < curve.coincidence.size(); ++i)
                if (curve.coincidence[i] < curve.coincidence[at]) at = i;
            interior = interior && at > 0 &&
                       at + 1 < curve.coincidence.size();
            const double mt = m * period;
            const double predicted =
                0.5 * (1.0 - std::exp(-mt * mt / 400.0));
            worst = std::max(worst,
                             std::abs(curve.coincidence[at] - predicted));
        }
        return std::make_pair(worst <= 2e-3 && interior,
                              std::string("local minima at +-T, +-2T") +
                                  (interior ? "" : " NOT interior") +
                                  ", depth gap " + g3(worst) +
                                  ", limit 2e-3");
    });

    check.run("A10", "output is byte-identical across threads", [&] {
        const char* bin = std::getenv("COMB_HOM_BIN");
        if (!bin)
            return std::make_pair(false,
                                  std::string("COMB_HOM_BIN is not set"));
        const fs::path root =
            fs::temp_directory_path() / "combhom_acceptance";
        fs::remove_all(root);
        const char* envs[] = {"COMB_HOM_THREADS=1 ", "COMB_HOM_THREADS=3 ",
                              "unset COMB_HOM_THREADS; "};
        std::vector<fs::path> dirs;
        for (int i = 0; i < 3; ++i) {
            const fs::path out = root / ("run" + std::to_string(i));
            const std::string cmd = std::string(envs[i]) + "\"" + bin +
                                    "\" run --preset 2d-comb --out \"" +
                                    out.string() + "\" > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0)
                return std::make_pair(false,
                                      "run " + std::to_string(i) + " failed");
            dirs.push_back(out);
        }
        for (const char* name :
             {"plane_exact.csv", "plane_approx.csv", "report.txt"}) {
            const std::string first = slurp(dirs[0] / name);
            if (first.empty())
                return std::make_pair(false, std::string(name) + " is empty");
            for (size_t i = 1; i < dirs.size(); ++i)
                if (slurp(dirs[i] / name) != first)
                    return std::make_pair(false, std::string(name) +
                                                     " differs between runs");
        }
        fs::remove_all(root);
        return std::make_pair(true, std::string("3 runs, 3 files compared"));
    });

    if (check.failures == 0)
        std::printf("acceptance: all 10 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", check.failures);
    return check.failures;
}
