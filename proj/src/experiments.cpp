#include "aniso/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "aniso/operators.hpp"

#include "experiments_config.hpp"

namespace aniso {

namespace detail_cfg {

double num(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::uint64_t seed(const json& j, std::uint64_t fallback) {
    return j.contains("seed") ? j.at("seed").get<std::uint64_t>() : fallback;
}

std::vector<double> exponents(const json& j, std::vector<double> fallback) {
    if (j.contains("exponents")) return j.at("exponents").get<std::vector<double>>();
    return fallback;
}

GridSpec grid(const json& j, std::vector<std::size_t> sizes, std::vector<double> lengths) {
    if (j.contains("sizes")) sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("lengths")) lengths = j.at("lengths").get<std::vector<double>>();
    return GridSpec(std::move(sizes), std::move(lengths));
}

json echo(const json& config, json defaults) {
    for (auto& [k, v] : config.items()) defaults[k] = v;
    return defaults;
}

} // namespace detail_cfg

double fit_log2_slope(const std::vector<std::pair<double, double>>& points,
                      double* residual) {
    if (points.size() < 2)
        throw InvalidParameter("fit_log2_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    std::vector<std::pair<double, double>> logs;
    logs.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw InvalidParameter("fit_log2_slope: points must be positive");
        logs.emplace_back(std::log2(x), std::log2(y));
    }
    for (const auto& [lx, ly] : logs) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (residual) {
        const double intercept = (sy - slope * sx) / n;
        double r = 0.0;
        for (const auto& [lx, ly] : logs) {
            const double e = ly - slope * lx - intercept;
            r += e * e;
        }
        *residual = std::sqrt(r / n);
    }
    return slope;
}

// --- 1. quasi-norm axioms ---------------------------------------------------

namespace {

std::vector<double> random_point_log(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) {
        const double mag = std::pow(10.0, -3.0 + 6.0 * ((rng() >> 11) * 0x1.0p-53));
        v = ((rng() & 1) ? mag : -mag);
    }
    return x;
}

} // namespace

ExperimentReport experiment_rho_axioms(const json& config) {
    ExperimentReport report("rho-axioms");
    const std::size_t samples = static_cast<std::size_t>(
        detail_cfg::num(config, "samples", 100000));
    const std::uint64_t seed = detail_cfg::seed(config, 1);
    report.set_config(detail_cfg::echo(
        config, json{{"samples", samples}, {"seed", seed},
                     {"groups", json::array({{1.0, 1.0}, {1.0, 2.0}})}}));

    double worst_hom = 0.0, worst_tri = 0.0, worst_cde = 0.0;
    for (auto exps : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}}) {
        DilationGroup g(exps);
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i) {
            auto x = random_point_log(rng, 2);
            auto y = random_point_log(rng, 2);
            const double t = std::pow(10.0, -2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53));
            const double rx = rho(g, x);
            const double rtx = rho(g, apply_dilation(g, t, x));
            worst_hom = std::max(worst_hom, std::abs(rtx - t * rx) / (t * rx));
            std::vector<double> s{x[0] + y[0], x[1] + y[1]};
            worst_tri = std::max(worst_tri, rho(g, s) - rx - rho(g, y));
            const double e = std::hypot(x[0], x[1]);
            if (e <= 1.0) {
                worst_cde = std::max(worst_cde, rx - 1.0);       // (C)
                worst_cde = std::max(worst_cde, e - rx);         // (D)
            } else {
                worst_cde = std::max(worst_cde, 1.0 - rx);       // (C)
                worst_cde = std::max(worst_cde, rx - e);         // (E)
            }
        }
    }
    double worst_iso = 0.0;
    {
        DilationGroup g({1.0, 1.0});
        std::mt19937_64 rng(seed + 1);
        for (std::size_t i = 0; i < samples; ++i) {
            auto x = random_point_log(rng, 2);
            const double e = std::hypot(x[0], x[1]);
            worst_iso = std::max(worst_iso, std::abs(rho(g, x) - e) / (1.0 + e));
        }
    }
    report.add_metric("homogeneity_rel_err", worst_hom);
    report.add_metric("triangle_slack", worst_tri);
    report.add_metric("cde_violation", worst_cde);
    report.add_metric("isotropic_reduction_err", worst_iso);
    report.add_verdict("homogeneity", "homogeneity_rel_err", 1e-9, worst_hom <= 1e-9);
    report.add_verdict("triangle inequality", "triangle_slack", 1e-9,
                       worst_tri <= 1e-9);
    report.add_verdict("properties (C)(D)(E)", "cde_violation", 1e-9,
                       worst_cde <= 1e-9);
    report.add_verdict("isotropic reduction", "isotropic_reduction_err", 1e-10,
                       worst_iso <= 1e-10);
    report.add_note("all rho values from bracketed root-finding at tolerance 1e-12");
    return report;
}

// --- 2. polar / volume consistency ------------------------------------------

ExperimentReport experiment_polar_volume(const json& config) {
    ExperimentReport report("polar-volume");
    const std::size_t slices = static_cast<std::size_t>(
        detail_cfg::num(config, "slices", 4096));
    report.set_config(detail_cfg::echo(config, json{{"slices", slices}}));

    // |B(0,1)| by slice quadrature: width found by bisection on the gauge,
    // independent of property (C); substitution x1 = sin(phi) smooths ends.
    for (auto exps : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}}) {
        DilationGroup g(exps);
        double area = 0.0;
        for (std::size_t i = 0; i < slices; ++i) {
            const double phi = -0.5 * std::numbers::pi +
                               std::numbers::pi * (i + 0.5) / slices;
            const double x1 = std::sin(phi);
            double lo = 0.0, hi = 2.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                std::vector<double> p{x1, mid};
                (rho_compare(g, p, 1.0) <= 0 ? lo : hi) = mid;
            }
            area += 2.0 * lo * std::cos(phi) * std::numbers::pi / slices;
        }
        const std::string tag = exps[1] == 1.0 ? "iso" : "aniso";
        report.add_metric("ball_area_" + tag, area);
        report.add_metric("ball_area_rel_err_" + tag,
                          std::abs(area - std::numbers::pi) / std::numbers::pi);
        report.add_verdict("|B(0,1)| = pi (" + tag + ")",
                           "ball_area_rel_err_" + tag, 1e-4,
                           std::abs(area - std::numbers::pi) / std::numbers::pi <= 1e-4);
    }

    // int_{S^1} mu = gamma pi for a = (1,2) by the periodic trapezoid rule
    DilationGroup g({1.0, 2.0});
    double integral = 0.0;
    for (std::size_t i = 0; i < slices; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / slices;
        std::vector<double> theta{std::cos(phi), std::sin(phi)};
        integral += polar_weight(g, theta);
    }
    integral *= 2.0 * std::numbers::pi / slices;
    const double target = g.gamma() * std::numbers::pi;
    report.add_metric("mu_integral", integral);
    report.add_metric("mu_integral_rel_err", std::abs(integral - target) / target);
    report.add_verdict("int mu = gamma pi", "mu_integral_rel_err", 1e-6,
                       std::abs(integral - target) / target <= 1e-6);
    report.add_note("mu(theta) = <P theta, theta>, validated against the ball measure");
    return report;
}

// --- 3. transform correctness -------------------------------------------------

ExperimentReport experiment_transform(const json& config) {
    ExperimentReport report("transform");
    const std::uint64_t seed = detail_cfg::seed(config, 3);
    GridSpec grid = detail_cfg::grid(config, {128, 128}, {16.0, 16.0});
    const std::size_t trials = static_cast<std::size_t>(
        detail_cfg::num(config, "trials", 8));
    report.set_config(detail_cfg::echo(
        config, json{{"sizes", grid.sizes()}, {"lengths", grid.lengths()},
                     {"seed", seed}, {"trials", trials}}));

    double worst_parseval = 0.0, worst_roundtrip = 0.0;
    std::mt19937_64 rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<complex> v(grid.cell_count());
        for (auto& z : v)
            z = {(rng() >> 11) * 0x1.0p-53 - 0.5, (rng() >> 11) * 0x1.0p-53 - 0.5};
        SampledField f(grid, std::move(v));
        auto F = forward_transform(f);
        const double space = lp_norm(f, 2.0);
        const double freq = l2_norm_spectral(F);
        worst_parseval = std::max(worst_parseval, std::abs(space - freq) / space);
        auto back = inverse_transform(F);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < grid.cell_count(); ++i) {
            diff = std::max(diff, std::abs(back[i] - f[i]));
            scale = std::max(scale, std::abs(f[i]));
        }
        worst_roundtrip = std::max(worst_roundtrip, diff / scale);
    }
    report.add_metric("parseval_rel_err", worst_parseval);
    report.add_metric("roundtrip_rel_err", worst_roundtrip);
    report.add_verdict("parseval", "parseval_rel_err", 1e-10, worst_parseval <= 1e-10);
    report.add_verdict("round trip", "roundtrip_rel_err", 1e-12,
                       worst_roundtrip <= 1e-12);
    return report;
}

// --- 4. semigroup law ---------------------------------------------------------

ExperimentReport experiment_semigroup_law(const json& config) {
    ExperimentReport report("semigroup-law");
    const std::uint64_t seed = detail_cfg::seed(config, 4);
    report.set_config(detail_cfg::echo(
        config, json{{"seed", seed}, {"t_values", {0.25, 1.0, 4.0}}}));

    double worst = 0.0;
    for (auto exps : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}}) {
        DilationGroup g(exps);
        GridSpec grid({128, 128}, {8.0, 8.0});
        auto f = make_band_limited(grid, g, seed);
        for (double t : {0.25, 1.0, 4.0}) {
            for (double s : {0.25, 1.0, 4.0}) {
                auto two_step = poisson_semigroup(poisson_semigroup(f, s, g), t, g);
                auto one_step = poisson_semigroup(f, t + s, g);
                double num = 0.0;
                for (std::size_t i = 0; i < grid.cell_count(); ++i)
                    num += std::norm(two_step[i] - one_step[i]);
                worst = std::max(worst,
                                 std::sqrt(num * grid.cell_volume()) / lp_norm(f, 2.0));
            }
        }
    }
    report.add_metric("semigroup_rel_err", worst);
    report.add_verdict("K_t K_s = K_{t+s}", "semigroup_rel_err", 1e-8, worst <= 1e-8);
    report.add_note("error measured in L2 relative to ||f||_2 (operator-norm sense)");
    return report;
}

// --- 5. subordination identity -------------------------------------------------

ExperimentReport experiment_subordination(const json& config) {
    ExperimentReport report("subordination");
    const std::uint64_t seed = detail_cfg::seed(config, 5);
    report.set_config(detail_cfg::echo(
        config, json{{"seed", seed}, {"alphas", {0.3, 0.5, 0.7}},
                     {"t_values", {0.5, 1.0, 2.0}}}));

    double worst = 0.0;
    for (auto exps : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}}) {
        DilationGroup g(exps);
        GridSpec grid({128, 128}, {8.0, 8.0});
        auto f = make_band_limited(grid, g, seed);
        for (double alpha : {0.3, 0.5, 0.7}) {
            for (double t : {0.5, 1.0, 2.0}) {
                auto quadrature_path = subordination(f, alpha, t, g);
                auto composed = poisson_semigroup(riesz_potential(f, alpha, g), t, g);
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < grid.cell_count(); ++i) {
                    num += std::norm(quadrature_path[i] - composed[i]);
                    den += std::norm(composed[i]);
                }
                worst = std::max(worst, std::sqrt(num / den));
            }
        }
    }
    report.add_metric("subordination_rel_err", worst);
    report.add_verdict("quadrature equals K_t I_alpha", "subordination_rel_err", 1e-3,
                       worst <= 1e-3);
    report.add_note("geometric s-grid, ratio 2^{1/4}, analytic head and tail");
    return report;
}

// --- registry -----------------------------------------------------------------

std::vector<std::string> experiment_names() {
    return {"rho-axioms",  "polar-volume", "transform", "semigroup-law",
            "subordination", "kernel-decay", "dalpha-l2", "tj-decay",
            "gq-domination", "cz-suite",     "weak-type", "sharpness"};
}

ExperimentReport run_experiment(const std::string& name, const json& config) {
    if (name == "rho-axioms") return experiment_rho_axioms(config);
    if (name == "polar-volume") return experiment_polar_volume(config);
    if (name == "transform") return experiment_transform(config);
    if (name == "semigroup-law") return experiment_semigroup_law(config);
    if (name == "subordination") return experiment_subordination(config);
    if (name == "kernel-decay") return experiment_kernel_decay(config);
    if (name == "dalpha-l2") return experiment_dalpha_l2(config);
    if (name == "tj-decay") return experiment_tj_decay(config);
    if (name == "gq-domination") return experiment_gq_domination(config);
    if (name == "cz-suite") return experiment_cz_suite(config);
    if (name == "weak-type") return experiment_weak_type(config);
    if (name == "sharpness") return experiment_sharpness(config);
    throw InvalidParameter("unknown experiment: " + name);
}

} // namespace aniso
