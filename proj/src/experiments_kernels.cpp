#include <cmath>
#include <numbers>

#include "aniso/experiments.hpp"
#include "experiments_config.hpp"
#include "aniso/kernels.hpp"

namespace aniso {

namespace {

std::vector<KernelKind> lemma31_kinds(std::size_t n) {
    std::vector<KernelKind> kinds{KernelKind::poisson(), KernelKind::q_kernel()};
    for (std::size_t k = 0; k < n; ++k) {
        kinds.push_back(KernelKind::deriv(k));
        kinds.push_back(KernelKind::deriv_rho(k));
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) kinds.push_back(KernelKind::deriv2(k, l));
    return kinds;
}

struct BoxProfiles {
    GridSpec grid;
    double cap;
    std::vector<DecayProfile> profiles; // aligned with kinds
};

BoxProfiles profile_box(const DilationGroup& group, const GridSpec& grid,
                        const std::vector<KernelKind>& kinds) {
    BoxProfiles out{grid, 0.5 * inscribed_rho_radius(grid, group), {}};
    const auto rho_dual = rho_dual_table(grid, group);
    const auto rho_cell = rho_cell_table(grid, group);
    out.profiles.reserve(kinds.size());
    for (const KernelKind& kind : kinds) {
        KernelField k = synthesize_kernel(kind, group, grid, rho_dual);
        out.profiles.push_back(decay_profile(k, rho_cell, out.cap));
    }
    return out;
}

// Adapted grid for rho_tilde(m): annulus rho(xi) in [1/(4s), 4/s], s = 2^m;
// box reaches rho ~ reach * s; cells resolve rho ~ s/4. The tweak keeps the
// boxes across m from being exact dilates of one another.
GridSpec rho_tilde_grid(const DilationGroup& g, int m, double reach, double tweak) {
    const double s = std::pow(2.0, m);
    std::vector<double> lengths(g.dimension());
    std::vector<std::size_t> sizes(g.dimension());
    for (std::size_t j = 0; j < g.dimension(); ++j) {
        const double a = g.exponent(j);
        lengths[j] = 2.0 * std::pow(reach * s, a) * (1.0 + tweak);
        const double dual_need = 2.0 * lengths[j] * std::pow(4.0 / s, a) * 1.15;
        const double cell_need = lengths[j] / std::pow(s / 4.0, a);
        std::size_t n = 64;
        while (static_cast<double>(n) < std::max(dual_need, cell_need)) n <<= 1;
        sizes[j] = n;
    }
    return GridSpec(sizes, lengths);
}

} // namespace

ExperimentReport experiment_kernel_decay(const json& config) {
    ExperimentReport report("kernel-decay");
    const double flatness = detail_cfg::num(config, "flatness_factor", 1.15);
    const double doubling_tol = detail_cfg::num(config, "doubling_tolerance", 0.10);
    const double uniformity = detail_cfg::num(config, "rho_tilde_uniformity", 1.25);
    report.set_config(detail_cfg::echo(
        config, json{{"flatness_factor", flatness},
                     {"doubling_tolerance", doubling_tol},
                     {"rho_tilde_uniformity", uniformity},
                     {"rho_tilde_alphas", {0.3, 0.5, 0.7}},
                     {"rho_tilde_m_range", {-3, 3}}}));

    // ---- Lemma 3.1: K, Q and the derivative families -----------------------
    for (int aniso_case = 0; aniso_case < 2; ++aniso_case) {
        DilationGroup group(aniso_case ? std::vector<double>{1.0, 2.0}
                                       : std::vector<double>{1.0, 1.0});
        const std::string tag = aniso_case ? "aniso" : "iso";
        const auto kinds = lemma31_kinds(2);

        const GridSpec box_a = aniso_case ? GridSpec({512, 4096}, {32.0, 64.0})
                                          : GridSpec({256, 256}, {16.0, 16.0});
        const GridSpec box_b = aniso_case ? GridSpec({1024, 8192}, {64.0, 128.0})
                                          : GridSpec({512, 512}, {32.0, 32.0});
        auto a = profile_box(group, box_a, kinds);
        auto b = profile_box(group, box_b, kinds);

        double worst_flat = 0.0;   // sup / (flatness * inner max), want <= 1
        double worst_double = 0.0; // relative change on common shells
        for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
            const DecayProfile& pb = b.profiles[ki];
            double inner_max = 0.0;
            for (std::size_t i = 0; i < pb.shell_lo.size(); ++i)
                if (pb.shell_hi[i] <= 4.0 + 1e-12)
                    inner_max = std::max(inner_max, pb.sup_weighted[i]);
            if (inner_max > 0.0)
                for (std::size_t i = 0; i < pb.shell_lo.size(); ++i)
                    worst_flat = std::max(
                        worst_flat, pb.sup_weighted[i] / (flatness * inner_max));

            // compare a full octave inside the smaller certified cap, where
            // image contamination is negligible even near kernel sign changes
            const DecayProfile& pa = a.profiles[ki];
            for (std::size_t i = 0; i < pa.shell_lo.size(); ++i)
                for (std::size_t j = 0; j < pb.shell_lo.size(); ++j)
                    if (std::abs(pa.shell_lo[i] - pb.shell_lo[j]) < 1e-12 &&
                        std::abs(pa.shell_hi[i] - pb.shell_hi[j]) < 1e-12 &&
                        pa.shell_hi[i] <= 0.5 * a.cap + 1e-12 &&
                        pa.sup_weighted[i] > 0.0)
                        worst_double = std::max(
                            worst_double, std::abs(pb.sup_weighted[j] -
                                                   pa.sup_weighted[i]) /
                                              pa.sup_weighted[i]);

            Series s;
            s.name = tag + "_profile_" + kernel_kind_name(kinds[ki]);
            for (std::size_t i = 0; i < pb.shell_lo.size(); ++i)
                s.points.emplace_back(pb.shell_lo[i], pb.sup_weighted[i]);
            report.add_series(std::move(s));
        }
        report.add_metric("lemma3.1_flatness_ratio_" + tag, worst_flat);
        report.add_metric("lemma3.1_doubling_change_" + tag, worst_double);
        report.add_verdict("lemma 3.1 flatness (" + tag + ")",
                           "lemma3.1_flatness_ratio_" + tag, 1.0, worst_flat <= 1.0,
                           "sup over outer shells vs " + std::to_string(flatness) +
                               " x inner max, wrap-certified range");
        report.add_verdict("lemma 3.1 box-doubling (" + tag + ")",
                           "lemma3.1_doubling_change_" + tag, doubling_tol,
                           worst_double <= doubling_tol, "common interior shells");
        report.add_note(tag + ": profiles measured on rho <= inscribed/2 (" +
                        std::to_string(a.cap) + " and " + std::to_string(b.cap) +
                        "); terminal-octave wraparound excluded by construction");
    }

    // ---- Lemma 7.2: rho_tilde uniformity over m ----------------------------
    for (int aniso_case = 0; aniso_case < 2; ++aniso_case) {
        DilationGroup group(aniso_case ? std::vector<double>{1.0, 2.0}
                                       : std::vector<double>{1.0, 1.0});
        const std::string tag = aniso_case ? "aniso" : "iso";
        double worst_ratio = 1.0;
        for (double alpha : {0.3, 0.5, 0.7}) {
            double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
            Series s;
            s.name = tag + "_rho_tilde_alpha" + std::to_string(alpha).substr(0, 3);
            for (int m = -3; m <= 3; ++m) {
                const double scale = std::pow(2.0, m);
                const double tweak = 0.02 * (m + 3) + 0.013 * ((m * m) % 5);
                GridSpec grid = rho_tilde_grid(group, m, 6.0, tweak);
                auto kernel = synthesize_rho_tilde(m, alpha, group, grid);
                auto prof = decay_profile(kernel);
                // uniformity compared over the scaled window [s/2, 4s]
                double best = 0.0;
                for (std::size_t i = 0; i < prof.shell_lo.size(); ++i)
                    if (prof.shell_lo[i] >= 0.49 * scale &&
                        prof.shell_hi[i] <= 4.05 * scale)
                        best = std::max(best, prof.sup_weighted[i]);
                cmin = std::min(cmin, best);
                cmax = std::max(cmax, best);
                s.points.emplace_back(static_cast<double>(m), best);
            }
            report.add_series(std::move(s));
            worst_ratio = std::max(worst_ratio, cmax / cmin);
        }
        report.add_metric("lemma7.2_uniformity_ratio_" + tag, worst_ratio);
        report.add_verdict("lemma 7.2 uniformity (" + tag + ")",
                           "lemma7.2_uniformity_ratio_" + tag, uniformity,
                           worst_ratio <= uniformity,
                           "max/min over m of the windowed profile bound");
    }
    report.add_note("profile weight: (1+rho)^{gamma+1+...} for the e^{-2 pi rho} "
                    "family, rho^{gamma-alpha} for rho_tilde");
    return report;
}

} // namespace aniso
