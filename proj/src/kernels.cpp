#include "aniso/kernels.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace aniso {

double plateau_window(double r) {
    return smooth_cutoff(0.5 * r) * (1.0 - smooth_cutoff(4.0 * r));
}

std::string kernel_kind_name(const KernelKind& kind) {
    switch (kind.family) {
        case KernelFamily::poisson: return "K";
        case KernelFamily::q: return "Q";
        case KernelFamily::deriv: return "deriv(" + std::to_string(kind.k) + ")";
        case KernelFamily::deriv_rho: return "deriv_rho(" + std::to_string(kind.k) + ")";
        case KernelFamily::deriv2:
            return "deriv2(" + std::to_string(kind.k) + "," + std::to_string(kind.l) + ")";
        case KernelFamily::rho_tilde:
            return "rho_tilde(" + std::to_string(kind.m) + ")";
        case KernelFamily::riesz: return "riesz";
    }
    return "?";
}

double inscribed_rho_radius(const GridSpec& grid, const DilationGroup& group) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        r = std::min(r, std::pow(0.5 * grid.length(j), 1.0 / group.exponent(j)));
    return r;
}

namespace {

// rho at which e^{-2 pi rho} drops below 1e-12.
constexpr double kNyquistRho = 4.3975;

void check_exponential_nyquist(const GridSpec& grid, const DilationGroup& group) {
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        const double nyq = static_cast<double>(grid.size(j)) / (2.0 * grid.length(j));
        if (std::pow(nyq, 1.0 / group.exponent(j)) < kNyquistRho)
            throw InvalidGrid(
                "synthesize_kernel: multiplier not negligible at the Nyquist shell "
                "(axis " + std::to_string(j) + ")");
    }
}

// Annulus rho(xi) in [r_lo, r_hi] must sit strictly inside the dual box and
// meet enough lattice points.
void check_annulus(const GridSpec& grid, const DilationGroup& group, double r_hi,
                   std::size_t support_count) {
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        const double nyq = static_cast<double>(grid.size(j)) / (2.0 * grid.length(j));
        const double reach = std::pow(r_hi, group.exponent(j));
        if (reach > nyq * (1.0 - 2.0 / static_cast<double>(grid.size(j))))
            throw InvalidGrid("unresolved annulus: support exceeds the dual box");
    }
    if (support_count < 8)
        throw InvalidGrid("unresolved annulus: too-coarse dual lattice");
}

KernelField synthesize_from_multiplier(
    const KernelKind& kind, const DilationGroup& group, const GridSpec& grid,
    const std::vector<double>* rho_dual, double decay_exponent, bool weight_shifted,
    const std::function<complex(std::span<const double>, double)>& multiplier) {
    const std::vector<double> rho_local =
        rho_dual ? std::vector<double>() : rho_dual_table(grid, group);
    const std::vector<double>& rho_xi = rho_dual ? *rho_dual : rho_local;
    SpectralField M(grid);
    std::vector<double> xi(grid.dimension());
    std::vector<std::size_t> idx(grid.dimension(), 0);
    for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
        for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = grid.frequency(j, idx[j]);
        M.coefficients()[flat] = multiplier(xi, rho_xi[flat]);
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid.size(j)) break;
            idx[j] = 0;
        }
    }
    return KernelField{inverse_transform(M), group, kind, decay_exponent, weight_shifted};
}

} // namespace

namespace {

KernelField synthesize_kernel_impl(const KernelKind& kind, const DilationGroup& group,
                                   const GridSpec& grid,
                                   const std::vector<double>* rho_dual);
KernelField synthesize_rho_tilde_impl(int m, double alpha, const DilationGroup& group,
                                      const GridSpec& grid,
                                      const std::vector<double>* rho_dual);
KernelField synthesize_riesz_impl(double alpha, const DilationGroup& group,
                                  const GridSpec& grid,
                                  const std::vector<double>* rho_dual);

} // namespace

KernelField synthesize_kernel(const KernelKind& kind, const DilationGroup& group,
                              const GridSpec& grid,
                              const std::vector<double>& rho_dual) {
    if (rho_dual.size() != grid.cell_count())
        throw InvalidInput("synthesize_kernel: rho table size mismatch");
    return synthesize_kernel_impl(kind, group, grid, &rho_dual);
}

KernelField synthesize_kernel(const KernelKind& kind, const DilationGroup& group,
                              const GridSpec& grid) {
    return synthesize_kernel_impl(kind, group, grid, nullptr);
}

namespace {

KernelField synthesize_kernel_impl(const KernelKind& kind, const DilationGroup& group,
                                   const GridSpec& grid,
                                   const std::vector<double>* rho_dual) {
    if (grid.dimension() != group.dimension())
        throw InvalidInput("synthesize_kernel: dimension mismatch");
    const double gamma = group.gamma();
    switch (kind.family) {
        case KernelFamily::poisson: {
            check_exponential_nyquist(grid, group);
            return synthesize_from_multiplier(
                kind, group, grid, rho_dual, gamma + 1.0, true,
                [](std::span<const double>, double r) -> complex {
                    return {std::exp(-2.0 * std::numbers::pi * r), 0.0};
                });
        }
        case KernelFamily::q: {
            check_exponential_nyquist(grid, group);
            return synthesize_from_multiplier(
                kind, group, grid, rho_dual, gamma + 1.0, true,
                [](std::span<const double>, double r) -> complex {
                    const double u = 2.0 * std::numbers::pi * r;
                    return {-u * std::exp(-u), 0.0};
                });
        }
        case KernelFamily::deriv: {
            check_exponential_nyquist(grid, group);
            const std::size_t k = kind.k;
            if (k >= group.dimension())
                throw InvalidParameter("synthesize_kernel: axis out of range");
            return synthesize_from_multiplier(
                kind, group, grid, rho_dual, gamma + 1.0 + group.exponent(k), true,
                [k](std::span<const double> xi, double r) -> complex {
                    return {xi[k] * std::exp(-2.0 * std::numbers::pi * r), 0.0};
                });
        }
        case KernelFamily::deriv_rho: {
            check_exponential_nyquist(grid, group);
            const std::size_t k = kind.k;
            if (k >= group.dimension())
                throw InvalidParameter("synthesize_kernel: axis out of range");
            return synthesize_from_multiplier(
                kind, group, grid, rho_dual, gamma + 1.0 + group.exponent(k), true,
                [k](std::span<const double> xi, double r) -> complex {
                    return {xi[k] * r * std::exp(-2.0 * std::numbers::pi * r), 0.0};
                });
        }
        case KernelFamily::deriv2: {
            check_exponential_nyquist(grid, group);
            const std::size_t k = kind.k, l = kind.l;
            if (k >= group.dimension() || l >= group.dimension())
                throw InvalidParameter("synthesize_kernel: axis out of range");
            return synthesize_from_multiplier(
                kind, group, grid, rho_dual,
                gamma + 1.0 + group.exponent(k) + group.exponent(l), true,
                [k, l](std::span<const double> xi, double r) -> complex {
                    return {xi[k] * xi[l] * std::exp(-2.0 * std::numbers::pi * r), 0.0};
                });
        }
        case KernelFamily::rho_tilde:
            return synthesize_rho_tilde_impl(kind.m, kind.alpha, group, grid, rho_dual);
        case KernelFamily::riesz:
            return synthesize_riesz_impl(kind.alpha, group, grid, rho_dual);
    }
    throw InvalidParameter("synthesize_kernel: unknown kind");
}

KernelField synthesize_rho_tilde_impl(int m, double alpha, const DilationGroup& group,
                                      const GridSpec& grid,
                                      const std::vector<double>* rho_dual) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("synthesize_rho_tilde: alpha must lie in (0,1)");
    const double scale = std::pow(2.0, static_cast<double>(m));
    const double r_hi = 4.0 / scale; // supp PhiTilde(2^m rho) = [1/4, 4]/2^m

    const std::vector<double> rho_local =
        rho_dual ? std::vector<double>() : rho_dual_table(grid, group);
    const std::vector<double>& rho_xi = rho_dual ? *rho_dual : rho_local;
    std::size_t support = 0;
    for (double r : rho_xi)
        if (plateau_window(scale * r) > 0.0) ++support;
    check_annulus(grid, group, r_hi, support);

    auto kind = KernelKind::rho_tilde(m, alpha);
    return synthesize_from_multiplier(
        kind, group, grid, rho_dual, group.gamma() - alpha, false,
        [scale, alpha](std::span<const double>, double r) -> complex {
            const double w = plateau_window(scale * r);
            if (w == 0.0 || r == 0.0) return {0.0, 0.0};
            return {std::pow(2.0 * std::numbers::pi * r, -alpha) * w, 0.0};
        });
}

KernelField synthesize_riesz_impl(double alpha, const DilationGroup& group,
                                  const GridSpec& grid,
                                  const std::vector<double>* rho_dual) {
    if (!(alpha > 0.0 && alpha < group.gamma()))
        throw InvalidParameter("synthesize_riesz_kernel: alpha must lie in (0, gamma)");
    // Dyadic window: telescoped sum of partition pieces Phi(2^m rho) over all
    // m whose support annulus [2^{-m-1}, 2^{-m+1}] the dual lattice resolves.
    double rho_nyq = std::numeric_limits<double>::infinity();
    double rho_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        const double nyq = static_cast<double>(grid.size(j)) / (2.0 * grid.length(j));
        rho_nyq = std::min(rho_nyq, std::pow(nyq, 1.0 / group.exponent(j)));
        rho_min = std::min(rho_min, std::pow(1.0 / grid.length(j), 1.0 / group.exponent(j)));
    }
    const int m_lo = static_cast<int>(std::ceil(1.0 - std::log2(rho_nyq)));
    const int m_hi = static_cast<int>(std::floor(1.0 - std::log2(rho_min)));
    if (m_hi < m_lo)
        throw InvalidGrid("synthesize_riesz_kernel: no resolvable dyadic piece");
    const double s_lo = std::pow(2.0, static_cast<double>(m_lo));
    const double s_hi1 = std::pow(2.0, static_cast<double>(m_hi + 1));

    auto kind = KernelKind::riesz(alpha);
    return synthesize_from_multiplier(
        kind, group, grid, rho_dual, group.gamma() - alpha, false,
        [s_lo, s_hi1, alpha](std::span<const double>, double r) -> complex {
            if (r == 0.0) return {0.0, 0.0};
            const double w = smooth_cutoff(s_lo * r) - smooth_cutoff(s_hi1 * r);
            if (w <= 0.0) return {0.0, 0.0};
            return {std::pow(2.0 * std::numbers::pi * r, -alpha) * w, 0.0};
        });
}

} // namespace

KernelField synthesize_rho_tilde(int m, double alpha, const DilationGroup& group,
                                 const GridSpec& grid) {
    return synthesize_rho_tilde_impl(m, alpha, group, grid, nullptr);
}

KernelField synthesize_riesz_kernel(double alpha, const DilationGroup& group,
                                    const GridSpec& grid) {
    return synthesize_riesz_impl(alpha, group, grid, nullptr);
}

DecayProfile decay_profile(const KernelField& kernel, double rho_cap) {
    return decay_profile(kernel, rho_cell_table(kernel.field.grid(), kernel.group),
                         rho_cap);
}

DecayProfile decay_profile(const KernelField& kernel,
                           const std::vector<double>& rho_x, double rho_cap) {
    const GridSpec& grid = kernel.field.grid();
    const DilationGroup& group = kernel.group;
    if (rho_x.size() != grid.cell_count())
        throw InvalidInput("decay_profile: rho table size mismatch");
    double cap = inscribed_rho_radius(grid, group);
    if (rho_cap > 0.0) cap = std::min(cap, rho_cap);

    std::vector<double> h(grid.dimension());
    for (std::size_t j = 0; j < grid.dimension(); ++j) h[j] = grid.spacing(j);
    const double rho_cell = rho(group, h);
    const int k_first = static_cast<int>(std::ceil(std::log2(rho_cell)));

    DecayProfile profile;
    if (kernel.weight_shifted) {
        profile.shell_lo.push_back(0.0);
        profile.shell_hi.push_back(std::pow(2.0, k_first));
        profile.sup_weighted.push_back(0.0);
    }
    for (int k = k_first; std::pow(2.0, k) < cap; ++k) {
        profile.shell_lo.push_back(std::pow(2.0, k));
        profile.shell_hi.push_back(std::min(std::pow(2.0, k + 1), cap));
        profile.sup_weighted.push_back(0.0);
    }

    for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
        const double r = rho_x[flat];
        if (r > cap) continue;
        // Locate the shell.
        std::size_t s = 0;
        bool found = false;
        for (std::size_t i = 0; i < profile.shell_lo.size(); ++i) {
            if (r >= profile.shell_lo[i] && r < profile.shell_hi[i]) {
                s = i;
                found = true;
                break;
            }
        }
        if (!found) continue;
        const double w = kernel.weight_shifted
                             ? std::pow(1.0 + r, kernel.decay_exponent)
                             : std::pow(r, kernel.decay_exponent);
        const double v = std::abs(kernel.field[flat]) * w;
        profile.sup_weighted[s] = std::max(profile.sup_weighted[s], v);
    }
    return profile;
}

void write_profile_csv(const DecayProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "shell_lo,shell_hi,sup_weighted\n";
    char buf[128];
    for (std::size_t i = 0; i < profile.shell_lo.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", profile.shell_lo[i],
                      profile.shell_hi[i], profile.sup_weighted[i]);
        out << buf;
    }
    if (!out) throw Error("profile write failed");
}

} // namespace aniso
