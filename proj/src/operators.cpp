#include "aniso/operators.hpp"

#include <algorithm>
#include <cmath>
#include <climits>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>

#include "aniso/fft.hpp"

namespace aniso {

namespace {

constexpr double kMeanFreeTolerance = 1e-8;

SpectralField forward_mean_free(const SampledField& f, const char* who) {
    SpectralField F = forward_transform(f);
    const double mass = std::abs(F[F.grid().zero_frequency_flat()]);
    const double norm = l2_norm_spectral(F);
    if (mass > kMeanFreeTolerance * norm)
        throw MeanNotRemoved(std::string(who) +
                                 ": input carries zero-frequency mass |f_hat(0)| = " +
                                 std::to_string(mass) + " > 1e-8 ||f||_2 = " +
                                 std::to_string(kMeanFreeTolerance * norm),
                             mass);
    return F;
}

// Multiply coefficients by a function of rho(xi); the zero mode gets
// zero_value (continuity for e^{-2 pi rho}, hard zero for Riesz).
template <class Fn>
SampledField apply_rho_multiplier(SpectralField F, const DilationGroup& group, Fn&& fn,
                                  double zero_value) {
    const GridSpec& g = F.grid();
    const auto rho_xi = rho_dual_table(g, group);
    const std::size_t zero = g.zero_frequency_flat();
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        if (flat == zero)
            F.coefficients()[flat] *= zero_value;
        else
            F.coefficients()[flat] *= fn(rho_xi[flat]);
    }
    return inverse_transform(F);
}

} // namespace

double zero_mode_mass(const SampledField& f) {
    SpectralField F = forward_transform(f);
    return std::abs(F[F.grid().zero_frequency_flat()]);
}

DyadicQuadrature default_quadrature(const GridSpec& grid, const DilationGroup& group) {
    std::vector<double> h(grid.dimension());
    for (std::size_t j = 0; j < grid.dimension(); ++j) h[j] = grid.spacing(j);
    const double rho_cell = rho(group, h);
    double inscribed = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        inscribed = std::min(inscribed,
                             std::pow(0.5 * grid.length(j), 1.0 / group.exponent(j)));
    DyadicQuadrature q;
    q.k_min = static_cast<int>(std::ceil(std::log2(rho_cell)));
    q.k_max = static_cast<int>(std::floor(std::log2(0.5 * inscribed))) - 1;
    if (q.k_max < q.k_min) // coarse or strongly anisotropic box: use full shells
        q.k_max = static_cast<int>(std::floor(std::log2(inscribed))) - 1;
    if (q.k_max < q.k_min)
        throw InvalidGrid("default_quadrature: no dyadic shell fits the grid");
    return q;
}

SampledField riesz_potential(const SampledField& f, double alpha,
                             const DilationGroup& group) {
    if (!(alpha > 0.0 && alpha < group.gamma()))
        throw InvalidParameter("riesz_potential: alpha must lie in (0, gamma)");
    SpectralField F = forward_mean_free(f, "riesz_potential");
    return apply_rho_multiplier(
        std::move(F), group,
        [alpha](double r) { return std::pow(2.0 * std::numbers::pi * r, -alpha); }, 0.0);
}

SampledField poisson_semigroup(const SampledField& f, double t,
                               const DilationGroup& group) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidParameter("poisson_semigroup: t must be positive");
    return apply_rho_multiplier(
        forward_transform(f), group,
        [t](double r) { return std::exp(-2.0 * std::numbers::pi * t * r); }, 1.0);
}

SampledField q_semigroup(const SampledField& f, double t, const DilationGroup& group) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidParameter("q_semigroup: t must be positive");
    return apply_rho_multiplier(
        forward_transform(f), group,
        [t](double r) {
            const double u = 2.0 * std::numbers::pi * t * r;
            return -u * std::exp(-u);
        },
        0.0);
}

double w_alpha(double alpha, double t, double s) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("w_alpha: alpha must lie in (0,1)");
    if (t < 0.0 || s < 0.0)
        throw InvalidParameter("w_alpha: t and s must be nonnegative");
    const double cut = std::min(t, s);
    return (std::pow(t, alpha) - std::pow(t - cut, alpha)) / alpha;
}

SampledField subordination(const SampledField& f, double alpha, double t,
                           const DilationGroup& group) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("subordination: alpha must lie in (0,1)");
    if (!(t > 0.0))
        throw InvalidParameter("subordination: t must be positive");
    SpectralField F = forward_mean_free(f, "subordination");
    const double inv_gamma = 1.0 / std::tgamma(alpha);
    const double log_ratio = 0.25 * std::numbers::ln2; // geometric ratio 2^{1/4}
    return apply_rho_multiplier(
        std::move(F), group,
        [=](double r) {
            const double lam = 2.0 * std::numbers::pi * r;
            // head: int_0^{s_lo} s^{alpha-1} e^{-lam s} ds, two-term expansion
            const double s_lo = 1e-4 / lam;
            double acc = std::pow(s_lo, alpha) *
                         (1.0 / alpha - lam * s_lo / (alpha + 1.0));
            // geometric midpoint rule on [s_lo, s_hi] in v = ln s, plus the
            // Euler-Maclaurin boundary term at the truncated lower end
            const double s_hi = 40.0 / lam;
            const int nodes =
                static_cast<int>(std::ceil(std::log(s_hi / s_lo) / log_ratio));
            for (int i = 0; i < nodes; ++i) {
                const double s = s_lo * std::exp((i + 0.5) * log_ratio);
                acc += std::pow(s, alpha) * std::exp(-lam * s) * log_ratio;
            }
            acc -= (log_ratio * log_ratio / 24.0) * (alpha - lam * s_lo) *
                   std::pow(s_lo, alpha) * std::exp(-lam * s_lo);
            return inv_gamma * std::exp(-lam * t) * acc;
        },
        0.0);
}

// --- square function ------------------------------------------------------

DalphaWorkspace build_dalpha_workspace(const GridSpec& grid, const DilationGroup& group,
                                       const DyadicQuadrature& quad, double alpha,
                                       bool with_shells) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("build_dalpha_workspace: alpha must lie in (0,1)");
    if (quad.k_max < quad.k_min)
        throw InvalidParameter("build_dalpha_workspace: empty quadrature range");
    DalphaWorkspace ws{grid,
                       quad,
                       alpha,
                       std::vector<double>(grid.cell_count(), 0.0),
                       0.0,
                       {},
                       std::vector<int>(grid.cell_count(), INT_MIN),
                       {},
                       {}};
    const auto rho_y = rho_offset_table(grid, group);
    const double lo = quad.support_lo(), hi = quad.support_hi();
    const double expo = -group.gamma() - 2.0 * alpha;
    const double cellvol = grid.cell_volume();
    for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
        const double r = rho_y[flat];
        if (r < lo || r >= hi) continue;
        ws.weight[flat] = std::pow(r, expo) * cellvol;
        ws.weight_total += ws.weight[flat];
        ws.shell_of_offset[flat] =
            static_cast<int>(std::floor(std::log2(r))); // shell index k
    }
    std::vector<complex> w(grid.cell_count());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = {ws.weight[i], 0.0};
    detail::fourier_transform_nd(w, grid.sizes(), false);
    ws.weight_hat = std::move(w);
    if (with_shells) {
        const int nshell = quad.shell_count();
        ws.shell_hat.resize(nshell);
        ws.shell_total.assign(nshell, 0.0);
        for (int s = 0; s < nshell; ++s) {
            std::vector<complex> ws_k(grid.cell_count(), complex{0.0, 0.0});
            const int k = quad.k_min + s;
            for (std::size_t i = 0; i < grid.cell_count(); ++i)
                if (ws.shell_of_offset[i] == k) {
                    ws_k[i] = {ws.weight[i], 0.0};
                    ws.shell_total[s] += ws.weight[i];
                }
            detail::fourier_transform_nd(ws_k, grid.sizes(), false);
            ws.shell_hat[s] = std::move(ws_k);
        }
    }
    return ws;
}

namespace {

// Circular correlation corr_i = sum_o w_o h_{i+o} via the precomputed DFT of w.
std::vector<complex> correlate_with(const std::vector<complex>& h,
                                    const std::vector<complex>& w_hat,
                                    const std::vector<std::size_t>& sizes) {
    std::vector<complex> H = h;
    detail::fourier_transform_nd(H, sizes, false);
    for (std::size_t i = 0; i < H.size(); ++i) H[i] *= std::conj(w_hat[i]);
    detail::fourier_transform_nd(H, sizes, true);
    const double inv = 1.0 / static_cast<double>(H.size());
    for (complex& z : H) z *= inv;
    return H;
}

// sum_o w_o |g(i+o) - g(i)|^2 for one weight field, fft route.
std::vector<double> increment_energy_fft(const std::vector<complex>& g,
                                         const std::vector<complex>& w_hat,
                                         double w_total,
                                         const std::vector<std::size_t>& sizes) {
    std::vector<complex> gsq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) gsq[i] = {std::norm(g[i]), 0.0};
    const auto s1 = correlate_with(gsq, w_hat, sizes);
    const auto s2 = correlate_with(g, w_hat, sizes);
    std::vector<double> energy(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double e = s1[i].real() - 2.0 * (std::conj(g[i]) * s2[i]).real() +
                         w_total * std::norm(g[i]);
        energy[i] = std::max(e, 0.0);
    }
    return energy;
}

// Direct lattice sum of the same energy; bit-stable under lattice shifts of g.
std::vector<double> increment_energy_direct(const std::vector<complex>& g,
                                            const std::vector<double>& weight,
                                            const GridSpec& grid) {
    const auto& sizes = grid.sizes();
    const std::size_t n = sizes.size();
    std::vector<double> energy(g.size(), 0.0);
    std::vector<std::size_t> strides(n, 1);
    for (std::size_t j = n - 1; j-- > 0;) strides[j] = strides[j + 1] * sizes[j + 1];
    std::vector<std::size_t> o(n), idx(n);
    std::vector<std::vector<std::size_t>> shifted(n);
    for (std::size_t flat_o = 0; flat_o < weight.size(); ++flat_o) {
        const double w = weight[flat_o];
        if (w == 0.0) continue;
        grid.unravel(flat_o, o);
        for (std::size_t j = 0; j < n; ++j) {
            shifted[j].resize(sizes[j]);
            for (std::size_t i = 0; i < sizes[j]; ++i)
                shifted[j][i] = ((i + o[j]) % sizes[j]) * strides[j];
        }
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            std::size_t sh = 0;
            for (std::size_t j = 0; j < n; ++j) sh += shifted[j][idx[j]];
            energy[flat] += w * std::norm(g[sh] - g[flat]);
            for (std::size_t j = n; j-- > 0;) {
                if (++idx[j] < sizes[j]) break;
                idx[j] = 0;
            }
        }
    }
    return energy;
}

SampledField energy_to_field(std::vector<double> energy, const GridSpec& grid) {
    std::vector<complex> v(energy.size());
    for (std::size_t i = 0; i < energy.size(); ++i)
        v[i] = {std::sqrt(std::max(energy[i], 0.0)), 0.0};
    return SampledField(grid, std::move(v));
}

} // namespace

SampledField increment_square_function(const SampledField& g, const DalphaWorkspace& ws,
                                       DalphaMethod method) {
    if (!(g.grid() == ws.grid))
        throw InvalidInput("increment_square_function: grid mismatch");
    std::vector<double> energy =
        method == DalphaMethod::fft
            ? increment_energy_fft(g.values(), ws.weight_hat, ws.weight_total,
                                   ws.grid.sizes())
            : increment_energy_direct(g.values(), ws.weight, ws.grid);
    return energy_to_field(std::move(energy), ws.grid);
}

SampledField marcinkiewicz_d_alpha(const SampledField& f, double alpha,
                                   const DilationGroup& group,
                                   const DalphaWorkspace& ws, DalphaMethod method) {
    if (ws.alpha != alpha)
        throw InvalidParameter("marcinkiewicz_d_alpha: workspace built for another alpha");
    SampledField g = riesz_potential(f, alpha, group);
    return increment_square_function(g, ws, method);
}

SampledField marcinkiewicz_d_alpha(const SampledField& f, double alpha,
                                   const DilationGroup& group,
                                   const DyadicQuadrature& quad, DalphaMethod method) {
    const auto ws = build_dalpha_workspace(f.grid(), group, quad, alpha, false);
    return marcinkiewicz_d_alpha(f, alpha, group, ws, method);
}

SampledField g_q(const SampledField& f, const DyadicRange& t_range,
                 const DilationGroup& group) {
    if (t_range.hi < t_range.lo)
        throw InvalidParameter("g_q: empty t range");
    SpectralField F = forward_mean_free(f, "g_q");
    const GridSpec& grid = F.grid();
    const auto rho_xi = rho_dual_table(grid, group);
    const std::size_t zero = grid.zero_frequency_flat();
    std::vector<double> energy(grid.cell_count(), 0.0);
    for (int m = t_range.lo; m <= t_range.hi; ++m) {
        const double t = std::pow(2.0, m);
        SpectralField Qf(grid, F.coefficients());
        for (std::size_t i = 0; i < grid.cell_count(); ++i) {
            if (i == zero) {
                Qf.coefficients()[i] = 0.0;
                continue;
            }
            const double u = 2.0 * std::numbers::pi * t * rho_xi[i];
            Qf.coefficients()[i] *= -u * std::exp(-u);
        }
        SampledField qt = inverse_transform(Qf);
        for (std::size_t i = 0; i < grid.cell_count(); ++i)
            energy[i] += std::norm(qt[i]) * std::numbers::ln2;
    }
    return energy_to_field(std::move(energy), grid);
}

// --- maximal function -----------------------------------------------------

namespace {

// Windowed sum along one axis over [i-w, i+w] clipped to the box.
void axis_windowed_sum(std::vector<double>& data, const std::vector<std::size_t>& sizes,
                       std::size_t axis, std::size_t w) {
    if (w == 0) return;
    const std::size_t n = sizes[axis];
    std::size_t stride_after = 1;
    for (std::size_t j = axis + 1; j < sizes.size(); ++j) stride_after *= sizes[j];
    const std::size_t rows = data.size() / n;
    std::vector<double> line(n), out(n);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t inner = r % stride_after;
        const std::size_t outer = r / stride_after;
        const std::size_t base = outer * n * stride_after + inner;
        for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * stride_after];
        double acc = 0.0;
        const std::size_t w_eff = std::min(w, n - 1);
        for (std::size_t i = 0; i <= w_eff; ++i) acc += line[i];
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = acc;
            // advance window [i-w, i+w] -> [i+1-w, i+1+w]
            const std::size_t add = i + 1 + w;
            if (add < n) acc += line[add];
            if (i >= w) acc -= line[i - w];
        }
        for (std::size_t i = 0; i < n; ++i) data[base + i * stride_after] = out[i];
    }
}

// Sliding max along one axis over [i-w, i+w] clipped to the box.
void axis_sliding_max(std::vector<double>& data, const std::vector<std::size_t>& sizes,
                      std::size_t axis, std::size_t w) {
    if (w == 0) return;
    const std::size_t n = sizes[axis];
    std::size_t stride_after = 1;
    for (std::size_t j = axis + 1; j < sizes.size(); ++j) stride_after *= sizes[j];
    const std::size_t rows = data.size() / n;
    std::vector<double> line(n), out(n);
    std::deque<std::size_t> dq;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t inner = r % stride_after;
        const std::size_t outer = r / stride_after;
        const std::size_t base = outer * n * stride_after + inner;
        for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * stride_after];
        dq.clear();
        for (std::size_t i = 0; i < n + w; ++i) {
            if (i < n) {
                while (!dq.empty() && line[dq.back()] <= line[i]) dq.pop_back();
                dq.push_back(i);
            }
            if (i >= w) {
                const std::size_t center = i - w;
                while (dq.front() + w < center) dq.pop_front();
                out[center] = line[dq.front()];
            }
        }
        for (std::size_t i = 0; i < n; ++i) data[base + i * stride_after] = out[i];
    }
}

std::vector<std::size_t> window_widths(const GridSpec& grid, const DilationGroup& group,
                                       double r) {
    std::vector<std::size_t> w(grid.dimension());
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        const double reach = std::pow(r, group.exponent(j)) / grid.spacing(j);
        w[j] = static_cast<std::size_t>(std::max(0.0, std::floor(reach)));
        w[j] = std::min(w[j], grid.size(j) - 1);
    }
    return w;
}

} // namespace

SampledField hl_maximal(const SampledField& f, const DilationGroup& group) {
    const GridSpec& grid = f.grid();
    if (grid.dimension() != group.dimension())
        throw InvalidInput("hl_maximal: dimension mismatch");
    const std::size_t total = grid.cell_count();
    std::vector<double> absf(total);
    for (std::size_t i = 0; i < total; ++i) absf[i] = std::abs(f[i]);
    std::vector<double> best = absf; // radius -> cell limit: the value itself

    // dyadic radii from below one cell to full box coverage
    double h_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        h_min = std::min(h_min, std::pow(grid.spacing(j), 1.0 / group.exponent(j)));
    int k = static_cast<int>(std::floor(std::log2(h_min)));
    std::vector<std::size_t> prev;
    for (;; ++k) {
        const double r = std::pow(2.0, k);
        const auto w = window_widths(grid, group, r);
        if (w == prev) continue;
        bool any = false, all_full = true;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] > 0) any = true;
            if (w[j] < grid.size(j) - 1) all_full = false;
        }
        if (!any) {
            prev = w;
            continue;
        }
        // mean over the clipped window
        std::vector<double> sums = absf;
        for (std::size_t j = 0; j < grid.dimension(); ++j)
            axis_windowed_sum(sums, grid.sizes(), j, w[j]);
        std::vector<std::vector<double>> counts(grid.dimension());
        for (std::size_t j = 0; j < grid.dimension(); ++j) {
            counts[j].resize(grid.size(j));
            const double nj = static_cast<double>(grid.size(j));
            for (std::size_t i = 0; i < grid.size(j); ++i) {
                const double lo = std::max<double>(0.0, static_cast<double>(i) -
                                                            static_cast<double>(w[j]));
                const double hi =
                    std::min(nj - 1.0, static_cast<double>(i) + static_cast<double>(w[j]));
                counts[j][i] = hi - lo + 1.0;
            }
        }
        {
            std::vector<std::size_t> idx(grid.dimension(), 0);
            for (std::size_t flat = 0; flat < total; ++flat) {
                double cnt = 1.0;
                for (std::size_t j = 0; j < idx.size(); ++j) cnt *= counts[j][idx[j]];
                sums[flat] /= cnt;
                for (std::size_t j = idx.size(); j-- > 0;) {
                    if (++idx[j] < grid.size(j)) break;
                    idx[j] = 0;
                }
            }
        }
        // non-centered: max over windows containing x = sliding max of means
        for (std::size_t j = 0; j < grid.dimension(); ++j)
            axis_sliding_max(sums, grid.sizes(), j, w[j]);
        for (std::size_t i = 0; i < total; ++i) best[i] = std::max(best[i], sums[i]);
        prev = w;
        if (all_full) break;
    }
    std::vector<complex> out(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = {best[i], 0.0};
    return SampledField(grid, std::move(out));
}

SampledField m_s(const SampledField& f, double s, const DilationGroup& group) {
    if (!(s > 1.0))
        throw InvalidParameter("m_s: s must exceed 1");
    std::vector<complex> powed(f.grid().cell_count());
    for (std::size_t i = 0; i < powed.size(); ++i)
        powed[i] = {std::pow(std::abs(f[i]), s), 0.0};
    SampledField m = hl_maximal(SampledField(f.grid(), std::move(powed)), group);
    std::vector<complex> out(m.grid().cell_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {std::pow(m[i].real(), 1.0 / s), 0.0};
    return SampledField(f.grid(), std::move(out));
}

// --- Littlewood-Paley blocks ----------------------------------------------

namespace {

bool block_fits(const GridSpec& grid, const DilationGroup& group, int j) {
    const double top = std::pow(2.0, -j + 1);
    for (std::size_t ax = 0; ax < grid.dimension(); ++ax) {
        const double nyq =
            static_cast<double>(grid.size(ax)) / (2.0 * grid.length(ax));
        const double margin = 1.0 - 2.0 / static_cast<double>(grid.size(ax));
        if (std::pow(top, group.exponent(ax)) > nyq * margin) return false;
    }
    return true;
}

} // namespace

std::pair<int, int> resolved_block_range(const GridSpec& grid,
                                         const DilationGroup& group) {
    double rho_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.dimension(); ++j)
        rho_min = std::min(rho_min,
                           std::pow(1.0 / grid.length(j), 1.0 / group.exponent(j)));
    int j_lo = INT_MIN;
    for (int j = -60; j <= 60; ++j)
        if (block_fits(grid, group, j)) {
            j_lo = j;
            break;
        }
    if (j_lo == INT_MIN)
        throw InvalidGrid("resolved_block_range: no block fits the dual box");
    // highest j whose annulus still meets the dual lattice
    const int j_hi = static_cast<int>(std::floor(1.0 - std::log2(rho_min)));
    return {j_lo, j_hi};
}

SampledField lp_block(const SampledField& f, int j, const DilationGroup& group) {
    SpectralField F = forward_transform(f);
    if (!block_fits(f.grid(), group, j)) {
        // The full annulus leaves the dual box; still fine when the input
        // carries no spectrum where the block touches the boundary.
        const GridSpec& g = f.grid();
        const auto rho_xi = rho_dual_table(g, group);
        const double scale = std::pow(2.0, j);
        double boundary_mass = 0.0, total = 0.0;
        std::vector<std::size_t> idx(g.dimension());
        for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
            total += std::norm(F[flat]);
            if (LPPartition::phi(scale * rho_xi[flat]) == 0.0) continue;
            g.unravel(flat, idx);
            for (std::size_t ax = 0; ax < g.dimension(); ++ax)
                if (idx[ax] <= 1 || idx[ax] + 2 >= g.size(ax)) {
                    boundary_mass += std::norm(F[flat]);
                    break;
                }
        }
        if (boundary_mass > 1e-10 * total)
            throw InvalidParameter("lp_block: block " + std::to_string(j) +
                                   " is not resolved on the dual lattice");
    }
    return apply_rho_multiplier(
        std::move(F), group,
        [j](double r) { return LPPartition::phi(std::pow(2.0, j) * r); },
        LPPartition::phi(0.0));
}

SampledField t_j_square_function(const SampledField& f, int j, double alpha,
                                 const DilationGroup& group, const DalphaWorkspace& ws) {
    if (ws.shell_hat.empty())
        throw InvalidParameter("t_j_square_function: workspace lacks per-shell weights");
    if (!(f.grid() == ws.grid))
        throw InvalidInput("t_j_square_function: grid mismatch");
    SpectralField F = forward_mean_free(f, "t_j_square_function");
    const GridSpec& grid = ws.grid;
    const auto rho_xi = rho_dual_table(grid, group);
    const std::size_t zero = grid.zero_frequency_flat();
    std::vector<double> energy(grid.cell_count(), 0.0);
    for (int s = 0; s < ws.quad.shell_count(); ++s) {
        const int k = ws.quad.k_min + s;
        const double block_scale = std::pow(2.0, j + k);
        SpectralField U(grid);
        bool nonzero = false;
        for (std::size_t i = 0; i < grid.cell_count(); ++i) {
            if (i == zero) continue;
            const double phi = LPPartition::phi(block_scale * rho_xi[i]);
            if (phi == 0.0) continue;
            const complex c =
                F[i] * phi * std::pow(2.0 * std::numbers::pi * rho_xi[i], -alpha);
            if (c != complex{0.0, 0.0}) nonzero = true;
            U.coefficients()[i] = c;
        }
        if (!nonzero) continue;
        SampledField u = inverse_transform(U);
        const auto e = increment_energy_fft(u.values(), ws.shell_hat[s],
                                            ws.shell_total[s], grid.sizes());
        for (std::size_t i = 0; i < energy.size(); ++i) energy[i] += e[i];
    }
    return energy_to_field(std::move(energy), grid);
}

// --- L^2-bound oracle ------------------------------------------------------

namespace {

// Angular integral A(t) = int_{S^1} (2 - 2 cos(2 pi <A_t theta, v>)) mu dsigma
// by the periodic trapezoid rule; node count tracks the phase span.
double angular_increment_integral(const DilationGroup& group, double t,
                                  std::span<const double> v) {
    double span = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        span += std::pow(t, group.exponent(j)) * std::abs(v[j]);
    const std::size_t n =
        64 + 8 * static_cast<std::size_t>(std::min(span, 4.0e6));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) /
                           static_cast<double>(n);
        const double c = std::cos(phi), s = std::sin(phi);
        const double mu = group.exponent(0) * c * c + group.exponent(1) * s * s;
        const double phase = 2.0 * std::numbers::pi *
                             (std::pow(t, group.exponent(0)) * c * v[0] +
                              std::pow(t, group.exponent(1)) * s * v[1]);
        acc += (2.0 - 2.0 * std::cos(phase)) * mu;
    }
    return acc * 2.0 * std::numbers::pi / static_cast<double>(n);
}

double mu_total(const DilationGroup& group) {
    // int_{S^1} <P theta, theta> dsigma = pi (a_1 + a_2) = pi gamma for n = 2
    return std::numbers::pi * group.gamma();
}

} // namespace

double dalpha_increment_constant(const DilationGroup& group, double alpha,
                                 std::span<const double> xi0, double r_lo, double r_hi) {
    if (group.dimension() != 2)
        throw InvalidParameter("dalpha_increment_constant: implemented for n = 2");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("dalpha_increment_constant: alpha must lie in (0,1)");
    const double log_ratio = 0.125 * std::numbers::ln2; // radial ratio 2^{1/8}
    double acc = 0.0;

    double t_start = r_lo;
    if (r_lo <= 0.0) {
        // analytic head: A(t) ~ 4 pi^2 sum_j t^{2 a_j} v_j^2 I_j,
        // I_j = int theta_j^2 mu dsigma = pi (a_j + gamma) / 4 ... computed below
        t_start = 1e-4;
        // I_1 = int cos^2 (a1 cos^2 + a2 sin^2) = pi (3 a1 + a2)/4
        // I_2 = int sin^2 (...) = pi (a1 + 3 a2)/4
        const double a1 = group.exponent(0), a2 = group.exponent(1);
        const double i1 = std::numbers::pi * (3.0 * a1 + a2) / 4.0;
        const double i2 = std::numbers::pi * (a1 + 3.0 * a2) / 4.0;
        const double fourpi2 = 4.0 * std::numbers::pi * std::numbers::pi;
        acc += fourpi2 * (xi0[0] * xi0[0] * i1 *
                              std::pow(t_start, 2.0 * a1 - 2.0 * alpha) /
                              (2.0 * a1 - 2.0 * alpha) +
                          xi0[1] * xi0[1] * i2 *
                              std::pow(t_start, 2.0 * a2 - 2.0 * alpha) /
                              (2.0 * a2 - 2.0 * alpha));
    }

    const bool infinite = std::isinf(r_hi);
    const double t_osc = 128.0; // beyond this the oscillatory part is dropped
    const double t_stop = infinite ? t_osc : r_hi;
    if (t_stop > t_start) {
        const int nodes = static_cast<int>(
            std::ceil(std::log(t_stop / t_start) / log_ratio));
        for (int i = 0; i < nodes; ++i) {
            const double a = t_start * std::exp(i * log_ratio);
            const double b = std::min(t_start * std::exp((i + 1) * log_ratio), t_stop);
            const double t = std::sqrt(a * b);
            acc += angular_increment_integral(group, t, xi0) *
                   std::pow(t, -2.0 * alpha - 1.0) * (b - a);
        }
    }
    if (infinite) {
        // analytic tail with the oscillation replaced by its mean:
        // int_T^inf 2 mu_total t^{-2 alpha - 1} dt = mu_total T^{-2 alpha}/alpha
        acc += mu_total(group) * std::pow(t_osc, -2.0 * alpha) / alpha;
    }
    return acc;
}

std::vector<double> dalpha_direction_constants(const DilationGroup& group, double alpha,
                                               std::size_t n_dirs, double r_lo,
                                               double r_hi) {
    std::vector<double> out(n_dirs);
    for (std::size_t d = 0; d < n_dirs; ++d) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(d) /
                           static_cast<double>(n_dirs);
        const double v[2] = {std::cos(phi), std::sin(phi)};
        out[d] = dalpha_increment_constant(group, alpha, v, r_lo, r_hi);
    }
    return out;
}

} // namespace aniso
