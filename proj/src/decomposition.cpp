#include "aniso/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aniso/operators.hpp"

namespace aniso {

std::size_t GridMask::count() const {
    std::size_t c = 0;
    for (std::uint8_t v : inside) c += (v != 0);
    return c;
}

namespace {

struct Offset {
    double rho;
    long d0, d1;
};

// All lattice difference vectors sorted by rho; n = 2 layout.
std::vector<Offset> sorted_offsets(const GridSpec& grid, const DilationGroup& group) {
    const long n0 = static_cast<long>(grid.size(0));
    const long n1 = static_cast<long>(grid.size(1));
    std::vector<Offset> offsets;
    offsets.reserve(static_cast<std::size_t>((2 * n0 - 1) * (2 * n1 - 1)));
    std::vector<double> d(2);
    for (long d0 = -(n0 - 1); d0 <= n0 - 1; ++d0)
        for (long d1 = -(n1 - 1); d1 <= n1 - 1; ++d1) {
            d[0] = d0 * grid.spacing(0);
            d[1] = d1 * grid.spacing(1);
            offsets.push_back(Offset{rho(group, d), d0, d1});
        }
    std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
        if (a.rho != b.rho) return a.rho < b.rho;
        if (a.d0 != b.d0) return a.d0 < b.d0;
        return a.d1 < b.d1;
    });
    return offsets;
}

} // namespace

std::vector<double> mask_distance_to_complement(const GridMask& mask,
                                                const DilationGroup& group) {
    const GridSpec& grid = mask.grid;
    if (grid.dimension() != 2)
        throw InvalidInput("mask_distance_to_complement: implemented for n = 2");
    if (mask.inside.size() != grid.cell_count())
        throw InvalidInput("mask_distance_to_complement: mask size mismatch");
    const std::size_t total = grid.cell_count();
    const std::size_t n_inside = mask.count();
    if (n_inside == 0 || n_inside == total)
        throw InvalidInput("mask_distance_to_complement: mask or complement empty");

    const auto offsets = sorted_offsets(grid, group);
    const long n0 = static_cast<long>(grid.size(0));
    const long n1 = static_cast<long>(grid.size(1));
    std::vector<double> dist(total, 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        if (!mask.inside[flat]) continue;
        const long x0 = static_cast<long>(flat) / n1;
        const long x1 = static_cast<long>(flat) % n1;
        for (const Offset& o : offsets) {
            const long y0 = x0 + o.d0;
            const long y1 = x1 + o.d1;
            if (y0 < 0 || y0 >= n0 || y1 < 0 || y1 >= n1) continue;
            if (!mask.inside[static_cast<std::size_t>(y0 * n1 + y1)]) {
                dist[flat] = o.rho;
                break;
            }
        }
    }
    return dist;
}

GridMask rasterize_ball(const GridSpec& grid, const DilationGroup& group,
                        std::span<const double> center, double radius) {
    GridMask out{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
    const long n0 = static_cast<long>(grid.size(0));
    const long n1 = static_cast<long>(grid.size(1));
    // bounding box |y_j - c_j| <= r^{a_j}
    const double reach0 = std::pow(radius, group.exponent(0));
    const double reach1 = std::pow(radius, group.exponent(1));
    const double h0 = grid.spacing(0), h1 = grid.spacing(1);
    const double org0 = grid.coordinate(0, 0), org1 = grid.coordinate(1, 0);
    const long lo0 = std::max<long>(0, static_cast<long>(std::floor((center[0] - reach0 - org0) / h0)));
    const long hi0 = std::min<long>(n0 - 1, static_cast<long>(std::ceil((center[0] + reach0 - org0) / h0)));
    const long lo1 = std::max<long>(0, static_cast<long>(std::floor((center[1] - reach1 - org1) / h1)));
    const long hi1 = std::min<long>(n1 - 1, static_cast<long>(std::ceil((center[1] + reach1 - org1) / h1)));
    std::vector<double> d(2);
    for (long i0 = lo0; i0 <= hi0; ++i0)
        for (long i1 = lo1; i1 <= hi1; ++i1) {
            d[0] = org0 + i0 * h0 - center[0];
            d[1] = org1 + i1 * h1 - center[1];
            if ((d[0] == 0.0 && d[1] == 0.0) || rho_compare(group, d, radius) <= 0)
                out.inside[static_cast<std::size_t>(i0 * n1 + i1)] = 1;
        }
    return out;
}

GridMask cover_union(const GridSpec& grid, const DilationGroup& group,
                     const WhitneyCover& cover) {
    GridMask u{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
    for (const RhoBall& b : cover.balls) {
        GridMask m = rasterize_ball(grid, group, b.center, b.radius);
        for (std::size_t i = 0; i < u.inside.size(); ++i) u.inside[i] |= m.inside[i];
    }
    return u;
}

WhitneyCover whitney_cover(const GridMask& mask, const DilationGroup& group,
                           double dilate_factor) {
    if (!(dilate_factor >= 1.0))
        throw InvalidParameter("whitney_cover: dilate factor must be >= 1");
    const GridSpec& grid = mask.grid;
    const auto dist = mask_distance_to_complement(mask, group); // validates mask

    constexpr double kC1 = 2.0;
    const double denom = 10.0 * kC1 * dilate_factor;

    struct Candidate {
        double r;
        std::size_t flat;
    };
    std::vector<Candidate> cands;
    cands.reserve(mask.count());
    for (std::size_t flat = 0; flat < grid.cell_count(); ++flat)
        if (mask.inside[flat]) cands.push_back({dist[flat] / denom, flat});
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.r != b.r) return a.r > b.r;
        return a.flat < b.flat;
    });

    WhitneyCover cover;
    cover.dilate_factor = dilate_factor;
    cover.expansion_constant = kC1;
    std::vector<double> sel_r;
    std::vector<std::vector<double>> sel_c;
    std::vector<double> diff(2);
    for (const Candidate& cand : cands) {
        const auto c = grid.cell_coordinates(cand.flat);
        bool keep = true;
        for (std::size_t j = 0; j < sel_r.size(); ++j) {
            diff[0] = c[0] - sel_c[j][0];
            diff[1] = c[1] - sel_c[j][1];
            if (rho_compare(group, diff, 5.0 * (cand.r + sel_r[j])) <= 0) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        sel_r.push_back(cand.r);
        sel_c.push_back(c);
        cover.center_cells.push_back(cand.flat);
        cover.balls.push_back(RhoBall{c, 10.0 * cand.r});
    }

    // Conclusion (1): the rasterized union reproduces the mask exactly.
    GridMask u = cover_union(grid, group, cover);
    for (std::size_t i = 0; i < u.inside.size(); ++i)
        if ((u.inside[i] != 0) != (mask.inside[i] != 0))
            throw Error("whitney_cover: internal error, union differs from mask");

    // Conclusion (2): measured overlap of the N-dilates.
    std::vector<std::uint16_t> count(grid.cell_count(), 0);
    for (const RhoBall& b : cover.balls) {
        GridMask m = rasterize_ball(grid, group, b.center, dilate_factor * b.radius);
        for (std::size_t i = 0; i < count.size(); ++i)
            count[i] = static_cast<std::uint16_t>(count[i] + m.inside[i]);
    }
    cover.max_overlap = 0;
    for (std::uint16_t c : count)
        cover.max_overlap = std::max<std::size_t>(cover.max_overlap, c);
    return cover;
}

CZDecomposition cz_decompose(const SampledField& f, double beta, double p,
                             const DilationGroup& group, double dilate_factor) {
    if (!(beta > 0.0))
        throw InvalidParameter("cz_decompose: beta must be positive");
    if (!(p >= 1.0) || std::isinf(p))
        throw InvalidParameter("cz_decompose: p must lie in [1, infinity)");
    const GridSpec& grid = f.grid();

    std::vector<complex> powed(grid.cell_count());
    for (std::size_t i = 0; i < powed.size(); ++i)
        powed[i] = {std::pow(std::abs(f[i]), p), 0.0};
    SampledField mf = hl_maximal(SampledField(grid, std::move(powed)), group);

    const double level = std::pow(beta, p);
    GridMask omega{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
    std::size_t n_omega = 0;
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        if (mf[i].real() > level) {
            omega.inside[i] = 1;
            ++n_omega;
        }
    if (n_omega == grid.cell_count())
        throw BetaTooSmall("cz_decompose: the level set covers the whole grid");

    CZDecomposition dec{beta,         p, group, std::move(omega),
                        WhitneyCover{}, SampledField(grid), {}};
    if (n_omega == 0) { // trivial decomposition: g = f, no bad parts
        dec.good = f;
        return dec;
    }

    dec.cover = whitney_cover(dec.omega, group, dilate_factor);

    // ball cell lists and the overlap count sum_k chi_{B_k}
    std::vector<std::vector<std::size_t>> cells(dec.cover.balls.size());
    std::vector<std::uint32_t> count(grid.cell_count(), 0);
    for (std::size_t j = 0; j < dec.cover.balls.size(); ++j) {
        GridMask m = rasterize_ball(grid, group, dec.cover.balls[j].center,
                                    dec.cover.balls[j].radius);
        for (std::size_t i = 0; i < grid.cell_count(); ++i)
            if (m.inside[i]) {
                cells[j].push_back(i);
                ++count[i];
            }
    }

    // g = f off Omega; on Omega the sum of ball averages of f h_j
    std::vector<complex> good(grid.cell_count(), complex{0.0, 0.0});
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        if (!dec.omega.inside[i]) good[i] = f[i];

    dec.bad.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
        complex mean{0.0, 0.0};
        for (std::size_t i : cells[j]) mean += f[i] / static_cast<double>(count[i]);
        mean /= static_cast<double>(cells[j].size());
        CZBadPart part;
        part.ball_index = j;
        part.cells = cells[j];
        part.values.reserve(cells[j].size());
        for (std::size_t i : cells[j]) {
            part.values.push_back(f[i] / static_cast<double>(count[i]) - mean);
            good[i] += mean;
        }
        dec.bad.push_back(std::move(part));
    }
    dec.good = SampledField(grid, std::move(good));
    return dec;
}

ExperimentReport verify_cz(const CZDecomposition& dec, const SampledField& f) {
    const GridSpec& grid = f.grid();
    if (!(dec.good.grid() == grid))
        throw InvalidInput("verify_cz: decomposition does not match the field");
    ExperimentReport report("cz-verify");

    const double beta = dec.beta, p = dec.p;
    const double cellvol = grid.cell_volume();
    const double fp_norm = std::pow(lp_norm(f, p), p);

    // Lemma 2.3 (1): reconstruction
    std::vector<complex> recon = dec.good.values();
    for (const CZBadPart& part : dec.bad)
        for (std::size_t i = 0; i < part.cells.size(); ++i)
            recon[part.cells[i]] += part.values[i];
    double recon_err = 0.0;
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        recon_err = std::max(recon_err, std::abs(recon[i] - f[i]));
    report.add_metric("reconstruction_max_err", recon_err);
    report.add_verdict("lemma2.3(1) reconstruction", "reconstruction_max_err", 1e-10,
                       recon_err <= 1e-10);

    // Lemma 2.2 (1): finite overlap of the N-dilates (measured)
    report.add_metric("overlap_max", static_cast<double>(dec.cover.max_overlap));
    report.add_verdict("lemma2.2(1) finite overlap", "overlap_max", 0.0,
                       dec.bad.empty() || dec.cover.max_overlap > 0,
                       "measured bound, recorded");

    // Lemma 2.2 (2): |Omega| <= C beta^{-p} ||f||_p^p
    const double omega_measure = dec.omega.measure();
    const double c_weak =
        fp_norm > 0.0 ? omega_measure * std::pow(beta, p) / fp_norm : 0.0;
    report.add_metric("omega_measure", omega_measure);
    report.add_metric("c_weak_omega", c_weak);
    report.add_verdict("lemma2.2(2) level-set measure", "c_weak_omega", 0.0,
                       std::isfinite(c_weak), "measured constant");

    // Lemma 2.2 (3): |f| <= C beta off Omega
    double off_max = 0.0;
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        if (!dec.omega.inside[i]) off_max = std::max(off_max, std::abs(f[i]));
    report.add_metric("c_off_omega", off_max / beta);
    report.add_verdict("lemma2.2(3) bound off Omega", "c_off_omega", 1.0 + 1e-12,
                       off_max <= beta * (1.0 + 1e-12),
                       "|f|^p <= M(|f|^p) cellwise gives C = 1");

    // Lemma 2.2 (4): ball averages of |f|^p
    double c_avg = 0.0;
    for (const CZBadPart& part : dec.bad) {
        double acc = 0.0;
        for (std::size_t i : part.cells) acc += std::pow(std::abs(f[i]), p);
        acc /= static_cast<double>(part.cells.size());
        c_avg = std::max(c_avg, acc / std::pow(beta, p));
    }
    report.add_metric("c_ball_avg", c_avg);
    report.add_verdict("lemma2.2(4) ball averages", "c_ball_avg", 0.0,
                       std::isfinite(c_avg), "measured constant");

    // Lemma 2.3 (2): |g| <= C beta
    double g_max = 0.0;
    for (const auto& z : dec.good.values()) g_max = std::max(g_max, std::abs(z));
    report.add_metric("c_good_bound", g_max / beta);
    report.add_verdict("lemma2.3(2) good part bounded", "c_good_bound", 0.0,
                       std::isfinite(g_max / beta), "measured constant");

    // Lemma 2.3 (3): ||g||_p <= C ||f||_p
    const double c_gnorm =
        fp_norm > 0.0 ? lp_norm(dec.good, p) / std::pow(fp_norm, 1.0 / p) : 0.0;
    report.add_metric("c_good_norm", c_gnorm);
    report.add_verdict("lemma2.3(3) good part norm", "c_good_norm", 0.0,
                       std::isfinite(c_gnorm), "measured constant");

    // Lemma 2.3 (4): each bad part lives exactly on its rasterized ball
    bool supports_ok = true;
    for (const CZBadPart& part : dec.bad) {
        GridMask m = rasterize_ball(grid, dec.group,
                                    dec.cover.balls[part.ball_index].center,
                                    dec.cover.balls[part.ball_index].radius);
        std::size_t hits = 0;
        for (std::size_t i : part.cells)
            if (m.inside[i]) ++hits;
        if (hits != part.cells.size() || hits != m.count()) supports_ok = false;
    }
    report.add_metric("ball_count", static_cast<double>(dec.bad.size()));
    report.add_verdict("lemma2.3(4) supports", "ball_count", 0.0, supports_ok,
                       "bad parts live exactly on their ball cells");

    // Lemma 2.1 (1): the cover union reproduces Omega exactly
    bool union_ok = true;
    if (!dec.bad.empty()) {
        GridMask u = cover_union(grid, dec.group, dec.cover);
        for (std::size_t i = 0; i < grid.cell_count(); ++i)
            if ((u.inside[i] != 0) != (dec.omega.inside[i] != 0)) union_ok = false;
    }
    report.add_metric("union_equals_omega", union_ok ? 1.0 : 0.0);
    report.add_verdict("lemma2.1(1) union covers Omega", "union_equals_omega", 0.0,
                       union_ok);

    // Lemma 2.1 (3): every C1 N R_j dilate meets the complement
    bool touch_ok = true;
    for (const RhoBall& b : dec.cover.balls) {
        GridMask m = rasterize_ball(
            grid, dec.group, b.center,
            dec.cover.expansion_constant * dec.cover.dilate_factor * b.radius *
                (1.0 + 1e-12));
        bool touches = false;
        for (std::size_t i = 0; i < grid.cell_count(); ++i)
            if (m.inside[i] && !dec.omega.inside[i]) {
                touches = true;
                break;
            }
        if (!touches) touch_ok = false;
    }
    report.add_metric("dilates_touch_complement", touch_ok ? 1.0 : 0.0);
    report.add_verdict("lemma2.1(3) dilates reach the complement",
                       "dilates_touch_complement", 0.0, touch_ok);

    // Lemma 2.3 (5): mean zero
    double mean_rel = 0.0;
    for (const CZBadPart& part : dec.bad) {
        complex mass{0.0, 0.0};
        double l1 = 0.0;
        for (const complex& v : part.values) {
            mass += v;
            l1 += std::abs(v);
        }
        mass *= cellvol;
        l1 *= cellvol;
        mean_rel = std::max(mean_rel, std::abs(mass) / (l1 + 1.0));
    }
    report.add_metric("mean_zero_max_rel", mean_rel);
    report.add_verdict("lemma2.3(5) mean zero", "mean_zero_max_rel", 1e-10,
                       mean_rel <= 1e-10);

    // Lemma 2.3 (6): ||b_j||_p^p <= C beta^p |B_j|
    double c_bad = 0.0;
    for (const CZBadPart& part : dec.bad) {
        double acc = 0.0;
        for (const complex& v : part.values) acc += std::pow(std::abs(v), p);
        acc *= cellvol;
        const double ball_measure =
            static_cast<double>(part.cells.size()) * cellvol;
        c_bad = std::max(c_bad, acc / (std::pow(beta, p) * ball_measure));
    }
    report.add_metric("c_bad_norm", c_bad);
    report.add_verdict("lemma2.3(6) bad part norms", "c_bad_norm", 0.0,
                       std::isfinite(c_bad), "measured constant");

    // Lemma 2.3 (7): sum |B_j| <= C beta^{-p} ||f||_p^p
    double ball_sum = 0.0;
    for (const CZBadPart& part : dec.bad)
        ball_sum += static_cast<double>(part.cells.size()) * cellvol;
    const double c_sum =
        fp_norm > 0.0 ? ball_sum * std::pow(beta, p) / fp_norm : 0.0;
    report.add_metric("c_ball_sum", c_sum);
    report.add_verdict("lemma2.3(7) ball measure sum", "c_ball_sum", 0.0,
                       std::isfinite(c_sum), "measured constant");

    return report;
}

} // namespace aniso
