#include "aniso/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aniso {

DilationGroup::DilationGroup(std::vector<double> exponents, double root_tolerance)
    : exponents_(std::move(exponents)), root_tolerance_(root_tolerance) {
    if (exponents_.empty())
        throw InvalidParameter("DilationGroup: empty exponent list");
    if (root_tolerance_ <= 0.0 || !std::isfinite(root_tolerance_))
        throw InvalidParameter("DilationGroup: root_tolerance must be positive");
    gamma_ = 0.0;
    max_exponent_ = 0.0;
    for (double a : exponents_) {
        if (!(a >= 1.0) || !std::isfinite(a))
            throw InvalidParameter("DilationGroup: every exponent must satisfy a_j >= 1");
        gamma_ += a;
        max_exponent_ = std::max(max_exponent_, a);
    }
}

std::vector<double> apply_dilation(const DilationGroup& group, double t,
                                   std::span<const double> x) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidParameter("apply_dilation: t must be positive");
    if (x.size() != group.dimension())
        throw InvalidInput("apply_dilation: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = std::pow(t, group.exponent(j)) * x[j];
    return out;
}

namespace {

// |A_{1/t} x|^2 = sum_j x_j^2 t^{-2 a_j}; strictly decreasing in t for x != 0.
double gauge_sq(const DilationGroup& group, std::span<const double> x, double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) continue;
        const double u = x[j] * std::pow(t, -group.exponent(j));
        s += u * u;
    }
    return s;
}

double gauge_sq_deriv(const DilationGroup& group, std::span<const double> x, double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) continue;
        const double a = group.exponent(j);
        const double u = x[j] * std::pow(t, -a);
        s += -2.0 * a * u * u / t;
    }
    return s;
}

} // namespace

double rho(const DilationGroup& group, std::span<const double> x) {
    if (x.size() != group.dimension())
        throw InvalidInput("rho: dimension mismatch");
    bool all_zero = true;
    for (double v : x) {
        if (!std::isfinite(v))
            throw InvalidInput("rho: non-finite coordinate");
        if (v != 0.0) all_zero = false;
    }
    if (all_zero) return 0.0;

    const double n = static_cast<double>(group.dimension());
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) continue;
        const double r = std::pow(std::abs(x[j]), 1.0 / group.exponent(j));
        lo = std::min(lo, r);
        hi += r;
    }
    lo /= std::sqrt(n);

    // Bisection down to a short bracket, then Newton from the left endpoint.
    // g is convex decreasing, so Newton from g > 1 converges monotonically.
    const double tol = group.root_tolerance();
    for (int it = 0; it < 64 && (hi - lo) > 0.25 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gauge_sq(group, x, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double t = lo;
    for (int it = 0; it < 200; ++it) {
        const double g = gauge_sq(group, x, t);
        const double dg = gauge_sq_deriv(group, x, t);
        const double step = (g - 1.0) / dg;
        double tn = t - step;
        if (!(tn > 0.0) || !std::isfinite(tn)) tn = 0.5 * (t + hi);
        if (std::abs(tn - t) <= tol * tn) {
            return tn;
        }
        t = tn;
    }
    return t;
}

int rho_compare(const DilationGroup& group, std::span<const double> x, double s) {
    if (!(s > 0.0))
        throw InvalidParameter("rho_compare: threshold must be positive");
    const double g = gauge_sq(group, x, s);
    if (g > 1.0) return 1;
    if (g < 1.0) return -1;
    return 0;
}

double polar_weight(const DilationGroup& group, std::span<const double> theta) {
    if (theta.size() != group.dimension())
        throw InvalidInput("polar_weight: dimension mismatch");
    double norm_sq = 0.0;
    for (double v : theta) norm_sq += v * v;
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-12)
        throw InvalidInput("polar_weight: theta must be a unit vector");
    double mu = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j)
        mu += group.exponent(j) * theta[j] * theta[j];
    return mu;
}

double euclidean_unit_ball_volume(std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::pow(std::numbers::pi, 0.5 * nd) / std::tgamma(0.5 * nd + 1.0);
}

double ball_volume(const DilationGroup& group, double r) {
    if (!(r > 0.0))
        throw InvalidParameter("ball_volume: radius must be positive");
    return std::pow(r, group.gamma()) * euclidean_unit_ball_volume(group.dimension());
}

std::size_t GridRegion::cell_count() const {
    std::size_t n = 1;
    for (std::size_t s : sizes) n *= s;
    return n;
}

std::vector<double> GridRegion::cell_center(std::size_t flat) const {
    std::vector<double> c(sizes.size());
    for (std::size_t j = sizes.size(); j-- > 0;) {
        const std::size_t i = flat % sizes[j];
        flat /= sizes[j];
        c[j] = origin[j] + static_cast<double>(i) * spacings[j];
    }
    return c;
}

double rho_distance_to_complement(const DilationGroup& group,
                                  std::span<const double> x,
                                  const GridRegion& region) {
    if (region.sizes.size() != group.dimension())
        throw InvalidInput("rho_distance_to_complement: dimension mismatch");
    const std::size_t total = region.cell_count();
    if (region.inside.size() != total)
        throw InvalidInput("rho_distance_to_complement: mask size mismatch");
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> diff(group.dimension());
    for (std::size_t flat = 0; flat < total; ++flat) {
        if (region.inside[flat]) continue;
        const std::vector<double> y = region.cell_center(flat);
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = x[j] - y[j];
        // Skip the root-find when this cell cannot beat the current best.
        if (std::isfinite(best) && best > 0.0 &&
            rho_compare(group, diff, best) >= 0)
            continue;
        best = rho(group, diff);
        if (best == 0.0) return 0.0;
    }
    if (!std::isfinite(best))
        throw InvalidInput("rho_distance_to_complement: complement is empty");
    return best;
}

} // namespace aniso
