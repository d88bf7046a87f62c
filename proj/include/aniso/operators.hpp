#pragma once

#include <optional>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/field.hpp"

namespace aniso {

/// Dyadic shell range: shells rho in [2^k, 2^{k+1}) for k in [k_min, k_max].
/// For quadrature use, 2^{k_min} must be at least one grid cell diameter and
/// 2^{k_max+1} at most half the inscribed rho-radius of the box.
struct DyadicQuadrature {
    int k_min = 0;
    int k_max = -1;

    double support_lo() const { return std::pow(2.0, k_min); }
    double support_hi() const { return std::pow(2.0, k_max + 1); }
    int shell_count() const { return k_max - k_min + 1; }
};

/// Default quadrature for a grid: shells from the cell rho-diameter up to
/// half the inscribed radius (the increments integral runs to ~ L/4).
DyadicQuadrature default_quadrature(const GridSpec& grid, const DilationGroup& group);

/// Dyadic t-range {2^m : lo <= m <= hi} for semigroup-type quadratures.
struct DyadicRange {
    int lo = 0;
    int hi = -1;
};

/// Littlewood-Paley profile Phi(r) = theta(r) - theta(2r), a smooth bump
/// supported in [1/2, 2] with sum_j Phi(2^j r) = 1 (telescoping).
struct LPPartition {
    static double phi(double r) { return smooth_cutoff(r) - smooth_cutoff(2.0 * r); }
};

/// Fourier multiplier (2 pi rho(xi))^{-alpha} with the zero mode removed.
/// Requires |f_hat(0)| <= 1e-8 ||f||_2 (throws MeanNotRemoved otherwise).
SampledField riesz_potential(const SampledField& f, double alpha,
                             const DilationGroup& group);

/// K_t * f via the multiplier e^{-2 pi t rho(xi)}.
SampledField poisson_semigroup(const SampledField& f, double t,
                               const DilationGroup& group);

/// Q_t * f via the multiplier -2 pi t rho(xi) e^{-2 pi t rho(xi)};
/// satisfies t d/dt [K_t * f] = Q_t * f.
SampledField q_semigroup(const SampledField& f, double t, const DilationGroup& group);

/// W_alpha(t, s) = (t^alpha - (t - min(t,s))^alpha) / alpha, alpha in (0,1).
double w_alpha(double alpha, double t, double s);

/// V(.,t) = Gamma(alpha)^{-1} int_0^inf K_{t+s} * f s^{alpha-1} ds by
/// geometric quadrature (ratio 2^{1/4}) with an analytic head correction.
/// Agrees with poisson_semigroup(riesz_potential(f, alpha), t).
SampledField subordination(const SampledField& f, double alpha, double t,
                           const DilationGroup& group);

enum class DalphaMethod { direct, fft };

/// Precomputed quadrature weights w(y) = rho(y)^{-gamma-2 alpha} cellvol on
/// lattice offsets with rho(y) in the quadrature support, plus their DFTs.
struct DalphaWorkspace {
    GridSpec grid;
    DyadicQuadrature quad;
    double alpha = 0.0;
    std::vector<double> weight;              // per offset (wrap-centered), 0 outside
    double weight_total = 0.0;
    std::vector<complex> weight_hat;         // unnormalized DFT of weight
    std::vector<int> shell_of_offset;        // k index or INT_MIN
    std::vector<std::vector<complex>> shell_hat; // per-shell DFTs (optional)
    std::vector<double> shell_total;
};

DalphaWorkspace build_dalpha_workspace(const GridSpec& grid, const DilationGroup& group,
                                       const DyadicQuadrature& quad, double alpha,
                                       bool with_shells = false);

/// Marcinkiewicz-type square function
///   D_alpha f(x) = (sum_{y != 0} |I_alpha f(x+y) - I_alpha f(x)|^2 w(y))^{1/2}
/// over the quadrature's lattice offsets; shifts are periodic lattice
/// translations. Both methods evaluate the same sum; the fft route uses
/// circular correlations and matches the direct route to rounding.
SampledField marcinkiewicz_d_alpha(const SampledField& f, double alpha,
                                   const DilationGroup& group,
                                   const DyadicQuadrature& quad,
                                   DalphaMethod method = DalphaMethod::fft);
SampledField marcinkiewicz_d_alpha(const SampledField& f, double alpha,
                                   const DilationGroup& group,
                                   const DalphaWorkspace& ws,
                                   DalphaMethod method = DalphaMethod::fft);

/// Square function applied to a precomputed potential g = I_alpha f.
SampledField increment_square_function(const SampledField& g, const DalphaWorkspace& ws,
                                       DalphaMethod method = DalphaMethod::fft);

/// g_Q(f)(x) = (int_0^inf |Q_t * f(x)|^2 dt/t)^{1/2}, log-quadrature over
/// dyadic t = 2^m, m in t_range:  (sum_m |Q_{2^m} * f(x)|^2 ln 2)^{1/2}.
SampledField g_q(const SampledField& f, const DyadicRange& t_range,
                 const DilationGroup& group);

/// Hardy-Littlewood maximal function over anisotropic rectangles
/// prod_j [-r^{a_j}, r^{a_j}] at dyadic radii, non-centered (sup over windows
/// containing x), via summed-area passes and sliding-window maxima.
/// Averages near the box edge use the clipped window (box semantics).
SampledField hl_maximal(const SampledField& f, const DilationGroup& group);

/// M_s(f) = M(|f|^s)^{1/s}, s > 1.
SampledField m_s(const SampledField& f, double s, const DilationGroup& group);

/// Delta_j f via the multiplier Phi(2^j rho(xi)). The block's annulus
/// [2^{-j-1}, 2^{-j+1}] must not extend past the dual box.
SampledField lp_block(const SampledField& f, int j, const DilationGroup& group);

/// Resolved block indices for a grid: blocks whose annulus fits in the dual
/// box and meets the dual lattice.
std::pair<int, int> resolved_block_range(const GridSpec& grid, const DilationGroup& group);

/// T_j(f)(x)^2 = sum_k int_{shell k} |I_alpha(Delta_{j+k} f)(x+y)
///                - I_alpha(Delta_{j+k} f)(x)|^2 rho(y)^{-gamma-2alpha} dy,
/// shells k from the workspace quadrature (built with with_shells = true).
SampledField t_j_square_function(const SampledField& f, int j, double alpha,
                                 const DilationGroup& group, const DalphaWorkspace& ws);

/// Direction constants of the L^2 bound:
///   c(theta) = int_{r_lo <= rho(y) <= r_hi} |e^{2 pi i <y, theta>} - 1|^2
///              rho(y)^{-gamma-2 alpha} dy
/// by polar-coordinate quadrature (radial log grid, adaptive trapezoid in
/// angle). r_hi may be infinity (adds the analytic 2 * int(mu) tail).
/// theta ranges over n_dirs directions uniform on the unit circle (n = 2).
std::vector<double> dalpha_direction_constants(const DilationGroup& group, double alpha,
                                               std::size_t n_dirs, double r_lo,
                                               double r_hi);

/// c(xi0) for one (not necessarily unit) lattice frequency, same quadrature.
double dalpha_increment_constant(const DilationGroup& group, double alpha,
                                 std::span<const double> xi0, double r_lo, double r_hi);

/// Zero-frequency mass |f_hat(0)| of a field (the quantity the mean-free
/// preconditions test against 1e-8 ||f||_2).
double zero_mode_mass(const SampledField& f);

} // namespace aniso
