#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aniso/errors.hpp"

namespace aniso {

/// Diagonal dilation group A_t = diag(t^{a_1}, ..., t^{a_n}) with all a_j >= 1.
/// gamma() is the homogeneous dimension (trace of the exponent matrix): the
/// measure of a rho-ball of radius r is r^gamma times the unit-ball volume.
class DilationGroup {
  public:
    explicit DilationGroup(std::vector<double> exponents,
                           double root_tolerance = 1e-12);

    std::size_t dimension() const { return exponents_.size(); }
    const std::vector<double>& exponents() const { return exponents_; }
    double exponent(std::size_t j) const { return exponents_[j]; }
    double gamma() const { return gamma_; }
    double root_tolerance() const { return root_tolerance_; }
    double max_exponent() const { return max_exponent_; }

  private:
    std::vector<double> exponents_;
    double gamma_;
    double root_tolerance_;
    double max_exponent_;
};

/// Anisotropic ball B(c, r) = { y : rho(c - y) <= r } (rasterized closed).
struct RhoBall {
    std::vector<double> center;
    double radius = 0.0; // > 0
};

/// A_t x = (t^{a_1} x_1, ..., t^{a_n} x_n); t > 0.
std::vector<double> apply_dilation(const DilationGroup& group, double t,
                                   std::span<const double> x);

/// The quasi-norm rho(x): unique t > 0 with |A_{1/t} x| = 1, rho(0) = 0.
/// Bracketed root-find (bisection plus Newton polish) on the strictly
/// monotone map t -> |A_{1/t} x|^2, to relative accuracy root_tolerance.
double rho(const DilationGroup& group, std::span<const double> x);

/// rho(x) compared against a threshold s without root-finding:
/// returns sign of rho(x) - s, using rho(x) <= s iff |A_{1/s} x| <= 1.
int rho_compare(const DilationGroup& group, std::span<const double> x, double s);

/// Density mu(theta) of the polar decomposition
///   dx = t^{gamma-1} mu(theta) dsigma(theta) dt  under (t, theta) -> A_t theta.
/// For diagonal groups mu(theta) = <P theta, theta>; the acceptance suite
/// validates this against the ball-volume oracle rather than assuming it.
double polar_weight(const DilationGroup& group, std::span<const double> theta);

/// |B(x, r)| = r^gamma * omega_n (omega_n = Euclidean unit-ball volume).
double ball_volume(const DilationGroup& group, double r);

/// Euclidean unit-ball volume in dimension n.
double euclidean_unit_ball_volume(std::size_t n);

/// Boolean region on a rectangular lattice. Cell with multi-index i has
/// center origin[j] + i[j] * spacing[j]; inside[] is row-major.
struct GridRegion {
    std::vector<std::size_t> sizes;
    std::vector<double> spacings;
    std::vector<double> origin;
    std::vector<std::uint8_t> inside;

    std::size_t cell_count() const;
    std::vector<double> cell_center(std::size_t flat) const;
};

/// min over complement cells y of rho(x - y); exact over the discrete grid.
/// Complement must be nonempty.
double rho_distance_to_complement(const DilationGroup& group,
                                  std::span<const double> x,
                                  const GridRegion& region);

} // namespace aniso
