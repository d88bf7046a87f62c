#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/errors.hpp"

namespace aniso {

using complex = std::complex<double>;

/// Periodic rectangular grid: axis j has N_j samples (power of two) over an
/// interval of length L_j, domain-centered (x_j in [-L_j/2, L_j/2)). The dual
/// lattice is xi = (k_1/L_1, ..., k_n/L_n), k_j in [-N_j/2, N_j/2).
class GridSpec {
  public:
    GridSpec(std::vector<std::size_t> sizes, std::vector<double> lengths);

    std::size_t dimension() const { return sizes_.size(); }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    const std::vector<double>& lengths() const { return lengths_; }
    std::size_t size(std::size_t axis) const { return sizes_[axis]; }
    double length(std::size_t axis) const { return lengths_[axis]; }
    double spacing(std::size_t axis) const {
        return lengths_[axis] / static_cast<double>(sizes_[axis]);
    }
    std::size_t cell_count() const { return total_; }
    double cell_volume() const { return cell_volume_; }
    double box_volume() const;
    double min_length() const;

    /// Center coordinate of cell index i along an axis: (i - N/2) * h.
    double coordinate(std::size_t axis, std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(sizes_[axis])) *
               spacing(axis);
    }
    /// Dual frequency of index k along an axis: (k - N/2) / L.
    double frequency(std::size_t axis, std::size_t k) const {
        return (static_cast<double>(k) - 0.5 * static_cast<double>(sizes_[axis])) /
               lengths_[axis];
    }
    /// Index of the zero frequency (k = N/2 on every axis).
    std::size_t zero_frequency_flat() const;

    /// Signed offset coordinate for a wrap-centered index o in [0, N):
    /// o <= N/2 maps to o*h, otherwise (o - N)*h.
    double offset_coordinate(std::size_t axis, std::size_t o) const;

    std::size_t ravel(std::span<const std::size_t> idx) const;
    void unravel(std::size_t flat, std::span<std::size_t> idx) const;

    std::vector<double> cell_coordinates(std::size_t flat) const;
    std::vector<double> dual_coordinates(std::size_t flat) const;

    bool operator==(const GridSpec& other) const = default;

  private:
    std::vector<std::size_t> sizes_;
    std::vector<double> lengths_;
    std::size_t total_;
    double cell_volume_;
};

/// Complex samples of a function on the grid lattice, row-major.
class SampledField {
  public:
    SampledField(GridSpec grid, std::vector<complex> values);
    explicit SampledField(GridSpec grid); // zero field
    SampledField(GridSpec grid,
                 const std::function<complex(std::span<const double>)>& sampler);

    const GridSpec& grid() const { return grid_; }
    const std::vector<complex>& values() const { return values_; }
    std::vector<complex>& values() { return values_; }
    complex operator[](std::size_t flat) const { return values_[flat]; }

  private:
    GridSpec grid_;
    std::vector<complex> values_;
};

/// Approximations of f_hat(xi) = int f e^{-2 pi i <x,xi>} dx on the dual
/// lattice (cell-volume-scaled DFT, frequencies centered).
class SpectralField {
  public:
    SpectralField(GridSpec grid, std::vector<complex> coefficients);
    explicit SpectralField(GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    const std::vector<complex>& coefficients() const { return coefficients_; }
    std::vector<complex>& coefficients() { return coefficients_; }
    complex operator[](std::size_t flat) const { return coefficients_[flat]; }

  private:
    GridSpec grid_;
    std::vector<complex> coefficients_;
};

SpectralField forward_transform(const SampledField& f);
SampledField inverse_transform(const SpectralField& F);

/// (sum |f|^p cellvol)^{1/p}; p = infinity returns the max modulus.
double lp_norm(const SampledField& f, double p);
double l2_norm_spectral(const SpectralField& F);

/// Measure of {|f| > beta}: cell volume times the count of exceeding cells.
double distribution_function(const SampledField& f, double beta);

/// rho(.) evaluated at every spatial cell (offset/wrap-centered coordinates).
std::vector<double> rho_offset_table(const GridSpec& grid, const DilationGroup& group);
/// rho(.) evaluated at every spatial cell (domain-centered coordinates).
std::vector<double> rho_cell_table(const GridSpec& grid, const DilationGroup& group);
/// rho(.) evaluated at every dual-lattice point.
std::vector<double> rho_dual_table(const GridSpec& grid, const DilationGroup& group);

/// C-infinity cutoff: 1 for r <= 1, 0 for r >= 2, strictly decreasing between.
double smooth_cutoff(double r);
/// Smooth bump supported in [1, 2] (exp(-1/((r-1)(2-r)))), not normalized.
double annulus_bump(double r);

/// Random unit-L2-norm field with smooth spectrum supported in the rho-annulus
/// [1, 2]; deterministic per seed. The spectrum is an analytic function of xi
/// (seeded trigonometric polynomial times a smooth radial bump), so the same
/// seed yields samples of one continuum function on any resolving grid.
SampledField make_band_limited(const GridSpec& grid, const DilationGroup& group,
                               std::uint64_t seed);

/// Spectrum evaluator behind make_band_limited; usable at dilated arguments.
class BandLimitedSpectrum {
  public:
    BandLimitedSpectrum(const DilationGroup& group, std::uint64_t seed);
    complex operator()(std::span<const double> xi) const;

  private:
    const DilationGroup* group_;
    std::vector<complex> amplitudes_;
    std::vector<std::vector<double>> nodes_;
};

/// Exact trigonometric evaluation of the band-limited interpolant at an
/// arbitrary point: (1/prod L_j) sum_k F_k e^{2 pi i <x, xi_k>}.
/// Iterates nonzero coefficients only; intended for sparse spectra.
complex evaluate_spectral_at(const SpectralField& F, std::span<const double> x);

// --- serialization -------------------------------------------------------

void write_field_binary(const SampledField& f, const std::string& path);
void write_field_binary(const SpectralField& f, const std::string& path);
SampledField read_field_binary(const std::string& path);
void write_field_csv(const SampledField& f, const std::string& path);

} // namespace aniso
