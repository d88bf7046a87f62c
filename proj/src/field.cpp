#include "aniso/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

#include "aniso/fft.hpp"

namespace aniso {

GridSpec::GridSpec(std::vector<std::size_t> sizes, std::vector<double> lengths)
    : sizes_(std::move(sizes)), lengths_(std::move(lengths)) {
    if (sizes_.empty() || sizes_.size() != lengths_.size())
        throw InvalidParameter("GridSpec: sizes/lengths mismatch");
    total_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (!detail::is_power_of_two(sizes_[j]))
            throw InvalidParameter("GridSpec: sample count must be a power of two");
        if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j]))
            throw InvalidParameter("GridSpec: axis length must be positive");
        total_ *= sizes_[j];
        cell_volume_ *= lengths_[j] / static_cast<double>(sizes_[j]);
    }
}

double GridSpec::box_volume() const {
    double v = 1.0;
    for (double l : lengths_) v *= l;
    return v;
}

double GridSpec::min_length() const {
    return *std::min_element(lengths_.begin(), lengths_.end());
}

std::size_t GridSpec::zero_frequency_flat() const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < sizes_.size(); ++j)
        flat = flat * sizes_[j] + sizes_[j] / 2;
    return flat;
}

double GridSpec::offset_coordinate(std::size_t axis, std::size_t o) const {
    const std::size_t n = sizes_[axis];
    const double io = (o <= n / 2) ? static_cast<double>(o)
                                   : static_cast<double>(o) - static_cast<double>(n);
    return io * spacing(axis);
}

std::size_t GridSpec::ravel(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < sizes_.size(); ++j)
        flat = flat * sizes_[j] + idx[j];
    return flat;
}

void GridSpec::unravel(std::size_t flat, std::span<std::size_t> idx) const {
    for (std::size_t j = sizes_.size(); j-- > 0;) {
        idx[j] = flat % sizes_[j];
        flat /= sizes_[j];
    }
}

std::vector<double> GridSpec::cell_coordinates(std::size_t flat) const {
    std::vector<double> x(sizes_.size());
    for (std::size_t j = sizes_.size(); j-- > 0;) {
        x[j] = coordinate(j, flat % sizes_[j]);
        flat /= sizes_[j];
    }
    return x;
}

std::vector<double> GridSpec::dual_coordinates(std::size_t flat) const {
    std::vector<double> xi(sizes_.size());
    for (std::size_t j = sizes_.size(); j-- > 0;) {
        xi[j] = frequency(j, flat % sizes_[j]);
        flat /= sizes_[j];
    }
    return xi;
}

namespace {

void check_finite(const std::vector<complex>& v, const char* what) {
    for (const complex& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidInput(std::string(what) + ": non-finite entry");
}

// Parity (-1)^{i_1 + ... + i_n} of the multi-index of each element.
void apply_parity(std::vector<complex>& data, const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> idx(sizes.size(), 0);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        std::size_t s = 0;
        for (std::size_t v : idx) s += v;
        if (s & 1) data[flat] = -data[flat];
        for (std::size_t j = sizes.size(); j-- > 0;) {
            if (++idx[j] < sizes[j]) break;
            idx[j] = 0;
        }
    }
}

// e^{-i pi N/2} for the centered-transform constant; N is a power of two.
complex center_constant(std::size_t n) {
    switch (n % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

} // namespace

SampledField::SampledField(GridSpec grid, std::vector<complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.cell_count())
        throw InvalidInput("SampledField: value count does not match grid");
    check_finite(values_, "SampledField");
}

SampledField::SampledField(GridSpec grid)
    : grid_(std::move(grid)), values_(grid_.cell_count(), complex{0.0, 0.0}) {}

SampledField::SampledField(GridSpec grid,
                           const std::function<complex(std::span<const double>)>& sampler)
    : grid_(std::move(grid)), values_(grid_.cell_count()) {
    std::vector<double> x(grid_.dimension());
    std::vector<std::size_t> idx(grid_.dimension(), 0);
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = grid_.coordinate(j, idx[j]);
        values_[flat] = sampler(x);
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid_.size(j)) break;
            idx[j] = 0;
        }
    }
    check_finite(values_, "SampledField");
}

SpectralField::SpectralField(GridSpec grid, std::vector<complex> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != grid_.cell_count())
        throw InvalidInput("SpectralField: coefficient count does not match grid");
    check_finite(coefficients_, "SpectralField");
}

SpectralField::SpectralField(GridSpec grid)
    : grid_(std::move(grid)), coefficients_(grid_.cell_count(), complex{0.0, 0.0}) {}

SpectralField forward_transform(const SampledField& f) {
    const GridSpec& g = f.grid();
    std::vector<complex> data = f.values();
    apply_parity(data, g.sizes());
    detail::fourier_transform_nd(data, g.sizes(), /*inverse=*/false);
    complex factor = {g.cell_volume(), 0.0};
    for (std::size_t j = 0; j < g.dimension(); ++j) factor *= center_constant(g.size(j));
    for (complex& z : data) z *= factor;
    apply_parity(data, g.sizes());
    return SpectralField(g, std::move(data));
}

SampledField inverse_transform(const SpectralField& F) {
    const GridSpec& g = F.grid();
    std::vector<complex> data = F.coefficients();
    apply_parity(data, g.sizes());
    detail::fourier_transform_nd(data, g.sizes(), /*inverse=*/true);
    complex factor = {1.0 / g.box_volume(), 0.0};
    for (std::size_t j = 0; j < g.dimension(); ++j)
        factor *= std::conj(center_constant(g.size(j)));
    for (complex& z : data) z *= factor;
    apply_parity(data, g.sizes());
    return SampledField(g, std::move(data));
}

double lp_norm(const SampledField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const complex& z : f.values()) m = std::max(m, std::abs(z));
        return m;
    }
    if (!(p >= 1.0))
        throw InvalidParameter("lp_norm: p must satisfy p >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (const complex& z : f.values()) s += std::norm(z);
    } else if (p == 1.0) {
        for (const complex& z : f.values()) s += std::abs(z);
    } else {
        for (const complex& z : f.values()) s += std::pow(std::abs(z), p);
    }
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double l2_norm_spectral(const SpectralField& F) {
    double s = 0.0;
    for (const complex& z : F.coefficients()) s += std::norm(z);
    return std::sqrt(s / F.grid().box_volume());
}

double distribution_function(const SampledField& f, double beta) {
    if (!(beta > 0.0))
        throw InvalidParameter("distribution_function: beta must be positive");
    std::size_t count = 0;
    for (const complex& z : f.values())
        if (std::abs(z) > beta) ++count;
    return static_cast<double>(count) * f.grid().cell_volume();
}

std::vector<double> rho_offset_table(const GridSpec& grid, const DilationGroup& group) {
    std::vector<double> table(grid.cell_count());
    std::vector<double> y(grid.dimension());
    std::vector<std::size_t> idx(grid.dimension(), 0);
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] = grid.offset_coordinate(j, idx[j]);
        table[flat] = rho(group, y);
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid.size(j)) break;
            idx[j] = 0;
        }
    }
    return table;
}

std::vector<double> rho_cell_table(const GridSpec& grid, const DilationGroup& group) {
    std::vector<double> table(grid.cell_count());
    std::vector<double> x(grid.dimension());
    std::vector<std::size_t> idx(grid.dimension(), 0);
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] = grid.coordinate(j, idx[j]);
        table[flat] = rho(group, x);
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid.size(j)) break;
            idx[j] = 0;
        }
    }
    return table;
}

std::vector<double> rho_dual_table(const GridSpec& grid, const DilationGroup& group) {
    std::vector<double> table(grid.cell_count());
    std::vector<double> xi(grid.dimension());
    std::vector<std::size_t> idx(grid.dimension(), 0);
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
        for (std::size_t j = 0; j < xi.size(); ++j)
            xi[j] = grid.frequency(j, idx[j]);
        table[flat] = rho(group, xi);
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid.size(j)) break;
            idx[j] = 0;
        }
    }
    return table;
}

double smooth_cutoff(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double b1 = std::exp(-1.0 / (2.0 - r));
    const double b2 = std::exp(-1.0 / (r - 1.0));
    return b1 / (b1 + b2);
}

double annulus_bump(double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    return std::exp(-1.0 / ((r - 1.0) * (2.0 - r)));
}

namespace {

struct GaussianSource {
    std::mt19937_64 engine;
    bool have_spare = false;
    double spare = 0.0;

    explicit GaussianSource(std::uint64_t seed) : engine(seed) {}

    double uniform01() {
        // 53-bit mantissa draw in (0, 1); avoids distribution objects so the
        // stream is identical across standard library implementations.
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * std::numbers::pi * u2);
        have_spare = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }
};

} // namespace

BandLimitedSpectrum::BandLimitedSpectrum(const DilationGroup& group, std::uint64_t seed)
    : group_(&group) {
    constexpr std::size_t kTerms = 24;
    GaussianSource rng(seed);
    amplitudes_.resize(kTerms);
    nodes_.resize(kTerms);
    for (std::size_t k = 0; k < kTerms; ++k) {
        amplitudes_[k] = complex{rng.normal(), rng.normal()};
        nodes_[k].resize(group.dimension());
        for (std::size_t j = 0; j < group.dimension(); ++j)
            nodes_[k][j] = rng.uniform01() - 0.5;
    }
}

complex BandLimitedSpectrum::operator()(std::span<const double> xi) const {
    const double r = rho(*group_, xi);
    const double bump = annulus_bump(r);
    if (bump == 0.0) return {0.0, 0.0};
    complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
        double phase = 0.0;
        for (std::size_t j = 0; j < xi.size(); ++j) phase += nodes_[k][j] * xi[j];
        phase *= 2.0 * std::numbers::pi;
        acc += amplitudes_[k] * complex{std::cos(phase), std::sin(phase)};
    }
    return bump * acc;
}

SampledField make_band_limited(const GridSpec& grid, const DilationGroup& group,
                               std::uint64_t seed) {
    if (grid.dimension() != group.dimension())
        throw InvalidInput("make_band_limited: dimension mismatch");
    // The annulus rho(xi) <= 2 has bounding box |xi_j| <= 2^{a_j}; it must sit
    // inside the dual box and contain a reasonable number of lattice points.
    for (std::size_t j = 0; j < grid.dimension(); ++j) {
        const double nyquist = static_cast<double>(grid.size(j)) / (2.0 * grid.length(j));
        if (nyquist < std::pow(2.0, group.exponent(j)))
            throw InvalidGrid("make_band_limited: dual lattice does not cover the annulus");
    }
    BandLimitedSpectrum spectrum(group, seed);
    SpectralField F(grid);
    std::size_t support = 0;
    std::vector<double> xi(grid.dimension());
    std::vector<std::size_t> idx(grid.dimension(), 0);
    for (std::size_t flat = 0; flat < grid.cell_count(); ++flat) {
        for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = grid.frequency(j, idx[j]);
        const complex v = spectrum(xi);
        if (v != complex{0.0, 0.0}) ++support;
        F.coefficients()[flat] = v;
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < grid.size(j)) break;
            idx[j] = 0;
        }
    }
    if (support < 8)
        throw InvalidGrid("make_band_limited: annulus unresolved (too-coarse dual lattice)");
    SampledField eta = inverse_transform(F);
    const double norm = lp_norm(eta, 2.0);
    if (!(norm > 0.0))
        throw InvalidGrid("make_band_limited: degenerate spectrum");
    for (complex& z : eta.values()) z /= norm;
    return eta;
}

complex evaluate_spectral_at(const SpectralField& F, std::span<const double> x) {
    const GridSpec& g = F.grid();
    if (x.size() != g.dimension())
        throw InvalidInput("evaluate_spectral_at: dimension mismatch");
    complex acc{0.0, 0.0};
    std::vector<std::size_t> idx(g.dimension(), 0);
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        const complex c = F[flat];
        if (c != complex{0.0, 0.0}) {
            double phase = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                phase += x[j] * g.frequency(j, idx[j]);
            phase *= 2.0 * std::numbers::pi;
            acc += c * complex{std::cos(phase), std::sin(phase)};
        }
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < g.size(j)) break;
            idx[j] = 0;
        }
    }
    return acc / g.box_volume();
}

// --- serialization -------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'A', 'N', 'I', 'S', 'O', 'F', 'L', 'D'};

void write_binary_common(std::ofstream& out, const GridSpec& g, std::uint32_t domain,
                         const std::vector<complex>& data) {
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = 1;
    const std::uint32_t n = static_cast<std::uint32_t>(g.dimension());
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&domain), sizeof(domain));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (std::size_t j = 0; j < g.dimension(); ++j) {
        const std::uint64_t nj = g.size(j);
        const double lj = g.length(j);
        out.write(reinterpret_cast<const char*>(&nj), sizeof(nj));
        out.write(reinterpret_cast<const char*>(&lj), sizeof(lj));
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(sizeof(complex) * data.size()));
    if (!out) throw Error("field write failed");
}

} // namespace

void write_field_binary(const SampledField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_binary_common(out, f.grid(), 0, f.values());
}

void write_field_binary(const SpectralField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_binary_common(out, f.grid(), 1, f.coefficients());
}

SampledField read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw InvalidInput("read_field_binary: bad magic");
    std::uint32_t version = 0, domain = 0, n = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&domain), sizeof(domain));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || version != 1)
        throw InvalidInput("read_field_binary: unsupported version");
    if (domain != 0)
        throw InvalidInput("read_field_binary: file holds a spectral field");
    std::vector<std::size_t> sizes(n);
    std::vector<double> lengths(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        std::uint64_t nj = 0;
        double lj = 0.0;
        in.read(reinterpret_cast<char*>(&nj), sizeof(nj));
        in.read(reinterpret_cast<char*>(&lj), sizeof(lj));
        sizes[j] = static_cast<std::size_t>(nj);
        lengths[j] = lj;
    }
    GridSpec grid(std::move(sizes), std::move(lengths));
    std::vector<complex> data(grid.cell_count());
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(sizeof(complex) * data.size()));
    if (!in) throw InvalidInput("read_field_binary: truncated file");
    return SampledField(std::move(grid), std::move(data));
}

void write_field_csv(const SampledField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    const GridSpec& g = f.grid();
    out << "# aniso field v1\n";
    for (std::size_t j = 0; j < g.dimension(); ++j) out << (j ? "," : "# sizes=") << g.size(j);
    out << "\n";
    for (std::size_t j = 0; j < g.dimension(); ++j)
        out << (j ? "," : "# lengths=") << g.length(j);
    out << "\n";
    for (std::size_t j = 0; j < g.dimension(); ++j) out << "i" << j << ",";
    for (std::size_t j = 0; j < g.dimension(); ++j) out << "x" << j << ",";
    out << "re,im\n";
    char buf[64];
    std::vector<std::size_t> idx(g.dimension(), 0);
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        for (std::size_t j = 0; j < g.dimension(); ++j) out << idx[j] << ",";
        for (std::size_t j = 0; j < g.dimension(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,", g.coordinate(j, idx[j]));
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", f[flat].real(), f[flat].imag());
        out << buf;
        for (std::size_t j = idx.size(); j-- > 0;) {
            if (++idx[j] < g.size(j)) break;
            idx[j] = 0;
        }
    }
    if (!out) throw Error("field write failed");
}

} // namespace aniso
