#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>

#include "aniso/field.hpp"

using namespace aniso;

namespace {

SampledField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<complex> v(g.cell_count());
    for (complex& z : v)
        z = complex{(rng() >> 11) * 0x1.0p-53 - 0.5, (rng() >> 11) * 0x1.0p-53 - 0.5};
    return SampledField(g, std::move(v));
}

} // namespace

TEST_CASE("grid spec basics") {
    GridSpec g({64, 32}, {8.0, 4.0});
    CHECK(g.cell_count() == 64 * 32);
    CHECK(g.cell_volume() == doctest::Approx(0.125 * 0.125));
    CHECK(g.coordinate(0, 32) == doctest::Approx(0.0));
    CHECK(g.frequency(1, 16) == doctest::Approx(0.0));
    CHECK(g.frequency(1, 0) == doctest::Approx(-4.0)); // Nyquist on negative side
    CHECK_THROWS_AS(GridSpec({48}, {1.0}), InvalidParameter);
    CHECK_THROWS_AS(GridSpec({64}, {-1.0}), InvalidParameter);
}

TEST_CASE("forward transform of zero and of a pure character") {
    GridSpec g({32, 32}, {4.0, 4.0});
    SampledField zero(g);
    auto Z = forward_transform(zero);
    for (auto& c : Z.coefficients()) CHECK(std::abs(c) == 0.0);

    // f(x) = e^{2 pi i <x, xi0>} with xi0 on the dual lattice: a single
    // coefficient of modulus L1*L2 at xi0.
    const double xi0[2] = {g.frequency(0, 20), g.frequency(1, 13)};
    SampledField f(g, [&](std::span<const double> x) {
        const double ph = 2.0 * std::numbers::pi * (x[0] * xi0[0] + x[1] * xi0[1]);
        return complex{std::cos(ph), std::sin(ph)};
    });
    auto F = forward_transform(f);
    const double box = 16.0;
    std::size_t idx[2] = {20, 13};
    const std::size_t flat = g.ravel(idx);
    CHECK(std::abs(F[flat]) == doctest::Approx(box).epsilon(1e-12));
    double off = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        if (i != flat) off = std::max(off, std::abs(F[i]));
    CHECK(off <= 1e-9 * box);
}

TEST_CASE("gaussian self-duality") {
    GridSpec g({256, 256}, {16.0, 16.0});
    SampledField f(g, [](std::span<const double> x) {
        return complex{std::exp(-std::numbers::pi * (x[0] * x[0] + x[1] * x[1])), 0.0};
    });
    auto F = forward_transform(f);
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        auto xi = g.dual_coordinates(flat);
        const double expect = std::exp(-std::numbers::pi * (xi[0] * xi[0] + xi[1] * xi[1]));
        worst = std::max(worst, std::abs(F[flat].real() - expect) + std::abs(F[flat].imag()));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("round trip and Parseval") {
    GridSpec g({64, 32}, {8.0, 5.0});
    auto f = random_field(g, 3);
    auto F = forward_transform(f);
    auto back = inverse_transform(F);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        err = std::max(err, std::abs(back[i] - f[i]));
        scale = std::max(scale, std::abs(f[i]));
    }
    CHECK(err <= 1e-12 * scale);

    const double space = lp_norm(f, 2.0);
    const double freq = l2_norm_spectral(F);
    CHECK(space == doctest::Approx(freq).epsilon(1e-10));
}

TEST_CASE("translation commutes with the transform via phases") {
    GridSpec g({32, 32}, {4.0, 4.0});
    auto f = random_field(g, 9);
    // shift by v = (5, 2) cells
    const std::size_t s0 = 5, s1 = 2;
    std::vector<complex> shifted(g.cell_count());
    for (std::size_t i0 = 0; i0 < 32; ++i0)
        for (std::size_t i1 = 0; i1 < 32; ++i1) {
            std::size_t src[2] = {(i0 + 32 - s0) % 32, (i1 + 32 - s1) % 32};
            std::size_t dst[2] = {i0, i1};
            shifted[g.ravel(dst)] = f[g.ravel(src)];
        }
    auto F = forward_transform(f);
    auto G = forward_transform(SampledField(g, std::move(shifted)));
    const double v0 = s0 * g.spacing(0), v1 = s1 * g.spacing(1);
    double worst = 0.0;
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        auto xi = g.dual_coordinates(flat);
        const double ph = -2.0 * std::numbers::pi * (v0 * xi[0] + v1 * xi[1]);
        const complex expect = F[flat] * complex{std::cos(ph), std::sin(ph)};
        worst = std::max(worst, std::abs(G[flat] - expect));
    }
    CHECK(worst <= 1e-10 * lp_norm(inverse_transform(F), 2.0) * 16.0);
}

TEST_CASE("lp_norm examples") {
    GridSpec g({32, 32}, {4.0, 4.0});
    std::vector<complex> ones(g.cell_count(), complex{1.0, 0.0});
    SampledField f(g, std::move(ones));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(4.0)); // sqrt(16)
    auto cf = f;
    for (auto& z : cf.values()) z *= complex{-2.5, 0.0};
    CHECK(lp_norm(cf, 3.0) == doctest::Approx(2.5 * lp_norm(f, 3.0)).epsilon(1e-12));
    CHECK(lp_norm(cf, std::numeric_limits<double>::infinity()) == doctest::Approx(2.5));
    CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidParameter);
}

TEST_CASE("lp_norm of a rho-ball indicator approximates the ball volume") {
    DilationGroup grp({1.0, 2.0});
    GridSpec g({256, 256}, {8.0, 8.0});
    const double r = 1.3;
    std::size_t boundary = 0;
    std::vector<complex> v(g.cell_count(), complex{0.0, 0.0});
    std::vector<std::size_t> idx(2, 0);
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        auto x = g.cell_coordinates(flat);
        const bool zero = (x[0] == 0.0 && x[1] == 0.0);
        if (zero || rho_compare(grp, x, r) <= 0) {
            v[flat] = 1.0;
            // crude boundary-layer count: cell within one spacing of the sphere
            std::vector<double> xs{x[0] + g.spacing(0), x[1] + g.spacing(1)};
            if (!zero && rho_compare(grp, xs, r) > 0) ++boundary;
        }
        (void)idx;
    }
    SampledField f(g, std::move(v));
    const double volume = ball_volume(grp, r);
    const double slack = (boundary + 64) * g.cell_volume() * 8.0;
    CHECK(std::abs(lp_norm(f, 1.0) - volume) <= slack);
}

TEST_CASE("distribution function") {
    GridSpec g({16, 16}, {2.0, 2.0});
    auto f = random_field(g, 17);
    CHECK(distribution_function(f, 100.0) == 0.0);

    // indicator of a set of measure m
    std::vector<complex> v(g.cell_count(), complex{0.0, 0.0});
    for (std::size_t i = 0; i < 37; ++i) v[i] = 1.0;
    SampledField ind(g, std::move(v));
    CHECK(distribution_function(ind, 0.5) == doctest::Approx(37.0 * g.cell_volume()));

    // brute-force recount oracle on a random field
    const double beta = 0.25;
    std::size_t count = 0;
    for (const auto& z : f.values())
        if (std::abs(z) > beta) ++count;
    CHECK(distribution_function(f, beta) ==
          doctest::Approx(count * g.cell_volume()).epsilon(1e-15));
    CHECK_THROWS_AS(distribution_function(f, 0.0), InvalidParameter);
}

TEST_CASE("band-limited generator") {
    DilationGroup grp({1.0, 2.0});
    GridSpec g({64, 128}, {6.0, 6.0});
    auto eta = make_band_limited(g, grp, 12345);
    CHECK(lp_norm(eta, 2.0) == doctest::Approx(1.0).epsilon(1e-12));

    // spectrum vanishes outside 1 <= rho(xi) <= 2
    auto F = forward_transform(eta);
    auto rho_xi = rho_dual_table(g, grp);
    double outside = 0.0, inside = 0.0;
    for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        const double a = std::abs(F[flat]);
        if (rho_xi[flat] < 1.0 - 1e-9 || rho_xi[flat] > 2.0 + 1e-9)
            outside = std::max(outside, a);
        else
            inside = std::max(inside, a);
    }
    CHECK(inside > 0.0);
    CHECK(outside <= 1e-10 * inside);

    // determinism
    auto eta2 = make_band_limited(g, grp, 12345);
    double diff = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        diff = std::max(diff, std::abs(eta[i] - eta2[i]));
    CHECK(diff == 0.0);

    auto eta3 = make_band_limited(g, grp, 999);
    double diff3 = 0.0;
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        diff3 = std::max(diff3, std::abs(eta[i] - eta3[i]));
    CHECK(diff3 > 1e-6);

    // coarse dual lattice -> annulus unresolved
    CHECK_THROWS_AS(make_band_limited(GridSpec({8, 8}, {8.0, 8.0}), grp, 1), InvalidGrid);
}

TEST_CASE("binary and csv serialization round trip") {
    GridSpec g({16, 8}, {2.0, 1.0});
    auto f = random_field(g, 5);
    const auto dir = std::filesystem::temp_directory_path();
    const auto bin = (dir / "aniso_test_field.bin").string();
    const auto csv = (dir / "aniso_test_field.csv").string();
    write_field_binary(f, bin);
    auto back = read_field_binary(bin);
    REQUIRE(back.grid() == f.grid());
    for (std::size_t i = 0; i < g.cell_count(); ++i) CHECK(back[i] == f[i]);
    write_field_csv(f, csv);
    CHECK(std::filesystem::file_size(csv) > 0);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}
