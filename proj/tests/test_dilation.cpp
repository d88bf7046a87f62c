#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aniso/dilation.hpp"

using namespace aniso;

namespace {

// Independent oracle: plain bisection on |A_{1/t}x| = 1 from a huge bracket,
// no Newton, no spec-derived bracket.
double rho_bisect_oracle(const DilationGroup& g, std::vector<double> x) {
    double norm = 0.0;
    for (double v : x) norm += v * v;
    if (norm == 0.0) return 0.0;
    double lo = 1e-30, hi = 1e30;
    for (int it = 0; it < 220; ++it) {
        const double mid = std::sqrt(lo * hi);
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            s += x[j] * x[j] * std::pow(mid, -2.0 * g.exponent(j));
        (s > 1.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) {
        const double mag = std::pow(10.0, -3.0 + 6.0 * ((rng() >> 11) * 0x1.0p-53));
        v = ((rng() & 1) ? mag : -mag);
    }
    return x;
}

double euclid(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("dilation group invariants") {
    CHECK_THROWS_AS(DilationGroup({0.5, 2.0}), InvalidParameter);
    CHECK_THROWS_AS(DilationGroup({}), InvalidParameter);
    DilationGroup g({1.0, 2.0});
    CHECK(g.gamma() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(g.dimension() == 2);
    CHECK(g.gamma() >= static_cast<double>(g.dimension()));
}

TEST_CASE("apply_dilation examples") {
    DilationGroup g12({1.0, 2.0});
    DilationGroup g11({1.0, 1.0});
    auto y = apply_dilation(g12, 1.0, std::vector<double>{3.0, 4.0});
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[1] == doctest::Approx(4.0));
    y = apply_dilation(g12, 2.0, std::vector<double>{1.0, 1.0});
    CHECK(y[0] == doctest::Approx(2.0));
    CHECK(y[1] == doctest::Approx(4.0));
    y = apply_dilation(g11, 3.0, std::vector<double>{1.0, 2.0});
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[1] == doctest::Approx(6.0));
    CHECK_THROWS_AS(apply_dilation(g12, 0.0, std::vector<double>{1.0, 1.0}),
                    InvalidParameter);
    CHECK_THROWS_AS(apply_dilation(g12, -1.0, std::vector<double>{1.0, 1.0}),
                    InvalidParameter);
}

TEST_CASE("rho closed-form examples") {
    DilationGroup g12({1.0, 2.0});
    CHECK(rho(g12, std::vector<double>{3.0, 0.0}) == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(rho(g12, std::vector<double>{0.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-11));
    // t^4 - t^2 - 1 = 0  =>  t = sqrt((1+sqrt(5))/2)
    const double golden = std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(rho(g12, std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(golden).epsilon(1e-11));
    CHECK(rho(g12, std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(rho_bisect_oracle(g12, {1.0, 1.0})).epsilon(1e-10));
    CHECK(rho(g12, std::vector<double>{0.0, 0.0}) == 0.0);

    const double nan = std::nan("");
    CHECK_THROWS_AS(rho(g12, std::vector<double>{nan, 0.0}), InvalidInput);
}

TEST_CASE("rho matches bisection oracle on random inputs") {
    DilationGroup g({1.0, 2.0});
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto x = random_point(rng, 2);
        const double r = rho(g, x);
        const double o = rho_bisect_oracle(g, x);
        CHECK(r == doctest::Approx(o).epsilon(1e-9));
    }
}

TEST_CASE("rho homogeneity and quasi-triangle properties") {
    for (auto exps : {std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}}) {
        DilationGroup g(exps);
        std::mt19937_64 rng(42);
        for (int i = 0; i < 10000; ++i) {
            auto x = random_point(rng, 2);
            auto y = random_point(rng, 2);
            const double t = std::pow(10.0, -2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53));
            const double rx = rho(g, x);
            const double rtx = rho(g, apply_dilation(g, t, x));
            CHECK(std::abs(rtx - t * rx) <= 1e-9 * t * rx);
            std::vector<double> s{x[0] + y[0], x[1] + y[1]};
            CHECK(rho(g, s) <= rx + rho(g, y) + 1e-9);
        }
    }
}

TEST_CASE("rho properties (C), (D), (E) and isotropic reduction") {
    DilationGroup g12({1.0, 2.0});
    DilationGroup g11({1.0, 1.0});
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        auto x = random_point(rng, 2);
        const double r = rho(g12, x);
        const double e = euclid(x);
        if (e <= 1.0) {
            CHECK(r <= 1.0 + 1e-9);
            CHECK(e <= r + 1e-9);
        } else {
            CHECK(r >= 1.0 - 1e-9);
            CHECK(e >= r - 1e-9);
        }
        CHECK(std::abs(rho(g11, x) - e) <= 1e-10 * (1.0 + e));
    }
}

TEST_CASE("polar weight examples and errors") {
    DilationGroup g12({1.0, 2.0});
    DilationGroup g11({1.0, 1.0});
    CHECK(polar_weight(g11, std::vector<double>{0.6, 0.8}) == doctest::Approx(1.0));
    CHECK(polar_weight(g12, std::vector<double>{0.0, 1.0}) == doctest::Approx(2.0));
    CHECK(polar_weight(g12, std::vector<double>{1.0, 0.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(polar_weight(g12, std::vector<double>{1.0, 1.0}), InvalidInput);
}

TEST_CASE("polar weight integrates to gamma times unit-ball volume") {
    // Volume oracle validating mu(theta) = <P theta, theta>: a fine grid count
    // of {rho <= 1} must match (1/gamma) * int_{S^1} mu dsigma.
    DilationGroup g({1.0, 2.0});
    const int n = 1500;
    const double h = 2.2 / n;
    std::size_t count = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<double> x{-1.1 + (i + 0.5) * h, -1.1 + (j + 0.5) * h};
            if (x[0] == 0.0 && x[1] == 0.0) {
                ++count;
                continue;
            }
            if (rho_compare(g, x, 1.0) <= 0) ++count;
        }
    }
    const double measured = count * h * h;

    const int m = 4096;
    double integral = 0.0;
    for (int i = 0; i < m; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / m;
        std::vector<double> theta{std::cos(phi), std::sin(phi)};
        integral += polar_weight(g, theta);
    }
    integral *= 2.0 * std::numbers::pi / m;

    CHECK(integral == doctest::Approx(g.gamma() * std::numbers::pi).epsilon(1e-9));
    CHECK(measured == doctest::Approx(integral / g.gamma()).epsilon(3e-3));
}

TEST_CASE("ball volume") {
    DilationGroup g12({1.0, 2.0});
    DilationGroup g11({1.0, 1.0});
    CHECK(ball_volume(g12, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(ball_volume(g11, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(ball_volume(g12, 2.0) == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(ball_volume(g11, 0.5) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(ball_volume(g12, 0.0), InvalidParameter);
}

namespace {

GridRegion disk_region(const DilationGroup& g, double radius, int n, double halfwidth) {
    GridRegion region;
    region.sizes = {static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    const double h = 2.0 * halfwidth / n;
    region.spacings = {h, h};
    region.origin = {-halfwidth + 0.5 * h, -halfwidth + 0.5 * h};
    region.inside.resize(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t flat = 0; flat < region.inside.size(); ++flat) {
        auto c = region.cell_center(flat);
        if ((c[0] == 0.0 && c[1] == 0.0) || rho_compare(g, c, radius) < 0)
            region.inside[flat] = 1;
    }
    return region;
}

} // namespace

TEST_CASE("rho distance to complement") {
    DilationGroup g11({1.0, 1.0});
    DilationGroup g12({1.0, 2.0});

    auto region = disk_region(g11, 1.0, 128, 2.0);
    const double celldiam = std::hypot(region.spacings[0], region.spacings[1]);

    // x at a complement cell center -> 0.
    std::size_t corner = 0; // cell (0,0) is far outside the unit disk
    REQUIRE(!region.inside[corner]);
    auto far = region.cell_center(corner);
    CHECK(rho_distance_to_complement(g11, far, region) == doctest::Approx(0.0));

    std::vector<double> origin{0.0, 0.0};
    CHECK(std::abs(rho_distance_to_complement(g11, origin, region) - 1.0) <= celldiam);

    auto region2 = disk_region(g12, 2.0, 128, 4.5);
    const double d2 = rho_distance_to_complement(g12, origin, region2);
    // one-cell slack measured in rho units (a_max = 2: sqrt of spacing scale)
    const double slack = std::sqrt(region2.spacings[0]) + region2.spacings[0];
    CHECK(std::abs(d2 - 2.0) <= slack);

    GridRegion all_inside = region;
    for (auto& v : all_inside.inside) v = 1;
    CHECK_THROWS_AS(rho_distance_to_complement(g11, origin, all_inside), InvalidInput);
}
