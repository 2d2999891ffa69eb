#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/spline.hpp"

using namespace ecpnn;

namespace {

SplineField field_of(double (*f)(double), const RadialGrid& grid) {
    std::vector<double> y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) y[i] = f(grid[i]);
    return SplineField(grid, y);
}

}  // namespace

TEST_CASE("splines reproduce linears with zero curvature") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 200);
    auto f = field_of(+[](double r) { return 3.0 * r - 1.0; }, grid);
    for (double r = 0.15; r < 10.0; r += 0.41) {
        CHECK(f.eval(r) == doctest::Approx(3.0 * r - 1.0).epsilon(1e-12));
        CHECK(f.derivative(r, 2) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("spline interpolates r^3 accurately in the interior") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 200);
    auto f = field_of(+[](double r) { return r * r * r; }, grid);
    for (double r = 0.5; r <= 9.5; r += 0.13) {
        CHECK(f.eval(r) == doctest::Approx(r * r * r).epsilon(1e-3));
    }
}

TEST_CASE("spline reproduces fitted values at the knots") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 300);
    auto f = field_of(+[](double r) { return std::exp(-r) * std::sin(r); }, grid);
    for (std::size_t i = 0; i < grid.size(); i += 17) {
        CHECK(f.eval(grid[i]) ==
              doctest::Approx(std::exp(-grid[i]) * std::sin(grid[i]))
                  .epsilon(1e-12));
    }
}

TEST_CASE("spline is C2 at interior knots") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 100);
    auto f = field_of(+[](double r) { return std::exp(-r); }, grid);
    for (std::size_t i = 1; i + 1 < grid.size(); i += 7) {
        const double r = grid[i];
        const double eps = 1e-10;
        CHECK(f.derivative(r - eps, 2) ==
              doctest::Approx(f.derivative(r + eps, 2)).epsilon(1e-6));
    }
}

TEST_CASE("spline construction rejects bad input") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 20);
    std::vector<double> y(19, 1.0);
    CHECK_THROWS_AS(SplineField(grid, y), ValidationError);  // length mismatch
    y.assign(20, 1.0);
    y[5] = std::nan("");
    CHECK_THROWS_AS(SplineField(grid, y), NumericError);
}

TEST_CASE("spline derivatives are exact for low-degree polynomials") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 400);
    auto f2 = field_of(+[](double r) { return r * r; }, grid);
    CHECK(f2.derivative(3.0, 1) == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(f2.derivative(4.7, 2) == doctest::Approx(2.0).epsilon(1e-6));

    auto fc = field_of(+[](double) { return 2.5; }, grid);
    CHECK(fc.derivative(1.0, 1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fc.derivative(1.0, 2) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(f2.derivative(3.0, 3), DomainError);
    CHECK_THROWS_AS(f2.eval(11.0), DomainError);
    CHECK_THROWS_AS(f2.derivative(0.05, 1), DomainError);
}

TEST_CASE("radial Laplacian closed forms") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 2000);
    auto f2 = field_of(+[](double r) { return r * r; }, grid);
    CHECK(radial_laplacian(f2, 2.0) == doctest::Approx(6.0).epsilon(1e-6));

    auto fe = field_of(+[](double r) { return std::exp(-r); }, grid);
    CHECK(radial_laplacian(fe, 2.0) == doctest::Approx(0.0).epsilon(1e-6));

    auto fc = field_of(+[](double) { return 1.0; }, grid);
    CHECK(radial_laplacian(fc, 5.0) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(radial_laplacian(f2, -1.0), DomainError);
}

TEST_CASE("radial Laplacian agrees with finite differences of the spline") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 2000);
    auto f = field_of(+[](double r) { return std::exp(-r * r / 8.0); }, grid);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.3, 9.7);
    const double h = 1e-4;
    for (int t = 0; t < 100; ++t) {
        const double r = dist(rng);
        const double d1 = (f.eval(r + h) - f.eval(r - h)) / (2.0 * h);
        const double d2 =
            (f.eval(r + h) - 2.0 * f.eval(r) + f.eval(r - h)) / (h * h);
        const double fd = d2 + 2.0 / r * d1;
        CHECK(radial_laplacian(f, r) ==
              doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("kinetic_ratio closed forms") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 2000);
    auto dens = make_hydrogenic(1.0, grid);
    auto q = kinetic_ratio(amplitude(dens, 1.0));
    // |phi| = e^{-r} -> q = -0.5 (1 - 2/r)
    CHECK(q.field.eval(1.0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(q.field.eval(2.0) == doctest::Approx(0.0).epsilon(1e-4));

    DensityProfile gauss{grid, {}, 1, 1.0, "harmonic", 100.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        gauss.rho.push_back(std::exp(-grid[i] * grid[i]));
    }
    auto qh = kinetic_ratio(amplitude(gauss, 1.0));
    // |phi| = e^{-r^2/2} -> q = 1.5 - r^2/2
    CHECK(qh.field.eval(0.5) == doctest::Approx(1.375).epsilon(1e-3));

    DensityProfile flat{grid, std::vector<double>(grid.size(), 0.04), 1, 1.0,
                        "flat", 1e9};
    auto qc = kinetic_ratio(amplitude(flat, 1.0));
    CHECK(qc.field.eval(5.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("kinetic_ratio matches the hydrogenic closed form on [0.5, 8]") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 2000);
    for (double z : {1.0, 2.0}) {
        auto q = kinetic_ratio(amplitude(make_hydrogenic(z, grid), 1.0));
        double worst = 0.0;
        for (double r = 0.5; r <= 8.0; r += 0.01) {
            worst = std::max(worst,
                             std::abs(q.field.eval(r) +
                                      0.5 * (z * z - 2.0 * z / r)));
        }
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("kinetic_ratio rejects non-positive amplitudes") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 100);
    AmplitudeProfile amp{grid, std::vector<double>(grid.size(), 1.0), 1.0, "x"};
    amp.phi[3] = 0.0;
    CHECK_THROWS_AS(kinetic_ratio(amp), NumericError);
}

TEST_CASE("integrate_radial closed forms") {
    // hydrogen norm with the 4 pi r^2 weight
    auto wide = RadialGrid::uniform(0.001, 30.0, 3000);
    std::vector<double> rho(wide.size());
    for (std::size_t i = 0; i < wide.size(); ++i) {
        rho[i] = hydrogenic_rho(1.0, wide[i]);
    }
    CHECK(integrate_radial(SplineField(wide, rho), RadialWeight::FourPiR2) ==
          doctest::Approx(1.0).epsilon(1e-4));

    // f = 1 on [0.0001, 1]
    auto unit = RadialGrid::uniform(1e-4, 1.0, 101);
    CHECK(integrate_radial(
              SplineField(unit, std::vector<double>(unit.size(), 1.0)),
              RadialWeight::None) == doctest::Approx(1.0 - 1e-4).epsilon(1e-12));

    // integral of 4 pi r^3 over [~0, 1] = pi
    std::vector<double> lin(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) lin[i] = unit[i];
    CHECK(integrate_radial(SplineField(unit, lin), RadialWeight::FourPiR2) ==
          doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("integrate_radial is linear") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 777);  // even count: 3/8 patch
    std::vector<double> fa(grid.size()), fb(grid.size()), combo(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fa[i] = std::exp(-grid[i]);
        fb[i] = std::sin(grid[i]);
        combo[i] = 2.0 * fa[i] - 3.0 * fb[i];
    }
    const double ia = integrate_radial(SplineField(grid, fa), RadialWeight::None);
    const double ib = integrate_radial(SplineField(grid, fb), RadialWeight::None);
    const double ic = integrate_radial(SplineField(grid, combo), RadialWeight::None);
    CHECK(ic == doctest::Approx(2.0 * ia - 3.0 * ib).epsilon(1e-12));
}

TEST_CASE("integrate_radial handles non-uniform grids") {
    std::vector<double> pts;
    for (int i = 0; i <= 400; ++i) pts.push_back(0.1 * std::pow(1.012, i));
    RadialGrid grid(pts);
    std::vector<double> y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) y[i] = std::exp(-grid[i]);
    const double exact = std::exp(-grid.r_min()) - std::exp(-grid.r_max());
    CHECK(integrate_radial(SplineField(grid, y), RadialWeight::None) ==
          doctest::Approx(exact).epsilon(1e-4));
}
