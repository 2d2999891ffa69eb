#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/numerov.hpp"

using namespace ecpnn;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = "/tmp/ecpnn_test_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("RadialGrid rejects bad inputs") {
    CHECK_THROWS_AS(RadialGrid(std::vector<double>{1.0, 2.0, 3.0}),
                    ValidationError);  // too short
    std::vector<double> pts(20);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = 0.1 * (i + 1);
    CHECK_NOTHROW(RadialGrid{pts});
    pts[5] = pts[4];  // not strictly increasing
    CHECK_THROWS_AS(RadialGrid{pts}, ValidationError);
    pts[5] = 0.55;
    pts[0] = 0.0;  // r must be positive
    CHECK_THROWS_AS(RadialGrid{pts}, ValidationError);
}

TEST_CASE("RadialGrid uniform detection") {
    auto g = RadialGrid::uniform(0.1, 10.0, 100);
    CHECK(g.is_uniform());
    CHECK(g.size() == 100);
    CHECK(g.r_min() == doctest::Approx(0.1));
    CHECK(g.r_max() == doctest::Approx(10.0));

    std::vector<double> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(0.1 * std::pow(1.1, i));
    CHECK_FALSE(RadialGrid(pts).is_uniform());
}

TEST_CASE("hydrogenic density closed forms") {
    CHECK(hydrogenic_rho(1.0, 0.0) == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(hydrogenic_rho(2.0, 1.0) ==
          doctest::Approx(8.0 / std::numbers::pi * std::exp(-4.0)));

    auto wide = RadialGrid::uniform(0.001, 30.0, 3000);
    auto dens = make_hydrogenic(1.0, wide);
    CHECK(normalization(dens) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(make_hydrogenic(0.0, wide), DomainError);
}

TEST_CASE("make_hydrogenic is strictly decreasing") {
    auto dens = make_hydrogenic(1.5, RadialGrid::uniform(0.1, 10.0, 500));
    for (std::size_t i = 0; i + 1 < dens.rho.size(); ++i) {
        CHECK(dens.rho[i] > dens.rho[i + 1]);
    }
}

TEST_CASE("validate enforces the density invariants") {
    auto dens = make_hydrogenic(1.0, RadialGrid::uniform(0.1, 10.0, 500));
    CHECK_NOTHROW(validate(dens));

    auto bad = dens;
    bad.rho[3] = -0.1;
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = dens;
    bad.n_electrons = 2;  // normalization is ~1, not 2
    CHECK_THROWS_AS(validate(bad), ValidationError);

    bad = dens;
    bad.nuclear_charge = -1.0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("make_sto_density: normalized 1s orbital equals the hydrogenic form") {
    // chi = 2 e^{-r} is the normalized 1s radial orbital; occupation 1
    // must reproduce rho = (1/pi) e^{-2r}.
    NaturalOrbitalSet set;
    set.orbitals.push_back({{{2.0, 1, 1.0}}, 1.0, 1.0});
    auto grid = RadialGrid::uniform(0.1, 10.0, 500);
    auto dens = make_sto_density(set, grid, 1.0);
    CHECK(dens.n_electrons == 1);
    for (std::size_t i = 0; i < grid.size(); i += 37) {
        CHECK(dens.rho[i] == doctest::Approx(hydrogenic_rho(1.0, grid[i])));
    }
    CHECK(normalization(dens) == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("make_sto_density occupancy sum and empty set") {
    // normalized 1s (a=4) and 2s-like (b=1) radial orbitals, two
    // electrons each
    const double a = 4.0, b = 1.0;
    NaturalOrbitalSet set;
    set.orbitals.push_back({{{2.0 * std::pow(a, 1.5), 1, a}}, 2.0, 1.0});
    set.orbitals.push_back(
        {{{std::pow(2.0 * b, 2.5) / std::sqrt(24.0), 2, b}}, 2.0, 1.0});
    auto dens =
        make_sto_density(set, RadialGrid::uniform(0.05, 15.0, 800), 4.0);
    CHECK(dens.n_electrons == 4);
    CHECK(normalization(dens) == doctest::Approx(4.0).epsilon(0.02));

    NaturalOrbitalSet empty;
    CHECK_THROWS_AS(
        make_sto_density(empty, RadialGrid::uniform(0.1, 10.0, 500), 1.0),
        ValidationError);
}

TEST_CASE("sto_orbital_value evaluates the STO expansion") {
    NaturalOrbital orb{{{2.0, 1, 1.0}, {0.5, 2, 2.0}}, 1.0, 1.0};
    const double r = 1.3;
    CHECK(sto_orbital_value(orb, r) ==
          doctest::Approx(2.0 * std::exp(-r) + 0.5 * r * std::exp(-2.0 * r)));
}

TEST_CASE("cusp_exponent recovers Z from pure exponentials") {
    auto grid = RadialGrid::uniform(0.05, 10.0, 2000);
    // cusp fit on ln rho recovers the decay rate exactly for a pure
    // exponential, independent of the prefactor
    for (double z : {1.0, 2.0}) {
        DensityProfile dens{grid, {}, 1, z, "exp", 100.0};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            dens.rho.push_back((z == 1.0 ? 1.0 : 8.0 / std::numbers::pi) *
                               std::exp(-2.0 * z * grid[i]));
        }
        CHECK(cusp_exponent(dens) == doctest::Approx(z).epsilon(1e-12));
    }
}

TEST_CASE("cusp_exponent on a Numerov helium-like density") {
    auto sol = numerov_ground_state(ReferencePotential::coulomb(2.0),
                                    RadialGrid::uniform(1e-4, 40.0, 6000));
    auto dens = density_from_solution(sol, 1, 2.0);
    CHECK(cusp_exponent(dens) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("cusp_exponent preconditions") {
    auto dens = make_hydrogenic(1.0, RadialGrid::uniform(0.25, 30.0, 500));
    CHECK_THROWS_AS(cusp_exponent(dens), DomainError);  // r_min > 0.2

    auto ok = make_hydrogenic(1.0, RadialGrid::uniform(0.1, 10.0, 500));
    ok.rho[2] = 0.0;  // ln rho undefined in the fit window
    CHECK_THROWS_AS(cusp_exponent(ok), NumericError);
}

TEST_CASE("amplitude square-root, divisor, and floor") {
    auto grid = RadialGrid::uniform(0.1, 10.0, 500);
    auto dens = make_hydrogenic(1.0, grid);
    auto amp = amplitude(dens, 1.0);
    // |phi|(r) = e^{-r}/sqrt(pi) at the grid point nearest r=1
    std::size_t i1 = 0;
    while (grid[i1] < 1.0) ++i1;
    CHECK(amp.phi[i1] ==
          doctest::Approx(std::exp(-grid[i1]) / std::sqrt(std::numbers::pi)));

    // rho = 2 e^{-2r}, c = 2 -> |phi| = e^{-r}
    DensityProfile two{grid, {}, 1, 1.0, "two", 100.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        two.rho.push_back(2.0 * std::exp(-2.0 * grid[i]));
    }
    auto amp2 = amplitude(two, 2.0);
    for (std::size_t i = 0; i < grid.size(); i += 53) {
        CHECK(amp2.phi[i] == doctest::Approx(std::exp(-grid[i])));
    }

    two.rho[7] = 0.0;
    auto floored = amplitude(two, 2.0);
    CHECK(floored.phi[7] == AmplitudeProfile::kPhiFloor);

    CHECK_THROWS_AS(amplitude(two, 0.0), DomainError);
}

TEST_CASE("amplitude round-trips positive densities") {
    auto dens = make_hydrogenic(1.0, RadialGrid::uniform(0.1, 10.0, 500));
    const double c = 1.7;
    auto amp = amplitude(dens, c);
    for (std::size_t i = 0; i < dens.rho.size(); ++i) {
        CHECK(amp.phi[i] * amp.phi[i] * c ==
              doctest::Approx(dens.rho[i]).epsilon(1e-14));
    }
}

TEST_CASE("density CSV round trip") {
    auto dens = make_hydrogenic(1.0, RadialGrid::uniform(0.1, 10.0, 64));
    const std::string path = "/tmp/ecpnn_test_roundtrip.csv";
    save_density_csv(dens, path);
    auto back = load_density_csv(path);
    CHECK(back.n_electrons == dens.n_electrons);
    CHECK(back.nuclear_charge == dens.nuclear_charge);
    REQUIRE(back.rho.size() == dens.rho.size());
    for (std::size_t i = 0; i < dens.rho.size(); ++i) {
        CHECK(back.grid[i] == dens.grid[i]);  // 17 digits -> bit exact
        CHECK(back.rho[i] == dens.rho[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_density_csv sorts unsorted rows") {
    std::string body = "# N=1\n# Z=1\nr,rho\n";
    for (int i = 100; i >= 1; --i) {
        const double r = 0.1 * i;
        body += std::to_string(r) + "," + std::to_string(hydrogenic_rho(1.0, r)) + "\n";
    }
    auto path = write_temp("unsorted.csv", body);
    DensityProfile dens = load_density_csv(path);
    for (std::size_t i = 0; i + 1 < dens.grid.size(); ++i) {
        CHECK(dens.grid[i] < dens.grid[i + 1]);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_density_csv error paths") {
    CHECK_THROWS_AS(load_density_csv("/tmp/ecpnn_no_such_file.csv"), ParseError);

    auto no_meta = write_temp("nometa.csv", "r,rho\n1.0,0.1\n2.0,0.05\n");
    CHECK_THROWS_AS(load_density_csv(no_meta), ConfigError);
    std::remove(no_meta.c_str());

    std::string rows = "# N=1\n# Z=1\nr,rho\n";
    for (int i = 1; i <= 20; ++i) rows += std::to_string(0.1 * i) + ",0.01\n";

    auto malformed = write_temp("badrow.csv", rows + "3.7,not_a_number\n");
    CHECK_THROWS_WITH_AS(load_density_csv(malformed),
                         doctest::Contains("malformed"), ParseError);
    std::remove(malformed.c_str());

    auto dup = write_temp("dup.csv", rows + "1.0,0.01\n");
    CHECK_THROWS_AS(load_density_csv(dup), ValidationError);
    std::remove(dup.c_str());
}
