#include "ecpnn/numerov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ecpnn/observables.hpp"

namespace ecpnn {

ReferencePotential ReferencePotential::coulomb(double z) {
    if (!(z > 0.0)) throw DomainError("coulomb potential requires Z > 0");
    std::ostringstream desc;
    desc << "coulomb Z=" << z;
    return ReferencePotential([z](double r) { return -z / r; }, desc.str());
}

ReferencePotential ReferencePotential::harmonic(double k) {
    if (!(k > 0.0)) throw DomainError("harmonic potential requires k > 0");
    std::ostringstream desc;
    desc << "harmonic k=" << k;
    return ReferencePotential([k](double r) { return 0.5 * k * r * r; },
                              desc.str());
}

ReferencePotential ReferencePotential::tabulated(SplineField field) {
    auto shared = std::make_shared<SplineField>(std::move(field));
    const double lo = shared->grid().r_min();
    const double hi = shared->grid().r_max();
    // evaluation clamps to the tabulated domain
    return ReferencePotential(
        [shared, lo, hi](double r) { return shared->eval(std::clamp(r, lo, hi)); },
        "tabulated");
}

namespace {

struct ShootResult {
    int nodes = 0;
    double mismatch = 0.0;       // (u_L' - u_R')/u at the matching point
    std::vector<double> u;       // matched, unnormalized
    bool valid = false;
};

// Numerov double-ended shooting for a trial energy. k2[i] = 2(eps - V_i).
ShootResult shoot(const std::vector<double>& r, const std::vector<double>& v,
                  double eps) {
    const std::size_t n = r.size();
    const double h = r[1] - r[0];
    const double h2_12 = h * h / 12.0;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = 1.0 + h2_12 * 2.0 * (eps - v[i]);
    }

    // outermost classical turning point, kept away from the ends
    std::size_t m = n / 2;
    for (std::size_t i = n - 3; i >= 2; --i) {
        if (v[i] < eps) {
            m = i;
            break;
        }
        if (i == 2) break;
    }
    m = std::clamp<std::size_t>(m, 2, n - 3);

    ShootResult result;
    // outward sweep. Near the origin u ~ r(1 - z r + c2 r^2), the series
    // solution for V = -z/r + w(r): the cusp term matters for Coulomb-like
    // potentials and vanishes for regular ones.
    const double z_eff = -r[0] * v[0];
    const double c2 = (z_eff * z_eff - eps) / 3.0;
    std::vector<double> uo(m + 2);
    uo[0] = r[0] * (1.0 + r[0] * (-z_eff + c2 * r[0]));
    uo[1] = r[1] * (1.0 + r[1] * (-z_eff + c2 * r[1]));
    for (std::size_t i = 1; i <= m; ++i) {
        uo[i + 1] = ((12.0 - 10.0 * f[i]) * uo[i] - f[i - 1] * uo[i - 1]) / f[i + 1];
    }

    // inward sweep with overflow renormalization (deep forbidden tails)
    std::vector<double> ui(n);
    ui[n - 1] = 1e-15;
    const double kappa = std::sqrt(std::max(2.0 * (v[n - 1] - eps), 1e-12));
    ui[n - 2] = ui[n - 1] * std::exp(kappa * h);
    for (std::size_t i = n - 2; i >= m; --i) {
        ui[i - 1] = ((12.0 - 10.0 * f[i]) * ui[i] - f[i + 1] * ui[i + 1]) / f[i - 1];
        if (std::abs(ui[i - 1]) > 1e250) {
            const double scale = 1e-250;
            for (std::size_t j = i - 1; j < n; ++j) ui[j] *= scale;
        }
    }

    if (uo[m] == 0.0 || ui[m] == 0.0) {
        return result;  // degenerate match, caller nudges eps
    }
    const double sigma = uo[m] / ui[m];

    result.u.assign(n, 0.0);
    for (std::size_t i = 0; i <= m; ++i) result.u[i] = uo[i];
    for (std::size_t i = m + 1; i < n; ++i) result.u[i] = sigma * ui[i];

    for (std::size_t i = 1; i < n; ++i) {
        if (result.u[i - 1] * result.u[i] < 0.0) ++result.nodes;
    }

    const double dl = (uo[m + 1] - uo[m - 1]) / (2.0 * h);
    const double dr = sigma * (ui[m + 1] - ui[m - 1]) / (2.0 * h);
    result.mismatch = (dl - dr) / uo[m];
    result.valid = std::isfinite(result.mismatch);
    return result;
}

}  // namespace

EigenSolution numerov_ground_state(const ReferencePotential& potential,
                                   const RadialGrid& grid) {
    if (!grid.is_uniform()) {
        throw DomainError("Numerov integration requires a uniform grid");
    }
    const std::size_t n = grid.size();
    const std::vector<double>& r = grid.points();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = potential(r[i]);
        if (!std::isfinite(v[i])) {
            throw NumericError("non-finite potential at r=" + std::to_string(r[i]));
        }
    }

    double lo = *std::min_element(v.begin(), v.end());
    double hi = v.back();
    if (!(hi > lo)) {
        throw NumericError("no-eigenvalue: empty search window");
    }

    // Bisection: nodes(eps) counts eigenvalues below eps; between poles
    // the log-derivative mismatch decreases through zero at the
    // eigenvalue (positive below, negative above).
    bool hi_moved = false;
    ShootResult best;
    double eps = 0.5 * (lo + hi);
    while (hi - lo > 1e-9) {
        eps = 0.5 * (lo + hi);
        ShootResult res = shoot(r, v, eps);
        if (!res.valid) {
            // nudge off a degenerate matching point
            eps = std::nextafter(eps, hi);
            res = shoot(r, v, eps);
            if (!res.valid) {
                lo = eps;
                continue;
            }
        }
        if (res.nodes > 0 || res.mismatch < 0.0) {
            hi = eps;
            hi_moved = true;
        } else {
            lo = eps;
        }
        best = std::move(res);
    }
    if (!hi_moved || !best.valid) {
        throw NumericError("no-eigenvalue: shooting mismatch has no sign change in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    // normalize so that integral of u^2 dr = 1, with u > 0 near origin
    std::vector<double> u = best.u;
    if (u[1] < 0.0) {
        for (double& x : u) x = -x;
    }
    std::vector<double> u2(n);
    for (std::size_t i = 0; i < n; ++i) u2[i] = u[i] * u[i];
    const double norm = integrate_radial(SplineField(grid, u2), RadialWeight::None);
    const double scale = 1.0 / std::sqrt(norm);
    for (double& x : u) x *= scale;

    EigenSolution sol{eps, grid, std::move(u), best.nodes};
    if (sol.node_count != 0) {
        throw NumericError("converged state is not the ground state");
    }
    return sol;
}

DensityProfile density_from_solution(const EigenSolution& sol, int n_electrons,
                                     double z) {
    if (n_electrons < 1) throw DomainError("n_electrons must be >= 1");
    const std::size_t n = sol.grid.size();
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = sol.u[i] / sol.grid[i];
        rho[i] = n_electrons * phi * phi / (4.0 * std::numbers::pi);
    }
    std::ostringstream label;
    label << "numerov N=" << n_electrons << " Z=" << z;
    DensityProfile profile{sol.grid, std::move(rho), n_electrons, z, label.str()};
    validate(profile);
    return profile;
}

RoundTripResult round_trip(const ReferencePotential& potential,
                           const TrainConfig& config, int n_electrons, double z,
                           double cmp_lo, double cmp_hi) {
    // oracle grid is denser and wider than the training domain
    const RadialGrid oracle_grid = RadialGrid::uniform(1e-4, 40.0, 6000);
    const EigenSolution sol = numerov_ground_state(potential, oracle_grid);
    const DensityProfile dense = density_from_solution(sol, n_electrons, z);

    // resample onto the training domain
    const RadialGrid train_grid =
        RadialGrid::uniform(config.r_min, config.r_max, 2000);
    SplineField rho_spline(dense.grid, dense.rho);
    std::vector<double> rho(train_grid.size());
    for (std::size_t i = 0; i < train_grid.size(); ++i) {
        rho[i] = std::max(rho_spline.eval(train_grid[i]), 0.0);
    }
    DensityProfile density{train_grid, std::move(rho), n_electrons, z,
                           dense.label + " resampled"};
    validate(density);

    TrainConfig run_config = config;
    run_config.ic.y0 = potential(run_config.ic.r0);  // anchor the constant

    TrainResult trained = train(density, run_config);

    const KineticRatioField q =
        kinetic_ratio(amplitude(density, run_config.occupancy_divisor));
    const EnergyCurve curve = energy_curve(trained.model, q);
    // the density carries n_electrons; per-particle energy needs q + U of
    // the single-orbital amplitude, which is independent of that scale
    const double estimate = energy_estimate(curve, cmp_lo, cmp_hi);

    double max_err = 0.0;
    for (std::size_t i = 0; i < train_grid.size(); ++i) {
        const double r = train_grid[i];
        if (r < cmp_lo || r > cmp_hi) continue;
        max_err = std::max(max_err,
                           std::abs(forward(trained.model, r) - potential(r)));
    }

    RoundTripResult result;
    result.learned_vs_true_max_abs_error = max_err;
    result.energy_error = std::abs(estimate - sol.epsilon);
    result.energy_estimate = estimate;
    result.epsilon_true = sol.epsilon;
    result.model = std::move(trained.model);
    return result;
}

}  // namespace ecpnn
