#include "ecpnn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ecpnn {

EnergyCurve energy_curve(const PotentialModel& model, const KineticRatioField& q) {
    const RadialGrid& grid = q.field.grid();
    std::vector<double> e(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        e[i] = q.field.values()[i] + forward(model, grid[i]);
    }
    return EnergyCurve{grid, std::move(e)};
}

double energy_estimate(const EnergyCurve& curve, double r_lo, double r_hi) {
    std::vector<double> window;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        if (curve.grid[i] >= r_lo && curve.grid[i] <= r_hi) {
            window.push_back(curve.e_of_r[i]);
        }
    }
    if (window.empty()) {
        throw DomainError("energy_estimate: empty mask window");
    }
    const std::size_t mid = window.size() / 2;
    std::nth_element(window.begin(), window.begin() + mid, window.end());
    if (window.size() % 2 == 1) {
        return window[mid];
    }
    const double hi = window[mid];
    const double lo = *std::max_element(window.begin(), window.begin() + mid);
    return 0.5 * (lo + hi);
}

double expectation_T(const DensityProfile& density, const KineticRatioField& q) {
    std::vector<double> integrand(density.grid.size());
    for (std::size_t i = 0; i < density.grid.size(); ++i) {
        integrand[i] = q.field.eval(density.grid[i]) * density.rho[i];
    }
    return integrate_radial(SplineField(density.grid, std::move(integrand)),
                            RadialWeight::FourPiR2);
}

double expectation_V(const DensityProfile& density, const PotentialModel& model) {
    std::vector<double> integrand(density.grid.size());
    for (std::size_t i = 0; i < density.grid.size(); ++i) {
        integrand[i] = forward(model, density.grid[i]) * density.rho[i];
    }
    return integrate_radial(SplineField(density.grid, std::move(integrand)),
                            RadialWeight::FourPiR2);
}

VirialDeviation virial_deviation(double t, double v) {
    VirialDeviation dev;
    dev.abs = 2.0 * t + v;
    if (v != 0.0) {
        dev.rel = std::abs(dev.abs) / std::abs(v);
    }
    return dev;
}

RmseResult rmse_vs_reference(const std::vector<double>& per_run_energies,
                             double reference) {
    if (per_run_energies.empty()) {
        throw DomainError("rmse_vs_reference: no runs");
    }
    const double n = static_cast<double>(per_run_energies.size());
    double sq_sum = 0.0;
    std::vector<double> abs_errors;
    abs_errors.reserve(per_run_energies.size());
    for (double e : per_run_energies) {
        const double d = e - reference;
        sq_sum += d * d;
        abs_errors.push_back(std::abs(d));
    }
    RmseResult result;
    result.rmse = std::sqrt(sq_sum / n);
    double mean = 0.0;
    for (double a : abs_errors) mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : abs_errors) var += (a - mean) * (a - mean);
    result.spread = std::sqrt(var / n);
    return result;
}

SplineField invert_local_potential(const AmplitudeProfile& amp, double epsilon) {
    const KineticRatioField q = kinetic_ratio(amp);
    std::vector<double> v(amp.grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = epsilon - q.field.values()[i];
    }
    return SplineField(amp.grid, std::move(v));
}

namespace {

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            peaks.push_back(i);
        }
    }
    return peaks;
}

}  // namespace

ShellPeaks shell_peak_analysis(const DensityProfile& density,
                               const PotentialModel& model) {
    ShellPeaks result;
    const RadialGrid& grid = density.grid;

    double u_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = forward(model, grid[i]);
        if (u > u_max) {
            u_max = u;
            result.potential_max_r = grid[i];
        }
    }

    std::vector<double> radial(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        radial[i] = 4.0 * std::numbers::pi * grid[i] * grid[i] * density.rho[i];
    }
    std::vector<std::size_t> peaks = local_maxima(radial);
    if (peaks.size() < 2) {
        return result;  // single shell, no inter-shell minimum
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
        return radial[a] > radial[b];
    });
    std::size_t lo = peaks[0], hi = peaks[1];
    if (lo > hi) std::swap(lo, hi);
    std::size_t arg_min = lo;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (radial[i] < radial[arg_min]) arg_min = i;
    }
    result.radial_density_min_r = grid[arg_min];
    return result;
}

}  // namespace ecpnn
