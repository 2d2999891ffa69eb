#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/model.hpp"
#include "ecpnn/spline.hpp"

namespace ecpnn {

/// Pointwise conserved quantity E(r) = q(r) + U_theta(r), hartree.
struct EnergyCurve {
    RadialGrid grid;
    std::vector<double> e_of_r;
};

struct VirialDeviation {
    double abs = 0.0;                 // 2<T> + <V>, hartree
    std::optional<double> rel;        // |2<T>+<V>| / |<V>|, absent when <V>=0
};

struct RmseResult {
    double rmse = 0.0;    // sqrt(mean (E_run - reference)^2)
    double spread = 0.0;  // std of per-run absolute errors
};

struct EnergyReport {
    double energy_estimate_ha = 0.0;
    std::vector<double> per_run_energies_ha;
    double mean_ha = 0.0;
    double std_ha = 0.0;
    double t_expectation_ha = 0.0;
    double v_expectation_ha = 0.0;
    VirialDeviation virial;
    std::optional<RmseResult> rmse_vs_reference_ha;
};

EnergyCurve energy_curve(const PotentialModel& model, const KineticRatioField& q);

/// Median of E(r) over grid points inside the mask; robust against
/// spline edge artifacts.
double energy_estimate(const EnergyCurve& curve, double r_lo = 0.5,
                       double r_hi = 8.0);

/// <T> = integral of q(r) rho(r) 4 pi r^2 dr (not normalized by N).
double expectation_T(const DensityProfile& density, const KineticRatioField& q);

/// <V> = integral of U_theta(r) rho(r) 4 pi r^2 dr.
double expectation_V(const DensityProfile& density, const PotentialModel& model);

VirialDeviation virial_deviation(double t, double v);

RmseResult rmse_vs_reference(const std::vector<double>& per_run_energies,
                             double reference);

/// Closed-form inversion V(r) = epsilon + 0.5 * laplacian(phi)/phi
/// = epsilon - q(r); the non-learned baseline.
SplineField invert_local_potential(const AmplitudeProfile& amp, double epsilon);

struct ShellPeaks {
    double potential_max_r = 0.0;
    std::optional<double> radial_density_min_r;  // absent for single shells
};

/// Grid argmax of U_theta and the argmin of 4 pi r^2 rho between its
/// two largest peaks.
ShellPeaks shell_peak_analysis(const DensityProfile& density,
                               const PotentialModel& model);

}  // namespace ecpnn
