#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/spline.hpp"
#include "ecpnn/trainer.hpp"

namespace ecpnn {

/// Potential fed to the Numerov solver; finite on (0, r_max].
class ReferencePotential {
  public:
    static ReferencePotential coulomb(double z);
    static ReferencePotential harmonic(double k);
    static ReferencePotential tabulated(SplineField field);

    double operator()(double r) const { return eval_(r); }
    const std::string& describe() const { return description_; }

  private:
    ReferencePotential(std::function<double(double)> eval, std::string desc)
        : eval_(std::move(eval)), description_(std::move(desc)) {}

    std::function<double(double)> eval_;
    std::string description_;
};

/// Reduced radial solution u(r) = r * phi(r), normalized so that the
/// integral of u^2 dr is 1.
struct EigenSolution {
    double epsilon = 0.0;  // hartree
    RadialGrid grid;
    std::vector<double> u;
    int node_count = 0;
};

/// Solves -1/2 u'' + V(r) u = eps u with u(0) = 0 and u -> 0 at r_max
/// by Numerov integration from both ends, matching at the outermost
/// classical turning point, with bisection on eps and node counting.
/// Converges when the eps bracket is below 1e-9.
EigenSolution numerov_ground_state(const ReferencePotential& potential,
                                   const RadialGrid& grid);

/// rho(r) = n_electrons * (u/r)^2 / (4 pi).
DensityProfile density_from_solution(const EigenSolution& sol, int n_electrons,
                                     double z);

struct RoundTripResult {
    double learned_vs_true_max_abs_error = 0.0;  // over [0.5, 8], hartree
    double energy_error = 0.0;                   // |estimate - eps_true|
    double energy_estimate = 0.0;
    double epsilon_true = 0.0;
    PotentialModel model;
};

/// Oracle density -> training -> comparison of the learned potential
/// against the generating one. The IC in the config is overwritten
/// with the true potential value so the additive constant is anchored.
RoundTripResult round_trip(const ReferencePotential& potential,
                           const TrainConfig& config, int n_electrons = 1,
                           double z = 1.0, double cmp_lo = 0.5,
                           double cmp_hi = 8.0);

}  // namespace ecpnn
