#pragma once

#include <string>
#include <vector>

#include "ecpnn/errors.hpp"

namespace ecpnn {

/// Strictly increasing radial grid, all radii > 0, in bohr.
class RadialGrid {
  public:
    static constexpr std::size_t kMinPoints = 16;

    explicit RadialGrid(std::vector<double> points);

    /// n equally spaced points on [r_min, r_max].
    static RadialGrid uniform(double r_min, double r_max, std::size_t n);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double r_min() const { return points_.front(); }
    double r_max() const { return points_.back(); }
    bool is_uniform() const { return uniform_; }

  private:
    std::vector<double> points_;
    bool uniform_ = false;
};

/// Tabulated one-electron density rho(r) with metadata.
/// Normalization: integral of 4*pi*r^2*rho over the grid must equal
/// n_electrons within norm_tolerance (relative). Truncated tails lose
/// mass, hence the loose default.
struct DensityProfile {
    RadialGrid grid;
    std::vector<double> rho;  // electrons / bohr^3
    int n_electrons = 1;
    double nuclear_charge = 1.0;
    std::string label;
    double norm_tolerance = 0.02;
};

struct StoTerm {
    double coefficient = 0.0;
    int power = 1;        // n_j >= 1, radial power r^(n_j - 1)
    double exponent = 1.0;  // Z_jl > 0
};

struct NaturalOrbital {
    std::vector<StoTerm> sto_terms;
    double occupation = 0.0;       // in [0, 2]
    double symmetry_factor = 1.0;  // positive
};

struct NaturalOrbitalSet {
    std::vector<NaturalOrbital> orbitals;
};

/// Proxy amplitude |phi| = sqrt(rho / c), floored at kPhiFloor.
struct AmplitudeProfile {
    static constexpr double kPhiFloor = 1e-12;

    RadialGrid grid;
    std::vector<double> phi;
    double occupancy_divisor = 1.0;
    std::string source;  // label of the originating density
};

/// Closed-form hydrogenic ground-state density (Z^3/pi) exp(-2 Z r).
double hydrogenic_rho(double z, double r);

/// Integral of 4*pi*r^2*rho over the profile's grid.
double normalization(const DensityProfile& profile);

/// Throws ValidationError if invariants are violated.
void validate(const DensityProfile& profile);

DensityProfile make_hydrogenic(double z, const RadialGrid& grid);

/// Density from natural radial orbitals: rho = sum f * n * chi^2 / (4 pi),
/// with chi(r) = sum coeff * r^(n_j-1) * exp(-Z_jl * r). N = round(sum f*n).
DensityProfile make_sto_density(const NaturalOrbitalSet& orbitals,
                                const RadialGrid& grid, double z);

/// Evaluate a natural radial orbital chi(r).
double sto_orbital_value(const NaturalOrbital& orbital, double r);

/// Nuclear-charge estimate from the cusp condition
/// lim_{r->0} d ln rho / dr = -2 Z, by least-squares fit of ln rho
/// over the first fit_points grid points.
double cusp_exponent(const DensityProfile& profile, std::size_t fit_points = 8);

AmplitudeProfile amplitude(const DensityProfile& profile,
                           double occupancy_divisor = 1.0);

/// CSV ingestion: header `r,rho`, comment lines `# N=<int>`, `# Z=<real>`.
/// Rows are sorted by r; duplicate radii are rejected.
DensityProfile load_density_csv(const std::string& path);

/// Writer emits 17 significant digits plus metadata comments.
void save_density_csv(const DensityProfile& profile, const std::string& path,
                      const std::vector<std::string>& extra_comments = {});

}  // namespace ecpnn
