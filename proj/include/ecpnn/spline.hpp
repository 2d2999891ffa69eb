#pragma once

#include <vector>

#include "ecpnn/errors.hpp"
#include "ecpnn/grid_density.hpp"

namespace ecpnn {

/// Natural cubic spline over a radial grid (second derivative zero at
/// both ends). Immutable after construction.
class SplineField {
  public:
    SplineField(RadialGrid grid, std::vector<double> values);

    double operator()(double r) const { return eval(r); }
    double eval(double r) const;

    /// Analytic derivative of the cubic piece containing r; order 1 or 2.
    double derivative(double r, int order) const;

    const RadialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::size_t interval(double r) const;

    RadialGrid grid_;
    std::vector<double> values_;
    // piece i: f(r) = a[i] + b[i] t + c[i] t^2 + d[i] t^3, t = r - grid[i]
    std::vector<double> b_, c_, d_;
};

SplineField fit_spline(const RadialGrid& grid, const std::vector<double>& values);

/// Spherically symmetric Laplacian f'' + (2/r) f'.
double radial_laplacian(const SplineField& field, double r);

enum class RadialWeight { None, FourPiR2 };

/// Composite Simpson on uniform grids (3/8 rule patch for even point
/// counts), trapezoid otherwise. Weight multiplies the integrand
/// pointwise before quadrature.
double integrate_radial(const SplineField& field,
                        RadialWeight weight = RadialWeight::None);

/// Local kinetic energy per unit amplitude,
/// q(r) = -(hbar^2/2m) * laplacian(|phi|) / |phi|, in hartree (a.u.).
/// Evaluated at every grid point via a spline of |phi|, then re-splined.
struct KineticRatioField {
    static constexpr double kHbar2Over2m = 0.5;  // a.u.

    SplineField field;
    std::string source;  // label of the originating amplitude
};

KineticRatioField kinetic_ratio(const AmplitudeProfile& amp);

}  // namespace ecpnn
