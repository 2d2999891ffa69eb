#include "ecpnn/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ecpnn {

SplineField::SplineField(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    const std::size_t n = grid_.size();
    if (values_.size() != n) {
        throw ValidationError("spline values length does not match grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value in spline input");
        }
    }

    // Tridiagonal system for second derivatives m_i, natural boundary
    // m_0 = m_{n-1} = 0 (Thomas algorithm).
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = grid_[i + 1] - grid_[i];
    }
    std::vector<double> m(n, 0.0);
    if (n > 2) {
        const std::size_t k = n - 2;  // interior unknowns
        std::vector<double> diag(k), rhs(k), upper(k);
        for (std::size_t i = 0; i < k; ++i) {
            diag[i] = 2.0 * (h[i] + h[i + 1]);
            upper[i] = h[i + 1];
            rhs[i] = 6.0 * ((values_[i + 2] - values_[i + 1]) / h[i + 1] -
                            (values_[i + 1] - values_[i]) / h[i]);
        }
        for (std::size_t i = 1; i < k; ++i) {
            const double w = h[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m[k] = rhs[k - 1] / diag[k - 1];
        for (std::size_t i = k - 1; i >= 1; --i) {
            m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
        }
    }

    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b_[i] = (values_[i + 1] - values_[i]) / h[i] -
                h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        c_[i] = m[i] / 2.0;
        d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
    }
}

std::size_t SplineField::interval(double r) const {
    if (r < grid_.r_min() || r > grid_.r_max()) {
        throw DomainError("spline evaluation outside grid: r=" + std::to_string(r));
    }
    const auto& p = grid_.points();
    auto it = std::upper_bound(p.begin(), p.end(), r);
    std::size_t i = static_cast<std::size_t>(it - p.begin());
    if (i > 0) --i;
    if (i + 1 >= p.size()) i = p.size() - 2;
    return i;
}

double SplineField::eval(double r) const {
    const std::size_t i = interval(r);
    const double t = r - grid_[i];
    return values_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
}

double SplineField::derivative(double r, int order) const {
    const std::size_t i = interval(r);
    const double t = r - grid_[i];
    switch (order) {
        case 1:
            return b_[i] + t * (2.0 * c_[i] + 3.0 * t * d_[i]);
        case 2:
            return 2.0 * c_[i] + 6.0 * t * d_[i];
        default:
            throw DomainError("spline derivative order must be 1 or 2");
    }
}

SplineField fit_spline(const RadialGrid& grid, const std::vector<double>& values) {
    return SplineField(grid, values);
}

double radial_laplacian(const SplineField& field, double r) {
    if (!(r > 0.0)) {
        throw DomainError("radial Laplacian requires r > 0");
    }
    return field.derivative(r, 2) + 2.0 / r * field.derivative(r, 1);
}

namespace {

double weighted(const SplineField& f, std::size_t i, RadialWeight w) {
    const double v = f.values()[i];
    if (w == RadialWeight::FourPiR2) {
        const double r = f.grid()[i];
        return 4.0 * std::numbers::pi * r * r * v;
    }
    return v;
}

}  // namespace

double integrate_radial(const SplineField& field, RadialWeight weight) {
    const std::size_t n = field.grid().size();
    const auto& p = field.grid().points();
    if (!field.grid().is_uniform()) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            sum += 0.5 * (p[i + 1] - p[i]) *
                   (weighted(field, i, weight) + weighted(field, i + 1, weight));
        }
        return sum;
    }
    const double h = p[1] - p[0];
    // Simpson needs an odd point count; patch an even count with a
    // 3/8 rule on the last four points.
    std::size_t simpson_end = (n % 2 == 1) ? n : n - 3;
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 < simpson_end + 1; i += 2) {
        sum += h / 3.0 *
               (weighted(field, i, weight) + 4.0 * weighted(field, i + 1, weight) +
                weighted(field, i + 2, weight));
    }
    if (n % 2 == 0) {
        sum += 3.0 * h / 8.0 *
               (weighted(field, n - 4, weight) + 3.0 * weighted(field, n - 3, weight) +
                3.0 * weighted(field, n - 2, weight) + weighted(field, n - 1, weight));
    }
    return sum;
}

KineticRatioField kinetic_ratio(const AmplitudeProfile& amp) {
    for (double v : amp.phi) {
        if (!(v > 0.0)) {
            throw NumericError("amplitude must be strictly positive");
        }
    }
    SplineField phi(amp.grid, amp.phi);
    std::vector<double> q(amp.grid.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double r = amp.grid[i];
        q[i] = -KineticRatioField::kHbar2Over2m * radial_laplacian(phi, r) /
               amp.phi[i];
        if (!std::isfinite(q[i])) {
            throw NumericError("non-finite kinetic ratio at r=" + std::to_string(r));
        }
    }
    return KineticRatioField{SplineField(amp.grid, std::move(q)), amp.source};
}

}  // namespace ecpnn
