#include "ecpnn/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ecpnn/spline.hpp"

namespace ecpnn {

RadialGrid::RadialGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < kMinPoints) {
        throw ValidationError("radial grid needs at least 16 points, got " +
                              std::to_string(points_.size()));
    }
    if (points_.front() <= 0.0) {
        throw ValidationError("radial grid must start at r > 0");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1])) {
            throw ValidationError("radial grid not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
    const double h0 = points_[1] - points_[0];
    uniform_ = true;
    for (std::size_t i = 1; i + 1 < points_.size(); ++i) {
        const double h = points_[i + 1] - points_[i];
        if (std::abs(h - h0) > 1e-9 * h0) {
            uniform_ = false;
            break;
        }
    }
}

RadialGrid RadialGrid::uniform(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw ValidationError("uniform grid requires 0 < r_min < r_max");
    }
    std::vector<double> pts(n);
    const double h = (r_max - r_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = r_min + h * static_cast<double>(i);
    }
    pts.back() = r_max;
    return RadialGrid(std::move(pts));
}

double hydrogenic_rho(double z, double r) {
    return z * z * z / std::numbers::pi * std::exp(-2.0 * z * r);
}

double normalization(const DensityProfile& profile) {
    SplineField f = fit_spline(profile.grid, profile.rho);
    return integrate_radial(f, RadialWeight::FourPiR2);
}

void validate(const DensityProfile& profile) {
    if (profile.rho.size() != profile.grid.size()) {
        throw ValidationError("density length does not match grid");
    }
    for (std::size_t i = 0; i < profile.rho.size(); ++i) {
        if (!std::isfinite(profile.rho[i]) || profile.rho[i] < 0.0) {
            throw ValidationError("density must be finite and >= 0 (index " +
                                  std::to_string(i) + ")");
        }
    }
    if (profile.n_electrons <= 0) {
        throw ValidationError("n_electrons must be positive");
    }
    if (!(profile.nuclear_charge > 0.0)) {
        throw ValidationError("nuclear_charge must be positive");
    }
    const double n = normalization(profile);
    const double target = static_cast<double>(profile.n_electrons);
    if (std::abs(n - target) > profile.norm_tolerance * target) {
        std::ostringstream oss;
        oss << "density normalization " << n << " deviates from N=" << target
            << " beyond tolerance " << profile.norm_tolerance;
        throw ValidationError(oss.str());
    }
}

DensityProfile make_hydrogenic(double z, const RadialGrid& grid) {
    if (!(z > 0.0)) {
        throw DomainError("hydrogenic density requires Z > 0");
    }
    std::vector<double> rho(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rho[i] = hydrogenic_rho(z, grid[i]);
    }
    std::ostringstream label;
    label << "hydrogenic Z=" << z;
    DensityProfile profile{grid, std::move(rho), 1, z, label.str()};
    validate(profile);
    return profile;
}

double sto_orbital_value(const NaturalOrbital& orbital, double r) {
    double chi = 0.0;
    for (const StoTerm& t : orbital.sto_terms) {
        chi += t.coefficient * std::pow(r, t.power - 1) * std::exp(-t.exponent * r);
    }
    return chi;
}

DensityProfile make_sto_density(const NaturalOrbitalSet& orbitals,
                                const RadialGrid& grid, double z) {
    if (orbitals.orbitals.empty()) {
        throw ValidationError("natural orbital set is empty");
    }
    double occ_sum = 0.0;
    for (const NaturalOrbital& o : orbitals.orbitals) {
        if (o.occupation < 0.0 || o.occupation > 2.0) {
            throw ValidationError("orbital occupation outside [0, 2]");
        }
        if (!(o.symmetry_factor > 0.0)) {
            throw ValidationError("symmetry factor must be positive");
        }
        occ_sum += o.symmetry_factor * o.occupation;
    }
    // chi are normalized radial orbitals (integral of chi^2 r^2 dr = 1),
    // so the spatial density carries a 1/(4 pi) angular factor.
    std::vector<double> rho(grid.size(), 0.0);
    for (const NaturalOrbital& o : orbitals.orbitals) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double chi = sto_orbital_value(o, grid[i]);
            if (!std::isfinite(chi)) {
                throw NumericError("non-finite orbital value at r=" +
                                   std::to_string(grid[i]));
            }
            rho[i] += o.symmetry_factor * o.occupation * chi * chi /
                      (4.0 * std::numbers::pi);
        }
    }
    DensityProfile profile{grid, std::move(rho),
                           static_cast<int>(std::lround(occ_sum)), z,
                           "sto N=" + std::to_string(std::lround(occ_sum))};
    validate(profile);
    return profile;
}

double cusp_exponent(const DensityProfile& profile, std::size_t fit_points) {
    if (profile.grid.r_min() > 0.2) {
        throw DomainError("cusp fit needs grid reaching r <= 0.2");
    }
    const std::size_t k = std::min(fit_points, profile.grid.size());
    // least-squares line through (r_i, ln rho_i)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(profile.rho[i] > 0.0)) {
            throw NumericError("non-positive density in cusp fit window");
        }
        const double x = profile.grid[i];
        const double y = std::log(profile.rho[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(k);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -0.5 * slope;
}

AmplitudeProfile amplitude(const DensityProfile& profile,
                           double occupancy_divisor) {
    if (!(occupancy_divisor > 0.0)) {
        throw DomainError("occupancy divisor must be positive");
    }
    std::vector<double> phi(profile.rho.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi[i] = std::max(std::sqrt(profile.rho[i] / occupancy_divisor),
                          AmplitudeProfile::kPhiFloor);
    }
    return AmplitudeProfile{profile.grid, std::move(phi), occupancy_divisor,
                            profile.label};
}

namespace {

void trim(std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    s = (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

DensityProfile load_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open density file: " + path);
    }
    bool have_n = false, have_z = false, have_header = false;
    int n_electrons = 0;
    double z = 0.0;
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            trim(body);
            if (body.rfind("N=", 0) == 0) {
                n_electrons = std::stoi(body.substr(2));
                have_n = true;
            } else if (body.rfind("Z=", 0) == 0) {
                z = std::stod(body.substr(2));
                have_z = true;
            }
            continue;
        }
        if (!have_header) {
            if (line != "r,rho") {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected header 'r,rho'");
            }
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": malformed row (no comma)");
        }
        try {
            std::size_t used = 0;
            const std::string rs = line.substr(0, comma);
            const std::string ds = line.substr(comma + 1);
            const double r = std::stod(rs, &used);
            const double rho = std::stod(ds);
            (void)used;
            rows.emplace_back(r, rho);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": malformed row");
        }
    }
    if (!have_n || !have_z) {
        throw ConfigError(path + ": missing '# N=' or '# Z=' metadata");
    }
    if (!have_header) {
        throw ParseError(path + ": missing 'r,rho' header");
    }
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw ValidationError(path + ": duplicate radius " +
                                  std::to_string(rows[i].first));
        }
    }
    std::vector<double> r(rows.size()), rho(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r[i] = rows[i].first;
        rho[i] = rows[i].second;
    }
    DensityProfile profile{RadialGrid(std::move(r)), std::move(rho), n_electrons,
                           z, path};
    validate(profile);
    return profile;
}

void save_density_csv(const DensityProfile& profile, const std::string& path,
                      const std::vector<std::string>& extra_comments) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write density file: " + path);
    }
    char buf[64];
    out << "# N=" << profile.n_electrons << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", profile.nuclear_charge);
    out << "# Z=" << buf << "\n";
    for (const std::string& c : extra_comments) {
        out << "# " << c << "\n";
    }
    out << "r,rho\n";
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", profile.grid[i]);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", profile.rho[i]);
        out << buf << "\n";
    }
}

}  // namespace ecpnn
