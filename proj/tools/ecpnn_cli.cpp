// Command-line front end: density generation, training, evaluation,
// the Numerov oracle, and closed-form inversion. All quantities are in
// atomic units (hartree, bohr). Exit codes: 0 success, 1 runtime or
// numeric failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/manifest.hpp"
#include "ecpnn/model.hpp"
#include "ecpnn/numerov.hpp"
#include "ecpnn/observables.hpp"
#include "ecpnn/spline.hpp"
#include "ecpnn/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool g_quiet = false;
std::string g_command_line;

void info(const std::string& msg) {
    if (!g_quiet) std::cerr << "[ecpnn] " << msg << "\n";
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json config_to_json(const ecpnn::TrainConfig& cfg) {
    json j;
    j["n_samples"] = cfg.n_samples;
    j["epochs"] = cfg.epochs;
    j["learning_rate"] = cfg.learning_rate;
    j["l2_weight"] = cfg.l2_weight;
    j["r_min_bohr"] = cfg.r_min;
    j["r_max_bohr"] = cfg.r_max;
    j["ic_r0_bohr"] = cfg.ic.r0;
    j["ic_y0_ha"] = cfg.ic.y0;
    j["ic_weight"] = cfg.ic_weight;
    j["seed"] = cfg.seed;
    j["batch_size"] = cfg.batch_size;
    j["occupancy_divisor"] = cfg.occupancy_divisor;
    j["resample_each_epoch"] = cfg.resample_each_epoch;
    if (cfg.max_grad_norm) j["max_grad_norm"] = *cfg.max_grad_norm;
    return j;
}

// key = value lines, '#' comments; CLI flags take precedence.
void load_config_file(const std::string& path, ecpnn::TrainConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ecpnn::ConfigError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "samples") cfg.n_samples = std::stoi(value);
        else if (key == "epochs") cfg.epochs = std::stoi(value);
        else if (key == "lr") cfg.learning_rate = std::stod(value);
        else if (key == "l2") cfg.l2_weight = std::stod(value);
        else if (key == "ic_r0") cfg.ic.r0 = std::stod(value);
        else if (key == "ic_y0") cfg.ic.y0 = std::stod(value);
        else if (key == "ic_weight") cfg.ic_weight = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "batch_size") cfg.batch_size = std::stoi(value);
        else if (key == "occupancy_divisor") cfg.occupancy_divisor = std::stod(value);
        else if (key == "resample_each_epoch") cfg.resample_each_epoch = (value == "true" || value == "1");
        else if (key == "max_grad_norm") cfg.max_grad_norm = std::stod(value);
        else throw ecpnn::ConfigError("unknown config key: " + key);
    }
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        throw CLI::ValidationError(std::string(what) + " expects 'a,b'");
    }
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

ecpnn::NaturalOrbitalSet load_orbitals_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ecpnn::ConfigError("cannot open orbital file: " + path);
    json doc = json::parse(in);
    ecpnn::NaturalOrbitalSet set;
    for (const json& jo : doc.at("orbitals")) {
        ecpnn::NaturalOrbital orb;
        orb.occupation = jo.at("occupation").get<double>();
        orb.symmetry_factor = jo.value("symmetry_factor", 1.0);
        for (const json& jt : jo.at("sto_terms")) {
            ecpnn::StoTerm t;
            t.coefficient = jt.at("coefficient").get<double>();
            t.power = jt.at("power").get<int>();
            t.exponent = jt.at("exponent").get<double>();
            orb.sto_terms.push_back(t);
        }
        set.orbitals.push_back(std::move(orb));
    }
    return set;
}

ecpnn::DensityProfile resample_density(const ecpnn::DensityProfile& dense,
                                       const ecpnn::RadialGrid& grid) {
    ecpnn::SplineField rho_spline(dense.grid, dense.rho);
    std::vector<double> rho(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rho[i] = std::max(rho_spline.eval(grid[i]), 0.0);
    }
    return ecpnn::DensityProfile{grid, std::move(rho), dense.n_electrons,
                                 dense.nuclear_charge, dense.label + " resampled"};
}

// ---------------------------------------------------------------- gen-density

int cmd_gen_density(CLI::App& app, int argc, char** argv) {
    std::string kind, orbitals_path, out_path;
    double z = 0.0, k = 0.0;
    double rmin = 0.1, rmax = 10.0;
    std::size_t npoints = 2000;
    int n_electrons = 1;

    app.add_option("--kind", kind, "hydrogenic|numerov-coulomb|numerov-harmonic|sto")
        ->required();
    auto* opt_z = app.add_option("--z", z, "nuclear charge");
    auto* opt_k = app.add_option("--k", k, "harmonic force constant");
    auto* opt_orb = app.add_option("--orbitals", orbitals_path,
                                   "natural orbital set (JSON)");
    app.add_option("--rmin", rmin);
    app.add_option("--rmax", rmax);
    app.add_option("--npoints", npoints);
    app.add_option("--n-electrons", n_electrons);
    app.add_option("--out", out_path)->required();

    app.parse(argc, argv);

    const bool needs_z =
        kind == "hydrogenic" || kind == "numerov-coulomb" || kind == "sto";
    const bool needs_k = kind == "numerov-harmonic";
    if (!needs_z && !needs_k) {
        throw CLI::ValidationError("--kind: unknown kind '" + kind + "'");
    }
    if (needs_z && opt_z->count() == 0) {
        throw CLI::RequiredError("--z (required for kind " + kind + ")");
    }
    if (needs_k && opt_k->count() == 0) {
        throw CLI::RequiredError("--k (required for kind numerov-harmonic)");
    }
    if (needs_z && opt_k->count() > 0) {
        throw CLI::ValidationError("--k conflicts with kind " + kind);
    }
    if (needs_k && opt_z->count() > 0) {
        throw CLI::ValidationError("--z conflicts with kind numerov-harmonic");
    }
    if (kind == "sto" && opt_orb->count() == 0) {
        throw CLI::RequiredError("--orbitals (required for kind sto)");
    }

    ecpnn::RunManifest manifest(g_command_line, out_path + ".manifest.json");
    manifest.set_config({{"kind", kind}, {"rmin", rmin}, {"rmax", rmax},
                         {"npoints", npoints}});
    if (!orbitals_path.empty()) manifest.add_input(orbitals_path);
    manifest.write_started();

    const ecpnn::RadialGrid grid = ecpnn::RadialGrid::uniform(rmin, rmax, npoints);
    std::vector<std::string> comments;
    ecpnn::DensityProfile profile = [&] {
        if (kind == "hydrogenic") {
            comments.push_back("source=hydrogenic");
            return ecpnn::make_hydrogenic(z, grid);
        }
        if (kind == "sto") {
            comments.push_back("source=sto");
            return ecpnn::make_sto_density(load_orbitals_json(orbitals_path), grid, z);
        }
        const auto potential = (kind == "numerov-coulomb")
                                   ? ecpnn::ReferencePotential::coulomb(z)
                                   : ecpnn::ReferencePotential::harmonic(k);
        comments.push_back("source=numerov");
        comments.push_back("potential=" + potential.describe());
        const ecpnn::RadialGrid oracle_grid =
            ecpnn::RadialGrid::uniform(1e-4, 40.0, 6000);
        const ecpnn::EigenSolution sol =
            ecpnn::numerov_ground_state(potential, oracle_grid);
        comments.push_back("epsilon_ha=" + fmt17(sol.epsilon));
        const ecpnn::DensityProfile dense = ecpnn::density_from_solution(
            sol, n_electrons, kind == "numerov-coulomb" ? z : 1.0);
        return resample_density(dense, grid);
    }();
    ecpnn::validate(profile);
    ecpnn::save_density_csv(profile, out_path, comments);
    manifest.add_output(out_path);
    manifest.write_finished(true);
    info("wrote " + out_path + " (normalization " +
         std::to_string(ecpnn::normalization(profile)) + ")");
    return 0;
}

// --------------------------------------------------------------------- train

json report_to_json(const ecpnn::TrainReport& report) {
    json j;
    j["seed"] = report.seed;
    j["wall_time_s"] = report.wall_time_s;
    j["config"] = config_to_json(report.config);
    json total = json::array(), ec = json::array(), ic = json::array(),
         l2 = json::array();
    for (const ecpnn::LossBreakdown& l : report.trace) {
        total.push_back(l.total);
        ec.push_back(l.ec);
        ic.push_back(l.ic);
        l2.push_back(l.l2);
    }
    j["loss_trace"] = {{"total", total}, {"ec", ec}, {"ic", ic}, {"l2", l2}};
    if (!report.trace.empty()) {
        j["final_loss"] = {{"total", report.trace.back().total},
                           {"ec", report.trace.back().ec},
                           {"ic", report.trace.back().ic},
                           {"l2", report.trace.back().l2}};
    }
    return j;
}

int cmd_train(CLI::App& app, int argc, char** argv) {
    std::string density_path, out_dir = ".", ic_str, config_path;
    int runs = 1;
    double clip = 0.0;
    ecpnn::TrainConfig cfg;

    app.add_option("--density", density_path)->required();
    auto* opt_ic = app.add_option("--ic", ic_str, "r0,y0 anchor (default: ionic tail)");
    auto* opt_config = app.add_option("--config", config_path);
    auto* o_epochs = app.add_option("--epochs", cfg.epochs);
    auto* o_lr = app.add_option("--lr", cfg.learning_rate);
    auto* o_l2 = app.add_option("--l2", cfg.l2_weight);
    auto* o_samples = app.add_option("--samples", cfg.n_samples);
    auto* o_seed = app.add_option("--seed", cfg.seed);
    auto* o_batch = app.add_option("--batch-size", cfg.batch_size);
    auto* o_icw = app.add_option("--ic-weight", cfg.ic_weight);
    auto* o_occ = app.add_option("--occupancy-divisor", cfg.occupancy_divisor);
    auto* o_clip = app.add_option("--max-grad-norm", clip);
    auto* o_resample = app.add_flag("--resample-each-epoch");
    app.add_option("--runs", runs);
    app.add_option("--out-dir", out_dir);

    app.parse(argc, argv);

    if (opt_config->count() > 0) {
        // config file first, explicit flags re-applied on top
        ecpnn::TrainConfig from_file;
        load_config_file(config_path, from_file);
        const ecpnn::TrainConfig flag_values = cfg;
        cfg = from_file;
        if (o_epochs->count()) cfg.epochs = flag_values.epochs;
        if (o_lr->count()) cfg.learning_rate = flag_values.learning_rate;
        if (o_l2->count()) cfg.l2_weight = flag_values.l2_weight;
        if (o_samples->count()) cfg.n_samples = flag_values.n_samples;
        if (o_seed->count()) cfg.seed = flag_values.seed;
        if (o_batch->count()) cfg.batch_size = flag_values.batch_size;
        if (o_icw->count()) cfg.ic_weight = flag_values.ic_weight;
        if (o_occ->count()) cfg.occupancy_divisor = flag_values.occupancy_divisor;
    }
    if (o_resample->count()) cfg.resample_each_epoch = true;
    if (o_clip->count() > 0) cfg.max_grad_norm = clip;

    // parse --ic up front so a malformed pair is a usage error (exit 2)
    std::optional<ecpnn::InitialCondition> explicit_ic;
    if (opt_ic->count() > 0) {
        const auto [r0, y0] = parse_pair(ic_str, "--ic");
        explicit_ic = ecpnn::InitialCondition{r0, y0};
    }

    fs::create_directories(out_dir);
    ecpnn::RunManifest manifest(g_command_line,
                                (fs::path(out_dir) / "manifest.json").string());
    manifest.add_input(density_path);

    const ecpnn::DensityProfile density = ecpnn::load_density_csv(density_path);
    cfg.r_min = density.grid.r_min();
    cfg.r_max = density.grid.r_max();
    if (explicit_ic) {
        cfg.ic = *explicit_ic;
    } else {
        cfg.ic = ecpnn::default_ic(density, cfg.r_max);
        info("using default IC (" + std::to_string(cfg.ic.r0) + ", " +
             std::to_string(cfg.ic.y0) + ")");
    }

    manifest.set_config(config_to_json(cfg));
    manifest.write_started();

    const std::vector<ecpnn::TrainResult> results =
        ecpnn::multi_run(density, cfg, runs);

    const ecpnn::KineticRatioField q =
        ecpnn::kinetic_ratio(ecpnn::amplitude(density, cfg.occupancy_divisor));

    json report;
    report["density"] = density_path;
    report["runs"] = json::array();
    std::vector<double> energies;
    for (const ecpnn::TrainResult& result : results) {
        const std::string model_path =
            (fs::path(out_dir) /
             ("model_" + std::to_string(result.report.seed) + ".ecpnn"))
                .string();
        ecpnn::save_model(result.model, model_path);
        manifest.add_output(model_path);

        const double e = ecpnn::energy_estimate(
            ecpnn::energy_curve(result.model, q), std::max(0.5, cfg.r_min),
            std::min(8.0, cfg.r_max));
        energies.push_back(e);

        json run = report_to_json(result.report);
        run["model_file"] = model_path;
        run["energy_estimate_ha"] = e;
        report["runs"].push_back(std::move(run));
    }
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= static_cast<double>(energies.size());
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    report["energy_mean_ha"] = mean;
    report["energy_std_ha"] = std::sqrt(var / static_cast<double>(energies.size()));

    const std::string report_path =
        (fs::path(out_dir) / "train_report.json").string();
    std::ofstream out(report_path);
    out << report.dump(2) << "\n";
    manifest.add_output(report_path);
    manifest.write_finished(true);
    info("wrote " + report_path);
    return 0;
}

// ---------------------------------------------------------------------- eval

int cmd_eval(CLI::App& app, int argc, char** argv) {
    std::vector<std::string> model_paths;
    std::string density_path, out_dir = ".", window_str = "0.5,8";
    double reference_val = 0.0;
    double occupancy_divisor = 1.0;

    app.add_option("--model", model_paths)->required()->expected(-1);
    app.add_option("--density", density_path)->required();
    auto* opt_ref = app.add_option("--reference", reference_val,
                                   "reference energy (hartree)");
    app.add_option("--window", window_str, "median window r_lo,r_hi (bohr)");
    app.add_option("--occupancy-divisor", occupancy_divisor);
    app.add_option("--out-dir", out_dir);

    app.parse(argc, argv);
    const auto [w_lo, w_hi] = parse_pair(window_str, "--window");

    fs::create_directories(out_dir);
    ecpnn::RunManifest manifest(g_command_line,
                                (fs::path(out_dir) / "manifest.json").string());
    manifest.add_input(density_path);
    for (const std::string& m : model_paths) manifest.add_input(m);
    manifest.set_config({{"window_bohr", {w_lo, w_hi}},
                         {"occupancy_divisor", occupancy_divisor}});
    manifest.write_started();

    const ecpnn::DensityProfile density = ecpnn::load_density_csv(density_path);
    const ecpnn::KineticRatioField q =
        ecpnn::kinetic_ratio(ecpnn::amplitude(density, occupancy_divisor));

    json report;
    report["density"] = density_path;
    report["window_bohr"] = {w_lo, w_hi};
    report["models"] = json::array();

    std::vector<double> energies;
    double t_sum = 0.0, v_sum = 0.0;
    for (const std::string& path : model_paths) {
        const ecpnn::PotentialModel model = ecpnn::load_model(path);
        const ecpnn::EnergyCurve curve = ecpnn::energy_curve(model, q);
        const double e = ecpnn::energy_estimate(curve, w_lo, w_hi);
        const double t = ecpnn::expectation_T(density, q);
        const double v = ecpnn::expectation_V(density, model);
        const ecpnn::VirialDeviation virial = ecpnn::virial_deviation(t, v);
        energies.push_back(e);
        t_sum += t;
        v_sum += v;
        json jm;
        jm["model_file"] = path;
        jm["energy_estimate_ha"] = e;
        jm["t_expectation_ha"] = t;
        jm["v_expectation_ha"] = v;
        jm["virial_deviation_abs_ha"] = virial.abs;
        if (virial.rel) jm["virial_deviation_rel"] = *virial.rel;
        report["models"].push_back(std::move(jm));
    }
    const double n = static_cast<double>(energies.size());
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= n;
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    report["energy_mean_ha"] = mean;
    report["energy_std_ha"] = std::sqrt(var / n);
    report["t_expectation_mean_ha"] = t_sum / n;
    report["v_expectation_mean_ha"] = v_sum / n;
    const ecpnn::VirialDeviation virial_mean =
        ecpnn::virial_deviation(t_sum / n, v_sum / n);
    report["virial_deviation_abs_ha"] = virial_mean.abs;
    if (virial_mean.rel) report["virial_deviation_rel"] = *virial_mean.rel;
    if (opt_ref->count() > 0) {
        const ecpnn::RmseResult rmse =
            ecpnn::rmse_vs_reference(energies, reference_val);
        report["reference_ha"] = reference_val;
        report["rmse_ha"] = rmse.rmse;
        report["rmse_spread_ha"] = rmse.spread;
    }

    // plot-ready curves for the first model
    const ecpnn::PotentialModel first = ecpnn::load_model(model_paths.front());
    const std::string curves_path = (fs::path(out_dir) / "curves.csv").string();
    {
        std::ofstream out(curves_path);
        out << "r,q,u,e,4pir2rho\n";
        for (std::size_t i = 0; i < density.grid.size(); ++i) {
            const double r = density.grid[i];
            const double qv = q.field.values()[i];
            const double u = ecpnn::forward(first, r);
            out << fmt17(r) << "," << fmt17(qv) << "," << fmt17(u) << ","
                << fmt17(qv + u) << ","
                << fmt17(4.0 * std::numbers::pi * r * r * density.rho[i]) << "\n";
        }
    }

    const std::string report_path =
        (fs::path(out_dir) / "energy_report.json").string();
    std::ofstream out(report_path);
    out << report.dump(2) << "\n";
    manifest.add_output(report_path);
    manifest.add_output(curves_path);
    manifest.write_finished(true);
    info("wrote " + report_path);
    return 0;
}

// -------------------------------------------------------------------- oracle

int cmd_oracle(CLI::App& app, int argc, char** argv) {
    std::string potential_kind, emit_path;
    double z = 0.0, k = 0.0;
    bool solve_only = false;
    int n_electrons = 1;
    double rmin = 0.1, rmax = 10.0;
    std::size_t npoints = 2000;

    app.add_option("--potential", potential_kind, "coulomb|harmonic")->required();
    auto* opt_z = app.add_option("--z", z);
    auto* opt_k = app.add_option("--k", k);
    app.add_flag("--solve-only", solve_only);
    auto* opt_emit = app.add_option("--emit-density", emit_path);
    app.add_option("--n-electrons", n_electrons);
    app.add_option("--rmin", rmin);
    app.add_option("--rmax", rmax);
    app.add_option("--npoints", npoints);

    app.parse(argc, argv);

    if (potential_kind == "coulomb") {
        if (opt_z->count() == 0) throw CLI::RequiredError("--z");
        if (!(z > 0.0)) throw CLI::ValidationError("--z must be positive");
    } else if (potential_kind == "harmonic") {
        if (opt_k->count() == 0) throw CLI::RequiredError("--k");
        if (!(k > 0.0)) throw CLI::ValidationError("--k must be positive");
    } else {
        throw CLI::ValidationError("--potential must be coulomb or harmonic");
    }
    if (!solve_only && opt_emit->count() == 0) {
        throw CLI::RequiredError("--solve-only or --emit-density");
    }

    const ecpnn::ReferencePotential potential =
        potential_kind == "coulomb" ? ecpnn::ReferencePotential::coulomb(z)
                                    : ecpnn::ReferencePotential::harmonic(k);
    const ecpnn::RadialGrid oracle_grid =
        ecpnn::RadialGrid::uniform(1e-4, 40.0, 6000);
    const ecpnn::EigenSolution sol =
        ecpnn::numerov_ground_state(potential, oracle_grid);
    std::printf("%.6f\n", sol.epsilon);

    if (opt_emit->count() > 0) {
        ecpnn::RunManifest manifest(g_command_line, emit_path + ".manifest.json");
        manifest.set_config({{"potential", potential.describe()}});
        manifest.write_started();
        const ecpnn::DensityProfile dense = ecpnn::density_from_solution(
            sol, n_electrons, potential_kind == "coulomb" ? z : 1.0);
        const ecpnn::DensityProfile profile = resample_density(
            dense, ecpnn::RadialGrid::uniform(rmin, rmax, npoints));
        ecpnn::validate(profile);
        ecpnn::save_density_csv(profile, emit_path,
                                {"source=numerov",
                                 "potential=" + potential.describe(),
                                 "epsilon_ha=" + fmt17(sol.epsilon)});
        manifest.add_output(emit_path);
        manifest.write_finished(true);
        info("wrote " + emit_path);
    }
    return 0;
}

// -------------------------------------------------------------------- invert

int cmd_invert(CLI::App& app, int argc, char** argv) {
    std::string density_path, out_path = "potential.csv";
    double epsilon = 0.0;
    double occupancy_divisor = 1.0;

    app.add_option("--density", density_path)->required();
    app.add_option("--epsilon", epsilon, "eigenvalue anchor, -I by convention")
        ->required();
    app.add_option("--occupancy-divisor", occupancy_divisor);
    app.add_option("--out", out_path);

    app.parse(argc, argv);

    ecpnn::RunManifest manifest(g_command_line, out_path + ".manifest.json");
    manifest.add_input(density_path);
    manifest.set_config({{"epsilon_ha", epsilon},
                         {"occupancy_divisor", occupancy_divisor}});
    manifest.write_started();

    const ecpnn::DensityProfile density = ecpnn::load_density_csv(density_path);
    const ecpnn::AmplitudeProfile amp =
        ecpnn::amplitude(density, occupancy_divisor);
    for (std::size_t i = 0; i < amp.phi.size(); ++i) {
        if (amp.phi[i] == ecpnn::AmplitudeProfile::kPhiFloor) {
            info("warning: amplitude floored at r=" + std::to_string(amp.grid[i]));
            break;
        }
    }
    const ecpnn::SplineField v = ecpnn::invert_local_potential(amp, epsilon);

    std::ofstream out(out_path);
    if (!out) throw ecpnn::ConfigError("cannot write " + out_path);
    out << "r,v\n";
    for (std::size_t i = 0; i < v.grid().size(); ++i) {
        out << fmt17(v.grid()[i]) << "," << fmt17(v.values()[i]) << "\n";
    }
    manifest.add_output(out_path);
    manifest.write_finished(true);
    info("wrote " + out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    {
        std::ostringstream cmd;
        for (int i = 0; i < argc; ++i) {
            if (i) cmd << ' ';
            cmd << argv[i];
        }
        g_command_line = cmd.str();
    }

    if (argc < 2) {
        std::cerr << "usage: ecpnn {gen-density|train|eval|oracle|invert} [flags]\n";
        return 2;
    }
    const std::string cmd = argv[1];
    CLI::App sub{cmd};
    sub.add_flag("--quiet", g_quiet, "suppress progress messages");

    // shift argv past the subcommand name
    std::vector<char*> args;
    args.push_back(argv[0]);
    for (int i = 2; i < argc; ++i) args.push_back(argv[i]);
    const int sub_argc = static_cast<int>(args.size());

    try {
        if (cmd == "gen-density") {
            return cmd_gen_density(sub, sub_argc, args.data());
        } else if (cmd == "train") {
            return cmd_train(sub, sub_argc, args.data());
        } else if (cmd == "eval") {
            return cmd_eval(sub, sub_argc, args.data());
        } else if (cmd == "oracle") {
            return cmd_oracle(sub, sub_argc, args.data());
        } else if (cmd == "invert") {
            return cmd_invert(sub, sub_argc, args.data());
        } else if (cmd == "--help" || cmd == "-h") {
            std::cout << "usage: ecpnn {gen-density|train|eval|oracle|invert} [flags]\n"
                      << "Run 'ecpnn <command> --help' for per-command flags.\n";
            return 0;
        }
        std::cerr << "unknown command: " << cmd << "\n";
        return 2;
    } catch (const CLI::CallForHelp&) {
        std::cout << sub.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ecpnn::TrainingError& e) {
        std::cerr << "training error (epoch " << e.epoch << "): " << e.what()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
