#include "ecpnn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace ecpnn {

void TrainConfig::validate() const {
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (l2_weight < 0.0) throw ConfigError("l2_weight must be >= 0");
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw ConfigError("domain requires 0 < r_min < r_max");
    }
    if (ic.r0 < r_min || ic.r0 > r_max) {
        throw ConfigError("initial-condition point r0 must lie inside the domain");
    }
    if (ic_weight < 0.0) throw ConfigError("ic_weight must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(occupancy_divisor > 0.0)) {
        throw ConfigError("occupancy_divisor must be > 0");
    }
}

InitialCondition default_ic(const DensityProfile& density, double r_max) {
    InitialCondition ic;
    ic.r0 = 0.8 * r_max;
    ic.y0 = -(density.nuclear_charge - density.n_electrons + 1) / ic.r0;
    return ic;
}

AdamState make_adam_state(const PotentialModel& model) {
    AdamState state;
    state.m = zero_gradients(model).layers;
    state.v = zero_gradients(model).layers;
    return state;
}

std::vector<double> sample_points(double r_min, double r_max, int n,
                                  std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one sample point");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(r_min, r_max);
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (double& r : pts) r = dist(rng);
    return pts;
}

double ec_residual(const PotentialModel& model, const KineticRatioField& q,
                   double r) {
    return q.field.derivative(r, 1) + forward_with_input_grad(model, r).dvalue_dr;
}

double ec_loss(const PotentialModel& model, const KineticRatioField& q,
               const std::vector<double>& batch) {
    if (batch.empty()) throw DomainError("ec_loss: empty batch");
    double sum = 0.0;
    for (double r : batch) {
        const double res = ec_residual(model, q, r);
        sum += res * res;
    }
    return sum / static_cast<double>(batch.size());
}

double ic_loss(const PotentialModel& model, const InitialCondition& ic) {
    const double diff = forward(model, ic.r0) - ic.y0;
    return diff * diff;
}

namespace {

double l2_term(const PotentialModel& model) {
    double sum = 0.0;
    for (const DenseLayer& layer : model.layers) {
        for (double w : layer.w) sum += w * w;
    }
    return sum;
}

}  // namespace

LossBreakdown total_loss(const PotentialModel& model, const KineticRatioField& q,
                         const std::vector<double>& batch,
                         const TrainConfig& config) {
    LossBreakdown loss;
    loss.ec = ec_loss(model, q, batch);
    loss.ic = ic_loss(model, config.ic);
    loss.l2 = l2_term(model);
    loss.total = loss.ec + config.ic_weight * loss.ic + config.l2_weight * loss.l2;
    return loss;
}

void adam_step(AdamState& state, PotentialModel& model, const GradientSet& grads,
               double lr) {
    if (state.m.size() != model.layers.size() ||
        grads.layers.size() != model.layers.size()) {
        throw ValidationError("adam_step: shape mismatch");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(AdamState::kBeta1, state.t);
    const double bc2 = 1.0 - std::pow(AdamState::kBeta2, state.t);
    auto update = [&](std::vector<double>& theta, std::vector<double>& m,
                      std::vector<double>& v, const std::vector<double>& g) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!std::isfinite(g[i])) {
                throw NumericError("non-finite gradient in Adam update");
            }
            m[i] = AdamState::kBeta1 * m[i] + (1.0 - AdamState::kBeta1) * g[i];
            v[i] = AdamState::kBeta2 * v[i] + (1.0 - AdamState::kBeta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            theta[i] -= lr * mhat / (std::sqrt(vhat) + AdamState::kEps);
        }
    };
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        update(model.layers[l].w, state.m[l].w, state.v[l].w, grads.layers[l].w);
        update(model.layers[l].b, state.m[l].b, state.v[l].b, grads.layers[l].b);
    }
}

namespace {

void add_l2_gradient(const PotentialModel& model, double l2_weight,
                     GradientSet& grads) {
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const std::vector<double>& w = model.layers[l].w;
        std::vector<double>& gw = grads.layers[l].w;
        for (std::size_t i = 0; i < w.size(); ++i) {
            gw[i] += 2.0 * l2_weight * w[i];
        }
    }
}

void clip_gradient(GradientSet& grads, double max_norm) {
    double sq = 0.0;
    for (const DenseLayer& g : grads.layers) {
        for (double x : g.w) sq += x * x;
        for (double x : g.b) sq += x * x;
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (DenseLayer& g : grads.layers) {
            for (double& x : g.w) x *= scale;
            for (double& x : g.b) x *= scale;
        }
    }
}

}  // namespace

TrainResult train(const DensityProfile& density, const TrainConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const AmplitudeProfile amp = amplitude(density, config.occupancy_divisor);
    const KineticRatioField q = kinetic_ratio(amp);

    PotentialModel model = init_params(config.seed);
    AdamState adam = make_adam_state(model);
    GradientSet grads = zero_gradients(model);
    ModelWorkspace ws;

    std::vector<double> samples =
        sample_points(config.r_min, config.r_max, config.n_samples, config.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

    TrainReport report;
    report.seed = config.seed;
    report.config = config;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.resample_each_epoch && epoch > 0) {
            samples = sample_points(config.r_min, config.r_max, config.n_samples,
                                    config.seed + 1000003ULL * (epoch + 1));
        }
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop = std::min(
                order.size(), start + static_cast<std::size_t>(config.batch_size));
            const double inv_bs = 1.0 / static_cast<double>(stop - start);

            for (DenseLayer& g : grads.layers) {
                std::fill(g.w.begin(), g.w.end(), 0.0);
                std::fill(g.b.begin(), g.b.end(), 0.0);
            }
            for (std::size_t k = start; k < stop; ++k) {
                const double r = samples[order[k]];
                const double res =
                    q.field.derivative(r, 1) + forward_tangent(model, r, ws).dvalue_dr;
                backprop_from_workspace(model, r, 0.0, 2.0 * res * inv_bs, ws,
                                        grads);
            }
            const double ic_diff = forward(model, config.ic.r0) - config.ic.y0;
            backprop_accumulate(model, config.ic.r0,
                                2.0 * config.ic_weight * ic_diff, 0.0, ws, grads);
            add_l2_gradient(model, config.l2_weight, grads);
            if (config.max_grad_norm) {
                clip_gradient(grads, *config.max_grad_norm);
            }
            try {
                adam_step(adam, model, grads, config.learning_rate);
            } catch (const NumericError& e) {
                throw TrainingError(epoch, std::string(e.what()) + " at epoch " +
                                               std::to_string(epoch));
            }
        }

        const LossBreakdown loss = total_loss(model, q, samples, config);
        if (!std::isfinite(loss.total)) {
            throw TrainingError(epoch, "training diverged at epoch " +
                                           std::to_string(epoch));
        }
        report.trace.push_back(loss);
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return TrainResult{std::move(model), std::move(report)};
}

std::vector<TrainResult> multi_run(const DensityProfile& density,
                                   const TrainConfig& config, int k) {
    if (k < 1) throw ConfigError("multi_run requires k >= 1");
    std::vector<TrainResult> results;
    results.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        TrainConfig run_config = config;
        run_config.seed = config.seed + static_cast<std::uint64_t>(i);
        results.push_back(train(density, run_config));
    }
    return results;
}

}  // namespace ecpnn
