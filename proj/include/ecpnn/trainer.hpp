#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecpnn/grid_density.hpp"
#include "ecpnn/model.hpp"
#include "ecpnn/spline.hpp"

namespace ecpnn {

struct InitialCondition {
    double r0 = 8.0;
    double y0 = -0.125;
};

struct TrainConfig {
    int n_samples = 5000;
    int epochs = 500;
    double learning_rate = 0.001;
    double l2_weight = 0.0001;
    double r_min = 0.1;
    double r_max = 10.0;
    InitialCondition ic;
    double ic_weight = 1.0;
    std::uint64_t seed = 0;
    int batch_size = 256;
    double occupancy_divisor = 1.0;
    bool resample_each_epoch = false;
    std::optional<double> max_grad_norm;  // gradient clipping off by default

    void validate() const;
};

/// Asymptotic ionic Coulomb tail anchor: y0 = -(Z - N + 1)/r0 at
/// r0 = 0.8 * r_max.
InitialCondition default_ic(const DensityProfile& density, double r_max);

/// Canonical Adam accumulators (beta1=0.9, beta2=0.999, eps=1e-8).
struct AdamState {
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    std::vector<DenseLayer> m;  // first moments
    std::vector<DenseLayer> v;  // second moments
    long t = 0;
};

AdamState make_adam_state(const PotentialModel& model);

struct LossBreakdown {
    double total = 0.0;
    double ec = 0.0;
    double ic = 0.0;
    double l2 = 0.0;
};

struct TrainReport {
    std::vector<LossBreakdown> trace;  // one entry per epoch
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    TrainConfig config;
};

/// i.i.d. uniform radii on [r_min, r_max], fixed once before training.
std::vector<double> sample_points(double r_min, double r_max, int n,
                                  std::uint64_t seed);

/// Energy-conservation residual d/dr [ q(r) + U_theta(r) ].
double ec_residual(const PotentialModel& model, const KineticRatioField& q,
                   double r);

/// Mean of squared residuals over the batch.
double ec_loss(const PotentialModel& model, const KineticRatioField& q,
               const std::vector<double>& batch);

double ic_loss(const PotentialModel& model, const InitialCondition& ic);

/// total = ec + ic_weight * ic + l2_weight * sum(weights^2);
/// biases are excluded from the L2 term.
LossBreakdown total_loss(const PotentialModel& model, const KineticRatioField& q,
                         const std::vector<double>& batch,
                         const TrainConfig& config);

/// One canonical Adam update with bias correction; increments t.
void adam_step(AdamState& state, PotentialModel& model, const GradientSet& grads,
               double lr);

struct TrainResult {
    PotentialModel model;
    TrainReport report;
};

/// Thrown when the loss goes non-finite; carries the epoch index.
struct TrainingError : NumericError {
    int epoch;
    TrainingError(int epoch_idx, const std::string& msg)
        : NumericError(msg), epoch(epoch_idx) {}
};

TrainResult train(const DensityProfile& density, const TrainConfig& config);

/// k independent runs with seeds seed, seed+1, ...
std::vector<TrainResult> multi_run(const DensityProfile& density,
                                   const TrainConfig& config, int k);

}  // namespace ecpnn
