#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecpnn/errors.hpp"

namespace ecpnn {

/// Dense layer, row-major weights (rows = outputs, cols = inputs).
struct DenseLayer {
    int n_in = 0;
    int n_out = 0;
    std::vector<double> w;  // n_out * n_in
    std::vector<double> b;  // n_out
};

/// The learned potential U_theta: a 1 -> 64 -> 128 -> 128 -> 1 tanh
/// network with the second hidden activation added to the third
/// (post-activation residual). Immutable during evaluation.
struct PotentialModel {
    std::vector<int> layer_sizes{1, 64, 128, 128, 1};
    std::vector<DenseLayer> layers;
    bool residual = true;
    std::uint64_t seed = 0;

    /// Index of the hidden layer whose output receives the skip, or -1.
    int residual_layer() const;
};

/// Shape-congruent with the parameters of a PotentialModel.
struct GradientSet {
    std::vector<DenseLayer> layers;
};

/// Fan-based uniform init (+-sqrt(6/(fan_in+fan_out))), zero biases,
/// reproducible from the seed.
PotentialModel init_params(std::uint64_t seed,
                           const std::vector<int>& layer_sizes = {1, 64, 128, 128, 1});

GradientSet zero_gradients(const PotentialModel& model);

double forward(const PotentialModel& model, double r);

struct ValueAndGrad {
    double value;
    double dvalue_dr;
};

/// Forward pass carrying a forward-mode tangent in r. The value
/// component equals forward() exactly.
ValueAndGrad forward_with_input_grad(const PotentialModel& model, double r);

/// Gradient of adjoint_value * U(r) + adjoint_input_grad * U'(r) with
/// respect to the parameters; reverse pass over the tangent-augmented
/// forward computation.
GradientSet backprop(const PotentialModel& model, double r, double adjoint_value,
                     double adjoint_input_grad);

/// Scratch buffers reused across backprop calls inside the trainer.
struct ModelWorkspace {
    std::vector<std::vector<double>> z, zt;    // pre-activations, tangents
    std::vector<std::vector<double>> a, s;     // pure activations, 1 - a^2
    std::vector<std::vector<double>> h, ht;    // effective outputs (with skip)
    std::vector<std::vector<double>> az, azt;  // adjoints wrt z
    std::vector<std::vector<double>> ah, aht;  // adjoints wrt h
};

ValueAndGrad forward_tangent(const PotentialModel& model, double r,
                             ModelWorkspace& ws);

/// Accumulating variant used by the training loop; grads must be
/// shape-congruent (see zero_gradients).
void backprop_accumulate(const PotentialModel& model, double r,
                         double adjoint_value, double adjoint_input_grad,
                         ModelWorkspace& ws, GradientSet& grads);

/// As backprop_accumulate, but reuses the forward_tangent state already
/// present in ws for the same (model, r).
void backprop_from_workspace(const PotentialModel& model, double r,
                             double adjoint_value, double adjoint_input_grad,
                             ModelWorkspace& ws, GradientSet& grads);

/// Text persistence, magic "ECPNN001", 17 significant digits;
/// round-trip is bit-exact.
void save_model(const PotentialModel& model, const std::string& path);
PotentialModel load_model(const std::string& path);

}  // namespace ecpnn
