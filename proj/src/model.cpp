#include "ecpnn/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace ecpnn {

int PotentialModel::residual_layer() const {
    if (!residual) return -1;
    // skip from the second hidden output into the third hidden output
    if (layer_sizes.size() < 5) return -1;
    if (layer_sizes[2] != layer_sizes[3]) return -1;
    return 2;
}

PotentialModel init_params(std::uint64_t seed,
                           const std::vector<int>& layer_sizes) {
    if (layer_sizes.size() < 2) {
        throw ValidationError("need at least two layer sizes");
    }
    if (layer_sizes.front() != 1 || layer_sizes.back() != 1) {
        throw ValidationError("model maps a scalar radius to a scalar potential");
    }
    PotentialModel model;
    model.layer_sizes = layer_sizes;
    model.seed = seed;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        DenseLayer layer;
        layer.n_in = layer_sizes[l];
        layer.n_out = layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / (layer.n_in + layer.n_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        layer.w.resize(static_cast<std::size_t>(layer.n_out) * layer.n_in);
        for (double& x : layer.w) x = dist(rng);
        layer.b.assign(layer.n_out, 0.0);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

GradientSet zero_gradients(const PotentialModel& model) {
    GradientSet g;
    for (const DenseLayer& layer : model.layers) {
        DenseLayer zl;
        zl.n_in = layer.n_in;
        zl.n_out = layer.n_out;
        zl.w.assign(layer.w.size(), 0.0);
        zl.b.assign(layer.b.size(), 0.0);
        g.layers.push_back(std::move(zl));
    }
    return g;
}

namespace {

void resize_workspace(const PotentialModel& model, ModelWorkspace& ws) {
    const std::size_t n_layers = model.layers.size();
    auto fit = [&](std::vector<std::vector<double>>& v) {
        v.resize(n_layers);
        for (std::size_t l = 0; l < n_layers; ++l) {
            v[l].resize(static_cast<std::size_t>(model.layers[l].n_out));
        }
    };
    fit(ws.z);
    fit(ws.zt);
    fit(ws.a);
    fit(ws.s);
    fit(ws.h);
    fit(ws.ht);
    fit(ws.az);
    fit(ws.azt);
    fit(ws.ah);
    fit(ws.aht);
}

}  // namespace

ValueAndGrad forward_tangent(const PotentialModel& model, double r,
                             ModelWorkspace& ws) {
    if (!std::isfinite(r)) {
        throw NumericError("model input must be finite");
    }
    resize_workspace(model, ws);
    const std::size_t n_layers = model.layers.size();
    const int res_layer = model.residual_layer();

    for (std::size_t l = 0; l < n_layers; ++l) {
        const DenseLayer& layer = model.layers[l];
        const int n_in = layer.n_in;
        const int n_out = layer.n_out;
        const double* __restrict__ x = (l == 0) ? &r : ws.h[l - 1].data();
        const double* __restrict__ xt = (l == 0) ? nullptr : ws.ht[l - 1].data();
        for (int i = 0; i < n_out; ++i) {
            const double* __restrict__ row =
                layer.w.data() + static_cast<std::size_t>(i) * n_in;
            double z = layer.b[i];
            double zt = 0.0;
            if (l == 0) {
                z += row[0] * r;
                zt = row[0];  // tangent of the input is 1
            } else {
                for (int j = 0; j < n_in; ++j) {
                    z += row[j] * x[j];
                    zt += row[j] * xt[j];
                }
            }
            ws.z[l][i] = z;
            ws.zt[l][i] = zt;
        }
        const bool hidden = (l + 1 < n_layers);
        for (int i = 0; i < n_out; ++i) {
            double a, s;
            if (hidden) {
                a = std::tanh(ws.z[l][i]);
                s = 1.0 - a * a;
            } else {
                a = ws.z[l][i];
                s = 1.0;
            }
            ws.a[l][i] = a;
            ws.s[l][i] = s;
            ws.h[l][i] = a;
            ws.ht[l][i] = s * ws.zt[l][i];
        }
        if (static_cast<int>(l) == res_layer) {
            for (int i = 0; i < n_out; ++i) {
                ws.h[l][i] += ws.h[l - 1][i];
                ws.ht[l][i] += ws.ht[l - 1][i];
            }
        }
    }
    const double value = ws.h[n_layers - 1][0];
    const double dvalue = ws.ht[n_layers - 1][0];
    if (!std::isfinite(value) || !std::isfinite(dvalue)) {
        throw NumericError("non-finite model output");
    }
    return ValueAndGrad{value, dvalue};
}

double forward(const PotentialModel& model, double r) {
    thread_local ModelWorkspace ws;
    return forward_tangent(model, r, ws).value;
}

ValueAndGrad forward_with_input_grad(const PotentialModel& model, double r) {
    thread_local ModelWorkspace ws;
    return forward_tangent(model, r, ws);
}

void backprop_accumulate(const PotentialModel& model, double r,
                         double adjoint_value, double adjoint_input_grad,
                         ModelWorkspace& ws, GradientSet& grads) {
    forward_tangent(model, r, ws);
    backprop_from_workspace(model, r, adjoint_value, adjoint_input_grad, ws,
                            grads);
}

void backprop_from_workspace(const PotentialModel& model, double r,
                             double adjoint_value, double adjoint_input_grad,
                             ModelWorkspace& ws, GradientSet& grads) {
    if (!std::isfinite(adjoint_value) || !std::isfinite(adjoint_input_grad)) {
        throw NumericError("non-finite adjoint");
    }
    const std::size_t n_layers = model.layers.size();
    const int res_layer = model.residual_layer();

    for (std::size_t l = 0; l < n_layers; ++l) {
        std::fill(ws.ah[l].begin(), ws.ah[l].end(), 0.0);
        std::fill(ws.aht[l].begin(), ws.aht[l].end(), 0.0);
    }
    ws.ah[n_layers - 1][0] = adjoint_value;
    ws.aht[n_layers - 1][0] = adjoint_input_grad;

    for (std::size_t li = n_layers; li-- > 0;) {
        const DenseLayer& layer = model.layers[li];
        DenseLayer& g = grads.layers[li];
        const int n_in = layer.n_in;
        const int n_out = layer.n_out;

        // activation backward: adjoints wrt h -> adjoints wrt z
        for (int i = 0; i < n_out; ++i) {
            const double s = ws.s[li][i];
            const double ah = ws.ah[li][i];
            const double aht = ws.aht[li][i];
            if (li + 1 < n_layers) {
                // h = tanh(z), ht = s * zt with s = 1 - h^2
                ws.az[li][i] =
                    s * ah - 2.0 * ws.a[li][i] * s * ws.zt[li][i] * aht;
                ws.azt[li][i] = s * aht;
            } else {
                ws.az[li][i] = ah;
                ws.azt[li][i] = aht;
            }
        }

        // dense backward
        if (li == 0) {
            for (int i = 0; i < n_out; ++i) {
                // input tangent is 1, so the tangent path contributes
                // azt directly to the weight gradient
                g.w[i] += ws.az[0][i] * r + ws.azt[0][i];
                g.b[i] += ws.az[0][i];
            }
        } else {
            const double* __restrict__ x = ws.h[li - 1].data();
            const double* __restrict__ xt = ws.ht[li - 1].data();
            double* __restrict__ axp = ws.ah[li - 1].data();
            double* __restrict__ axtp = ws.aht[li - 1].data();
            for (int i = 0; i < n_out; ++i) {
                const double az = ws.az[li][i];
                const double azt = ws.azt[li][i];
                const double* __restrict__ row =
                    layer.w.data() + static_cast<std::size_t>(i) * n_in;
                double* __restrict__ grow =
                    g.w.data() + static_cast<std::size_t>(i) * n_in;
                for (int j = 0; j < n_in; ++j) {
                    grow[j] += az * x[j] + azt * xt[j];
                    axp[j] += row[j] * az;
                    axtp[j] += row[j] * azt;
                }
                g.b[i] += az;
            }
            if (static_cast<int>(li) == res_layer) {
                // skip connection passes the output adjoints straight through
                for (int i = 0; i < n_out; ++i) {
                    ws.ah[li - 1][i] += ws.ah[li][i];
                    ws.aht[li - 1][i] += ws.aht[li][i];
                }
            }
        }
    }
}

GradientSet backprop(const PotentialModel& model, double r, double adjoint_value,
                     double adjoint_input_grad) {
    GradientSet grads = zero_gradients(model);
    thread_local ModelWorkspace ws;
    backprop_accumulate(model, r, adjoint_value, adjoint_input_grad, ws, grads);
    return grads;
}

void save_model(const PotentialModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write model file: " + path);
    }
    out << "ECPNN001\n";
    out << "seed " << model.seed << "\n";
    out << "residual " << (model.residual ? 1 : 0) << "\n";
    out << "layer_sizes";
    for (int s : model.layer_sizes) out << " " << s;
    out << "\n";
    char buf[64];
    for (const DenseLayer& layer : model.layers) {
        for (double v : layer.w) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << "\n";
        }
        for (double v : layer.b) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << buf << "\n";
        }
    }
}

PotentialModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read model file: " + path);
    }
    std::string magic;
    std::getline(in, magic);
    if (magic != "ECPNN001") {
        throw ParseError(path + ": bad magic, expected ECPNN001");
    }
    PotentialModel model;
    std::string key;
    in >> key >> model.seed;
    if (key != "seed") throw ParseError(path + ": expected 'seed'");
    int res = 0;
    in >> key >> res;
    if (key != "residual") throw ParseError(path + ": expected 'residual'");
    model.residual = (res != 0);
    in >> key;
    if (key != "layer_sizes") throw ParseError(path + ": expected 'layer_sizes'");
    std::string rest;
    std::getline(in, rest);
    std::istringstream iss(rest);
    model.layer_sizes.clear();
    int s;
    while (iss >> s) model.layer_sizes.push_back(s);
    if (model.layer_sizes.size() < 2) {
        throw ParseError(path + ": bad layer_sizes");
    }
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        DenseLayer layer;
        layer.n_in = model.layer_sizes[l];
        layer.n_out = model.layer_sizes[l + 1];
        layer.w.resize(static_cast<std::size_t>(layer.n_out) * layer.n_in);
        layer.b.resize(layer.n_out);
        for (double& v : layer.w) {
            if (!(in >> v)) throw ParseError(path + ": truncated weights");
        }
        for (double& v : layer.b) {
            if (!(in >> v)) throw ParseError(path + ": truncated biases");
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}

}  // namespace ecpnn
