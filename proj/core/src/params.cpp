#include "ewc/params.hpp"

#include <cmath>

#include "ewc/errors.hpp"
#include "ewc/rng.hpp"

namespace ewc {

void NetworkSpec::validate() const {
    if (layer_widths.size() < 2) {
        throw DimensionError("NetworkSpec: need at least input and output widths");
    }
    for (int w : layer_widths) {
        if (w < 1) throw DimensionError("NetworkSpec: all layer widths must be >= 1");
    }
    if (num_contexts < 1) {
        throw DimensionError("NetworkSpec: num_contexts must be >= 1");
    }
}

NetworkSpec make_mlp_spec(int input_width, int hidden_layers, int hidden_width, int classes) {
    NetworkSpec spec;
    spec.layer_widths.push_back(input_width);
    for (int i = 0; i < hidden_layers; ++i) spec.layer_widths.push_back(hidden_width);
    spec.layer_widths.push_back(classes);
    spec.validate();
    return spec;
}

bool BlockMap::operator==(const BlockMap& other) const {
    if (total != other.total || layers.size() != other.layers.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerBlocks& a = layers[i];
        const LayerBlocks& b = other.layers[i];
        if (a.in != b.in || a.out != b.out || a.weights != b.weights || a.biases != b.biases ||
            a.gains != b.gains || a.has_gains != b.has_gains || a.contexts != b.contexts) {
            return false;
        }
    }
    return true;
}

BlockMap make_block_map(const NetworkSpec& spec) {
    spec.validate();
    BlockMap map;
    std::size_t offset = 0;
    for (int l = 0; l < spec.num_layers(); ++l) {
        LayerBlocks b;
        b.in = spec.layer_widths[l];
        b.out = spec.layer_widths[l + 1];
        b.contexts = spec.task_conditioned ? spec.num_contexts : 1;
        b.has_gains = spec.task_conditioned;
        b.weights = offset;
        offset += static_cast<std::size_t>(b.out) * b.in;
        b.biases = offset;
        offset += static_cast<std::size_t>(b.contexts) * b.out;
        if (b.has_gains) {
            b.gains = offset;
            offset += static_cast<std::size_t>(b.contexts) * b.out;
        }
        map.layers.push_back(b);
    }
    map.total = offset;
    return map;
}

ParamVector zeros_like(const NetworkSpec& spec) {
    ParamVector p;
    p.map = make_block_map(spec);
    p.values = Vector::Zero(static_cast<Eigen::Index>(p.map.total));
    return p;
}

ParamVector init_params(const NetworkSpec& spec, std::uint64_t seed) {
    ParamVector p = zeros_like(spec);
    Rng rng(derive_seed(seed, "init_params"));
    for (int l = 0; l < spec.num_layers(); ++l) {
        const LayerBlocks& b = p.map.layers[l];
        const double sigma = 1.0 / std::sqrt(static_cast<double>(b.in));
        std::uniform_real_distribution<double> uni(-sigma, sigma);
        double* w = p.values.data() + b.weights;
        for (std::size_t i = 0; i < static_cast<std::size_t>(b.out) * b.in; ++i) w[i] = uni(rng);
        if (b.has_gains) {
            double* g = p.values.data() + b.gains;
            for (std::size_t i = 0; i < static_cast<std::size_t>(b.contexts) * b.out; ++i) g[i] = 1.0;
        }
    }
    return p;
}

}  // namespace ewc
