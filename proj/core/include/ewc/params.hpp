#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ewc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Weight matrices are stored row-major inside the flat parameter vector so a
// layer's block reads as out x in.
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WeightView = Eigen::Map<RowMajorMatrix>;
using ConstWeightView = Eigen::Map<const RowMajorMatrix>;

enum class Activation { RectifiedLinear };

// Architecture of a fully connected classifier.
//
// When task_conditioned is set, every layer carries per-context bias and gain
// vectors (y = (W x + b^c) * g^c) and num_contexts slots are allocated in the
// parameter vector; otherwise each layer has a single shared bias.
struct NetworkSpec {
    std::vector<int> layer_widths;  // input, hidden..., output
    Activation activation = Activation::RectifiedLinear;
    bool task_conditioned = false;
    int num_contexts = 1;

    int input_width() const { return layer_widths.front(); }
    int output_width() const { return layer_widths.back(); }
    int num_layers() const { return static_cast<int>(layer_widths.size()) - 1; }

    void validate() const;  // throws DimensionError on malformed specs
};

// Convenience builder: input -> hidden_layers x hidden_width -> classes.
NetworkSpec make_mlp_spec(int input_width, int hidden_layers, int hidden_width, int classes);

// Index layout of one linear layer inside the flat parameter array.
// Blocks are contiguous per layer: weights, then biases, then gains.
struct LayerBlocks {
    int in = 0;
    int out = 0;
    std::size_t weights = 0;  // offset of W, out*in values, row-major
    std::size_t biases = 0;   // offset of bias block, contexts*out values
    std::size_t gains = 0;    // offset of gain block, contexts*out values (task-conditioned only)
    bool has_gains = false;
    int contexts = 1;

    std::size_t begin() const { return weights; }
    std::size_t end() const {
        return has_gains ? gains + static_cast<std::size_t>(contexts) * out
                         : biases + static_cast<std::size_t>(contexts) * out;
    }
    std::size_t size() const { return end() - begin(); }
};

struct BlockMap {
    std::vector<LayerBlocks> layers;
    std::size_t total = 0;

    bool operator==(const BlockMap&) const;
};

BlockMap make_block_map(const NetworkSpec& spec);

// Flat vector of every trainable parameter plus its block layout.
struct ParamVector {
    Vector values;
    BlockMap map;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }

    ConstWeightView weights(int layer) const {
        const LayerBlocks& b = map.layers[layer];
        return ConstWeightView(values.data() + b.weights, b.out, b.in);
    }
    WeightView weights(int layer) {
        LayerBlocks& b = map.layers[layer];
        return WeightView(values.data() + b.weights, b.out, b.in);
    }
    Eigen::Map<const Vector> biases(int layer, int context = 0) const {
        const LayerBlocks& b = map.layers[layer];
        return {values.data() + b.biases + static_cast<std::size_t>(context) * b.out, b.out};
    }
    Eigen::Map<Vector> biases(int layer, int context = 0) {
        LayerBlocks& b = map.layers[layer];
        return {values.data() + b.biases + static_cast<std::size_t>(context) * b.out, b.out};
    }
    Eigen::Map<const Vector> gains(int layer, int context = 0) const {
        const LayerBlocks& b = map.layers[layer];
        return {values.data() + b.gains + static_cast<std::size_t>(context) * b.out, b.out};
    }
    Eigen::Map<Vector> gains(int layer, int context = 0) {
        LayerBlocks& b = map.layers[layer];
        return {values.data() + b.gains + static_cast<std::size_t>(context) * b.out, b.out};
    }

    bool all_finite() const { return values.allFinite(); }
};

// Zero-filled parameters with the layout implied by spec.
ParamVector zeros_like(const NetworkSpec& spec);

// Weights uniform in [-s, +s] with s = 1/sqrt(fan-in); biases 0, gains 1.
// Deterministic for a fixed seed.
ParamVector init_params(const NetworkSpec& spec, std::uint64_t seed);

}  // namespace ewc
