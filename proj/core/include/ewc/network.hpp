#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ewc/params.hpp"
#include "ewc/penalty.hpp"

namespace ewc {

// One minibatch: features in [0,1], one row per example, integer class labels.
struct Batch {
    Matrix inputs;
    std::vector<int> labels;

    int size() const { return static_cast<int>(inputs.rows()); }
    void validate(int output_width) const;
};

// Drop probabilities for input and hidden units. Both in [0, 1).
struct DropoutConfig {
    double input_keep_deficit = 0.0;
    double hidden_keep_deficit = 0.0;

    void validate() const;
};

// Per-unit keep indicators (1 kept, 0 dropped), one vector for the input
// layer and one per hidden layer. Kept units are rescaled by 1/keep
// probability at train time (inverted dropout), so evaluation needs nothing.
struct DropoutMasks {
    Vector input_keep;
    std::vector<Vector> hidden_keep;
    double input_keep_prob = 1.0;
    double hidden_keep_prob = 1.0;
};

DropoutMasks sample_dropout_masks(const NetworkSpec& spec, const DropoutConfig& cfg,
                                  std::uint64_t seed);

// Pre-softmax logits, one row per example. Pure in all arguments.
Matrix forward(const NetworkSpec& spec, const ParamVector& params, const Matrix& inputs,
               std::optional<int> context = std::nullopt,
               const DropoutMasks* masks = nullptr);

struct LossGrad {
    double loss = 0.0;       // data loss plus penalty term
    double data_loss = 0.0;  // mean softmax cross-entropy alone
    ParamVector grad;        // exact gradient of `loss`
};

// Mean softmax cross-entropy over the batch plus the penalty set's value,
// with the exact analytic gradient of that total.
LossGrad loss_and_grad(const NetworkSpec& spec, const ParamVector& params, const Batch& batch,
                       std::optional<int> context = std::nullopt,
                       const DropoutMasks* masks = nullptr,
                       const PenaltySet* penalties = nullptr);

namespace detail {

// Forward pass keeping per-layer intermediates for backprop.
struct ForwardTrace {
    std::vector<Matrix> inputs;   // x_l: the (possibly dropout-scaled) input to layer l
    std::vector<Matrix> pregain;  // z_l = x_l W^T + b^c
    Matrix logits;
};

ForwardTrace forward_trace(const NetworkSpec& spec, const ParamVector& params,
                           const Matrix& inputs, std::optional<int> context,
                           const DropoutMasks* masks);

// Backprop from dL/dlogits. squared=false accumulates the batch gradient;
// squared=true accumulates the sum over examples of squared per-example
// gradients (the diagonal-Fisher building block).
void backprop_accumulate(const NetworkSpec& spec, const ParamVector& params,
                         const ForwardTrace& trace, const Matrix& dlogits,
                         std::optional<int> context, const DropoutMasks* masks,
                         bool squared, Vector& accum);

}  // namespace detail

}  // namespace ewc
