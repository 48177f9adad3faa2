#include "ewc/network.hpp"

#include <cmath>

#include "ewc/errors.hpp"
#include "ewc/rng.hpp"

namespace ewc {

void Batch::validate(int output_width) const {
    if (inputs.rows() == 0) throw DimensionError("Batch: empty batch");
    if (static_cast<int>(labels.size()) != inputs.rows()) {
        throw DimensionError("Batch: label count does not match input rows");
    }
    for (int y : labels) {
        if (y < 0 || y >= output_width) {
            throw DimensionError("Batch: label out of range for output width");
        }
    }
}

void DropoutConfig::validate() const {
    if (input_keep_deficit < 0.0 || input_keep_deficit >= 1.0 ||
        hidden_keep_deficit < 0.0 || hidden_keep_deficit >= 1.0) {
        throw DimensionError("DropoutConfig: deficits must lie in [0, 1)");
    }
}

DropoutMasks sample_dropout_masks(const NetworkSpec& spec, const DropoutConfig& cfg,
                                  std::uint64_t seed) {
    spec.validate();
    cfg.validate();
    DropoutMasks masks;
    masks.input_keep_prob = 1.0 - cfg.input_keep_deficit;
    masks.hidden_keep_prob = 1.0 - cfg.hidden_keep_deficit;
    Rng rng(derive_seed(seed, "dropout_masks"));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto draw = [&](int n, double keep) {
        Vector m(n);
        for (int i = 0; i < n; ++i) m[i] = uni(rng) < keep ? 1.0 : 0.0;
        return m;
    };
    masks.input_keep = draw(spec.input_width(), masks.input_keep_prob);
    for (int l = 1; l < spec.num_layers(); ++l) {
        masks.hidden_keep.push_back(draw(spec.layer_widths[l], masks.hidden_keep_prob));
    }
    return masks;
}

namespace {

int checked_context(const NetworkSpec& spec, std::optional<int> context) {
    if (!spec.task_conditioned) return 0;
    if (!context) throw ContextError("task-conditioned network requires a context id");
    if (*context < 0 || *context >= spec.num_contexts) {
        throw ContextError("unknown context id " + std::to_string(*context));
    }
    return *context;
}

void check_shapes(const NetworkSpec& spec, const ParamVector& params, const Matrix& inputs,
                  const DropoutMasks* masks) {
    spec.validate();
    const BlockMap expected = make_block_map(spec);
    if (params.size() != expected.total) {
        throw DimensionError("params length does not match network spec");
    }
    if (inputs.cols() != spec.input_width()) {
        throw DimensionError("input width does not match network spec");
    }
    if (masks) {
        if (masks->input_keep.size() != spec.input_width() ||
            static_cast<int>(masks->hidden_keep.size()) != spec.num_layers() - 1) {
            throw DimensionError("dropout masks do not match network spec");
        }
    }
}

// column-wise scale of every row: X <- X * diag(mask/keep)
void apply_unit_mask(Matrix& x, const Vector& keep, double keep_prob) {
    x.array().rowwise() *= (keep.transpose().array() / keep_prob);
}

}  // namespace

namespace detail {

ForwardTrace forward_trace(const NetworkSpec& spec, const ParamVector& params,
                           const Matrix& inputs, std::optional<int> context,
                           const DropoutMasks* masks) {
    check_shapes(spec, params, inputs, masks);
    const int ctx = checked_context(spec, context);
    const int layers = spec.num_layers();

    ForwardTrace trace;
    trace.inputs.reserve(layers);
    trace.pregain.reserve(layers);

    Matrix x = inputs;
    if (masks) apply_unit_mask(x, masks->input_keep, masks->input_keep_prob);

    for (int l = 0; l < layers; ++l) {
        trace.inputs.push_back(x);
        Matrix z = x * params.weights(l).transpose();
        z.rowwise() += params.biases(l, ctx).transpose();
        trace.pregain.push_back(z);

        Matrix y = params.map.layers[l].has_gains
                       ? (z.array().rowwise() * params.gains(l, ctx).transpose().array()).matrix()
                       : std::move(z);
        if (l + 1 < layers) {
            x = y.cwiseMax(0.0);
            if (masks) apply_unit_mask(x, masks->hidden_keep[l], masks->hidden_keep_prob);
        } else {
            trace.logits = std::move(y);
        }
    }
    return trace;
}

void backprop_accumulate(const NetworkSpec& spec, const ParamVector& params,
                         const ForwardTrace& trace, const Matrix& dlogits,
                         std::optional<int> context, const DropoutMasks* masks,
                         bool squared, Vector& accum) {
    const int ctx = checked_context(spec, context);
    const int layers = spec.num_layers();
    if (accum.size() != params.values.size()) {
        throw DimensionError("gradient accumulator length mismatch");
    }

    Matrix d_y = dlogits;  // dL/dy for the layer being processed
    for (int l = layers - 1; l >= 0; --l) {
        const LayerBlocks& blk = params.map.layers[l];
        const Matrix& x = trace.inputs[l];
        const Matrix& z = trace.pregain[l];

        Matrix d_z = blk.has_gains
                         ? (d_y.array().rowwise() * params.gains(l, ctx).transpose().array()).matrix()
                         : d_y;

        const std::size_t ctx_off = static_cast<std::size_t>(ctx) * blk.out;
        if (squared) {
            // sum_n (d_z[n,i] * x[n,j])^2 = (d_z .^2)^T (x .^2), exact per-example squares
            WeightView(accum.data() + blk.weights, blk.out, blk.in).noalias() +=
                (d_z.array().square().matrix().transpose() * x.array().square().matrix());
            Eigen::Map<Vector>(accum.data() + blk.biases + ctx_off, blk.out) +=
                d_z.array().square().colwise().sum().matrix().transpose();
            if (blk.has_gains) {
                Eigen::Map<Vector>(accum.data() + blk.gains + ctx_off, blk.out) +=
                    (d_y.array() * z.array()).square().colwise().sum().matrix().transpose();
            }
        } else {
            WeightView(accum.data() + blk.weights, blk.out, blk.in).noalias() +=
                d_z.transpose() * x;
            Eigen::Map<Vector>(accum.data() + blk.biases + ctx_off, blk.out) +=
                d_z.colwise().sum().transpose();
            if (blk.has_gains) {
                Eigen::Map<Vector>(accum.data() + blk.gains + ctx_off, blk.out) +=
                    (d_y.array() * z.array()).colwise().sum().matrix().transpose();
            }
        }

        if (l > 0) {
            Matrix d_x = d_z * params.weights(l);
            if (masks) {
                apply_unit_mask(d_x, masks->hidden_keep[l - 1], masks->hidden_keep_prob);
            }
            // ReLU was applied to y_{l-1} = z_{l-1} * g_{l-1}
            const LayerBlocks& prev = params.map.layers[l - 1];
            Matrix y_prev = prev.has_gains
                                ? (trace.pregain[l - 1].array().rowwise() *
                                   params.gains(l - 1, ctx).transpose().array()).matrix()
                                : trace.pregain[l - 1];
            d_y = (y_prev.array() > 0.0).select(d_x, 0.0);
        }
    }
}

}  // namespace detail

Matrix forward(const NetworkSpec& spec, const ParamVector& params, const Matrix& inputs,
               std::optional<int> context, const DropoutMasks* masks) {
    return detail::forward_trace(spec, params, inputs, context, masks).logits;
}

LossGrad loss_and_grad(const NetworkSpec& spec, const ParamVector& params, const Batch& batch,
                       std::optional<int> context, const DropoutMasks* masks,
                       const PenaltySet* penalties) {
    batch.validate(spec.output_width());
    detail::ForwardTrace trace =
        detail::forward_trace(spec, params, batch.inputs, context, masks);

    const int n = batch.size();
    const Matrix& logits = trace.logits;

    // log-sum-exp with max subtraction
    const Vector row_max = logits.rowwise().maxCoeff();
    const Matrix shifted = logits.colwise() - row_max;
    const Vector sum_exp = shifted.array().exp().rowwise().sum();
    const Vector lse = row_max.array() + sum_exp.array().log();

    double data_loss = 0.0;
    for (int i = 0; i < n; ++i) data_loss += lse[i] - logits(i, batch.labels[i]);
    data_loss /= n;

    // dL/dlogits = (softmax - onehot) / n
    Matrix dlogits = (shifted.array().exp().colwise() / sum_exp.array()).matrix();
    for (int i = 0; i < n; ++i) dlogits(i, batch.labels[i]) -= 1.0;
    dlogits /= static_cast<double>(n);

    LossGrad out;
    out.data_loss = data_loss;
    out.grad.map = params.map;
    out.grad.values = Vector::Zero(params.values.size());
    detail::backprop_accumulate(spec, params, trace, dlogits, context, masks,
                                /*squared=*/false, out.grad.values);

    out.loss = data_loss;
    if (penalties && !penalties->empty()) {
        auto [pvalue, pgrad] = penalties->value_and_grad(params);
        out.loss += pvalue;
        out.grad.values += pgrad;
    }
    if (!std::isfinite(out.loss)) {
        throw NumericsError("non-finite loss");
    }
    return out;
}

}  // namespace ewc
