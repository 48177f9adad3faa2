#include "ewc/penalty.hpp"

#include "ewc/errors.hpp"

namespace ewc {

void QuadraticPenalty::validate() const {
    if (anchor.values.size() != coefficients.size()) {
        throw DimensionError("QuadraticPenalty: anchor and coefficient lengths differ");
    }
    if ((coefficients.array() < 0.0).any()) {
        throw DimensionError("QuadraticPenalty: coefficients must be nonnegative");
    }
}

double QuadraticPenalty::value_at(const ParamVector& params) const {
    if (params.values.size() != anchor.values.size()) {
        throw DimensionError("QuadraticPenalty: parameter length mismatch");
    }
    const Vector d = params.values - anchor.values;
    return 0.5 * (coefficients.array() * d.array().square()).sum();
}

void QuadraticPenalty::accumulate_grad(const ParamVector& params, Vector& grad_out) const {
    if (params.values.size() != anchor.values.size() ||
        grad_out.size() != anchor.values.size()) {
        throw DimensionError("QuadraticPenalty: parameter length mismatch");
    }
    grad_out.array() += coefficients.array() * (params.values - anchor.values).array();
}

void PenaltySet::add(QuadraticPenalty penalty) {
    penalty.validate();
    if (!penalties_.empty() &&
        penalty.coefficients.size() != penalties_.front().coefficients.size()) {
        throw DimensionError("PenaltySet: penalty length mismatch");
    }
    penalties_.push_back(std::move(penalty));
}

void PenaltySet::merge_all() {
    if (penalties_.size() < 2) return;
    QuadraticPenalty merged = penalties_.front();
    for (std::size_t i = 1; i < penalties_.size(); ++i) {
        merged = merge_penalties(merged, penalties_[i]);
    }
    penalties_.assign(1, std::move(merged));
}

std::pair<double, Vector> PenaltySet::value_and_grad(const ParamVector& params) const {
    double value = 0.0;
    Vector grad = Vector::Zero(params.values.size());
    for (const QuadraticPenalty& p : penalties_) {
        value += p.value_at(params);
        p.accumulate_grad(params, grad);
    }
    return {value, std::move(grad)};
}

std::pair<double, ParamVector> penalty_value_and_grad(const PenaltySet& pset,
                                                      const ParamVector& params) {
    auto [value, grad] = pset.value_and_grad(params);
    ParamVector out;
    out.map = params.map;
    out.values = std::move(grad);
    return {value, std::move(out)};
}

QuadraticPenalty merge_penalties(const QuadraticPenalty& p1, const QuadraticPenalty& p2) {
    p1.validate();
    p2.validate();
    if (p1.coefficients.size() != p2.coefficients.size()) {
        throw DimensionError("merge_penalties: length mismatch");
    }
    QuadraticPenalty merged;
    merged.anchor = p1.anchor;
    merged.coefficients = p1.coefficients + p2.coefficients;
    for (Eigen::Index i = 0; i < merged.coefficients.size(); ++i) {
        const double c = merged.coefficients[i];
        // Where both coefficients vanish the anchor is irrelevant; keep p1's.
        merged.anchor.values[i] =
            c > 0.0 ? (p1.coefficients[i] * p1.anchor.values[i] +
                       p2.coefficients[i] * p2.anchor.values[i]) / c
                    : p1.anchor.values[i];
    }
    return merged;
}

}  // namespace ewc
