#pragma once

#include <vector>

#include "ewc/params.hpp"

namespace ewc {

// Quadratic penalty (c_i/2)(theta_i - a_i)^2 summed over parameters.
// Coefficients already include the importance multiplier, i.e. lambda * F_i.
struct QuadraticPenalty {
    ParamVector anchor;
    Vector coefficients;

    void validate() const;  // nonnegative coefficients, matching lengths

    double value_at(const ParamVector& params) const;
    // Adds c_i (theta_i - a_i) into grad_out.
    void accumulate_grad(const ParamVector& params, Vector& grad_out) const;
};

// One penalty per consolidated task; the gradient of the set is the sum of
// the members' gradients. merge() collapses members into one equivalent
// quadratic when memory matters.
class PenaltySet {
public:
    PenaltySet() = default;

    void add(QuadraticPenalty penalty);
    void clear() { penalties_.clear(); }
    bool empty() const { return penalties_.empty(); }
    std::size_t size() const { return penalties_.size(); }
    const QuadraticPenalty& at(std::size_t i) const { return penalties_.at(i); }

    // Collapse all members into a single gradient-equivalent penalty.
    void merge_all();

    std::pair<double, Vector> value_and_grad(const ParamVector& params) const;

private:
    std::vector<QuadraticPenalty> penalties_;
};

// (value, grad) of the whole set at params. grad is aligned with params.
std::pair<double, ParamVector> penalty_value_and_grad(const PenaltySet& pset,
                                                      const ParamVector& params);

// Sum of two quadratics as one quadratic: coefficients add; anchors combine
// as the coefficient-weighted mean. Gradients agree with the separate pair
// everywhere; values may differ by a theta-independent constant.
QuadraticPenalty merge_penalties(const QuadraticPenalty& p1, const QuadraticPenalty& p2);

}  // namespace ewc
