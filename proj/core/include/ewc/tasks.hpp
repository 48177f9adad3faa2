#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ewc/dataset.hpp"
#include "ewc/network.hpp"

namespace ewc {

// A bijection on pixel indices: output pixel j reads input pixel mapping[j].
struct Permutation {
    enum class Kind { Full, Partial };

    std::vector<int> mapping;
    std::uint64_t seed = 0;
    Kind kind = Kind::Full;
    int square_side = 0;  // Partial only

    int size() const { return static_cast<int>(mapping.size()); }
    void validate() const;  // bijection check
    int fixed_points() const;
};

Permutation identity_permutation(int n);

// Uniformly random bijection over 0..n-1 (seeded Fisher-Yates).
Permutation make_permutation(int n, std::uint64_t seed);

// Permutes only the centered square_side x square_side block of a
// side x side grid; every other index is fixed. Centering offset is
// floor((side - square_side) / 2).
Permutation make_partial_permutation(int side, int square_side, std::uint64_t seed);

Permutation inverse(const Permutation& p);

// Reindexes every image row by p; labels untouched.
Dataset apply_permutation(const Dataset& ds, const Permutation& p);

enum class Split { Train, Valid, Test };

// One task of a sequential schedule: a pixel permutation over shared base
// splits. By default rows are permuted on read, so long schedules share one
// copy of the data; materialize_eagerly trades memory for lookup speed.
// Both modes produce identical batches.
class PermutedTask {
public:
    PermutedTask(Permutation permutation, std::shared_ptr<const Dataset> train,
                 std::shared_ptr<const Dataset> valid, std::shared_ptr<const Dataset> test,
                 bool materialize_eagerly = false);

    const Permutation& permutation() const { return permutation_; }
    int count(Split s) const { return base(s).size(); }
    int pixels() const { return base(Split::Train).pixels(); }
    int num_classes() const { return base(Split::Train).num_classes(); }

    // Gathers the given rows of a split and applies the permutation.
    Batch batch(Split s, std::span<const int> rows) const;

    // Whole split, permuted (copies in lazy mode).
    Dataset materialized(Split s) const;

private:
    const Dataset& base(Split s) const;

    Permutation permutation_;
    std::shared_ptr<const Dataset> train_, valid_, test_;
    bool eager_ = false;
    Dataset eager_train_, eager_valid_, eager_test_;
};

// Builds n full-permutation tasks over shared splits; task k's permutation is
// seeded from (seed, k). identity_first makes task 0 the unpermuted base.
std::vector<PermutedTask> make_task_sequence(int n, std::shared_ptr<const Dataset> train,
                                             std::shared_ptr<const Dataset> valid,
                                             std::shared_ptr<const Dataset> test,
                                             std::uint64_t seed, bool identity_first = false);

}  // namespace ewc
