#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ewc/params.hpp"

namespace ewc {

// A labelled image set. Images are flattened row-major, one example per row,
// pixel values in [0,1].
struct Dataset {
    Matrix images;           // n x (rows*cols)
    std::vector<int> labels;
    std::string name;
    int rows = 0;  // pixel grid height
    int cols = 0;  // pixel grid width

    int size() const { return static_cast<int>(images.rows()); }
    int pixels() const { return static_cast<int>(images.cols()); }
    int num_classes() const;

    void validate() const;  // consistent counts, values in [0,1]
};

// Reads an IDX image/label file pair (big-endian headers, magic 2051/2049).
// Files ending in .gz are decompressed transparently. Bytes are scaled to
// [0,1] by division by 255.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Writes a dataset back out as an IDX pair; values are rounded to bytes.
// Paths ending in .gz are compressed.
void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path);

// Seeded shuffle then partition into (train, valid) with
// round(n * valid_fraction) validation rows. Disjoint and exhaustive.
std::pair<Dataset, Dataset> split(const Dataset& ds, double valid_fraction,
                                  std::uint64_t seed);

// First n rows (in a seeded shuffled order) as a new dataset; n >= size
// returns a shuffled copy. Used for desk-scale subsampling.
Dataset subsample(const Dataset& ds, int n, std::uint64_t seed);

}  // namespace ewc
