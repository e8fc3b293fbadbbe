#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shapnn/errors.hpp"

namespace shapnn {

/// Dense classification dataset: N rows of D features plus integer labels
/// in [0, classes). Image features are scaled into [0, 1].
struct Dataset {
    int dims = 0;
    int classes = 0;
    std::vector<double> features; // row-major, size() == rows * dims
    std::vector<int> labels;

    int size() const { return static_cast<int>(labels.size()); }
    const double* row(int i) const { return features.data() + static_cast<std::size_t>(i) * dims; }
};

struct Splits {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// MNIST-style IDX pair: big-endian headers, magic 0x00000803 for images
/// and 0x00000801 for labels. Pixels are scaled by 1/255.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Seeded Gaussian clusters, one per class, centred on scaled one-hot
/// simplex corners with a small seeded jitter. Classes are balanced.
Dataset synth_blobs(int classes, int dims, int per_class, double spread, std::uint64_t seed);

/// Rows are `label,f0,f1,...`; all rows must have the same width.
Dataset load_csv(const std::string& path, bool has_header = false);

/// Seeded permutation partition into train/validation/test. Fractions must
/// be positive (every part non-empty) and sum to 1.
Splits split(const Dataset& data, const std::array<double, 3>& fractions, std::uint64_t seed);

} // namespace shapnn
