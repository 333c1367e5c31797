#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "colearn/matrix.hpp"

namespace colearn {

// A labelled dataset: one feature row per sample, labels in [0, class_count).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int class_count = 0;

  std::size_t size() const { return features.rows; }
  std::size_t dim() const { return features.cols; }
  void validate() const;  // throws InvalidInputError
};

// One participant's private slice of a training set.
struct Shard {
  int participant_id = 0;
  Dataset data;
};

// n samples from class_count isotropic unit-variance Gaussians whose means
// are pairwise at least `separation` apart (exactly `separation` while
// classes fit on distinct axes). Labels are assigned round-robin, so class
// counts differ by at most one.
Dataset gen_gaussian_blobs(std::uint64_t seed, int n, int dims, int classes,
                           double separation);

// Two-class, two-dimensional, not linearly separable: samples sit on noise-
// scaled rings around the four XOR corners (0,0) (0,1) (1,0) (1,1), labelled
// by the xor of the corner coordinates. noise = 0 collapses each ring onto
// its corner.
Dataset gen_xor_rings(std::uint64_t seed, int n, double noise);

// Seeded uniform permutation, then K contiguous chunks. Shards are disjoint,
// cover the input, and differ in size by at most one sample.
std::vector<Shard> partition_iid(const Dataset& data, int participants,
                                 std::uint64_t seed);

struct CsvSchema {
  bool has_header = false;
  std::vector<int> feature_cols;  // empty: every column except the label
  int label_col = -1;             // -1: last column
  int class_count = 0;
};

// Throws LoadError naming "<path>:<line>" on parse failures, ragged rows and
// out-of-range labels.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Feature columns in order, label last; header "f0,...,f{d-1},label" when
// requested. Doubles are written in shortest round-trip form.
void save_csv(const std::filesystem::path& path, const Dataset& data,
              bool with_header);

}  // namespace colearn
