#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "ganloc/rng.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

// One fingerprint: signal strengths from M access points plus a room label
// in 1..C.
struct RssSample {
  RowVector rss;
  int label = 0;
};

struct Dataset {
  std::vector<RssSample> samples;
  int class_count = 0;
  Index feature_count = 0;

  std::size_t size() const { return samples.size(); }
  std::map<int, std::size_t> per_class_counts() const;

  // All features stacked, one sample per row.
  Matrix features() const;
  // One-hot labels, samples x class_count.
  Matrix labels_one_hot() const;
};

// Per-class feature block: every row came from samples of class_id.
struct ClassMatrix {
  int class_id = 0;
  Matrix values;
};

// Reads the benchmark sample format: one sample per line, feature values
// followed by an integer label, tab-separated (comma-separated accepted when
// a line has no tabs). Errors carry the 1-based line number.
Dataset load_dataset(const std::filesystem::path& path);

struct SplitResult {
  Dataset train;
  Dataset test;
  // Original sample indices, for the audit manifest.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Half/half per class, random membership. Every class count must be even.
SplitResult stratified_split(const Dataset& ds, Rng& rng);

// Writes the split audit manifest as CSV: sample_index,split,class.
void write_split_manifest(const std::filesystem::path& path,
                          const SplitResult& split);

// Per-class subsample of round-half-up(fraction * class count) samples.
// fraction must be in (0, 1]; the rounded count must be >= 1 per class.
Dataset subsample_fraction(const Dataset& ds, double fraction, Rng& rng);

ClassMatrix class_matrix(const Dataset& ds, int class_id);

RowVector one_hot(int label, int class_count);

// Rebuilds a dataset from per-class feature blocks (labels taken from each
// block's class_id). Used to assemble augmented training sets.
Dataset dataset_from_class_matrices(const std::vector<ClassMatrix>& blocks,
                                    int class_count);

// Writes samples in the same tab-separated format load_dataset reads.
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

}  // namespace ganloc
