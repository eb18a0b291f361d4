#pragma once

#include <filesystem>
#include <string>

#include "ganloc/experiments.hpp"

namespace ganloc {

struct DatasetConfig {
  std::filesystem::path path;
  std::string url;
  std::string sha256;
};

// The whole run configuration, loaded from a versioned JSON file. Every
// leaf is overridable by a CLI flag; unknown keys are rejected so typos
// cannot silently fall back to defaults.
struct RunConfig {
  DatasetConfig dataset;
  std::filesystem::path output_dir = "out";
  std::uint64_t master_seed = 1;
  bool counts_are_totals = true;
  ClassifierConfig classifier{};
  GanConfig gan{};
  std::vector<double> real_fractions{0.10, 1.00};
  std::vector<long> synthetic_counts{0, 250, 500, 750, 1000};
  int repetitions = 20;
  long top_up_target = 250;
  double sweep_step_percent = 5.0;
  int workers = 0;  // 0 = one per logical core

  // Assembles the experiment spec with the worker count resolved.
  ExperimentSpec experiment_spec() const;
  // The dataset file to read, honoring the GANLOC_CACHE_DIR override.
  std::filesystem::path resolved_dataset_path() const;
};

RunConfig load_config(const std::filesystem::path& path);

// 0.05, 0.10, ..., 1.00 for the default 5% step; always ends exactly at 1.
std::vector<double> sweep_fractions(double step_percent);

}  // namespace ganloc
