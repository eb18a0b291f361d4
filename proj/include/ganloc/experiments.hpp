#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ganloc/classifier.hpp"
#include "ganloc/dataset.hpp"
#include "ganloc/gan.hpp"
#include "ganloc/rng.hpp"
#include "ganloc/standardize.hpp"

namespace ganloc {

struct ExperimentSpec {
  // Cells: every fraction is crossed with every synthetic count.
  std::vector<double> real_fractions{0.10, 1.00};
  std::vector<long> synthetic_counts{0, 250, 500, 750, 1000};
  // Whether synthetic_counts are totals split across classes (remainder to
  // the lowest class ids) or per-class counts.
  bool counts_are_totals = true;
  int repetitions = 20;
  std::uint64_t master_seed = 1;
  ClassifierConfig classifier{};
  GanConfig gan{};
  // Fraction-sweep mode: synthetic tops each class up to this many samples.
  long top_up_target = 250;
  int workers = 1;

  void validate() const;
};

struct RunRecord {
  std::string experiment;  // "table1" or "sweep"
  std::string variant;     // "real_only" or "augmented"
  double real_fraction = 1.0;
  long synthetic_count = 0;
  std::string interpretation;  // "totals", "per_class", or "top_up"
  int rep = 0;
  std::uint64_t run_seed = 0;
  double accuracy = 0.0;
  double log_loss = 0.0;
  long wall_ms = 0;
};

struct CellStats {
  std::string experiment;
  std::string variant;
  double real_fraction = 1.0;
  long synthetic_count = 0;
  int runs = 0;
  double mean_accuracy = 0.0, std_accuracy = 0.0;
  double min_accuracy = 0.0, max_accuracy = 0.0;
  double mean_log_loss = 0.0, std_log_loss = 0.0;
  double min_log_loss = 0.0, max_log_loss = 0.0;
};

struct ExperimentReport {
  std::vector<RunRecord> records;
  std::vector<CellStats> cells;
  std::vector<std::string> failures;  // per-run aborts that were tolerated
};

// Seed for one (fraction, repetition) job. The fraction enters in basis
// points, so sweep steps of 0.05% and up are exact; two mixing rounds keep
// the streams for neighboring jobs unrelated.
inline std::uint64_t job_seed(std::uint64_t master, double fraction,
                              int rep) {
  const std::uint64_t bp =
      static_cast<std::uint64_t>(std::llround(fraction * 10000.0));
  return mix64(mix64(master ^ (bp << 20)) ^
               (static_cast<std::uint64_t>(rep) + 1));
}

// Stream tags for the stages inside one job; each stage gets its own Rng so
// that, e.g., changing classifier epochs never shifts the GAN's draws.
enum : std::uint64_t {
  kStreamSplit = 1,
  kStreamSubsample = 2,
  kStreamGan = 3,
  kStreamGenerate = 4,
  kStreamClassifier = 5,
};

inline std::uint64_t stage_seed(std::uint64_t job, std::uint64_t stream) {
  return mix64(job ^ (stream << 56));
}

// Splits a total synthetic budget across classes: equal shares, remainder
// given to the lowest class ids.
std::vector<long> allocate_total(long total, int class_count);

// Table-style grid: for each fraction x synthetic count, R repetitions of
// re-split -> standardize -> subsample -> per-class GANs -> generate ->
// augment -> train classifier -> evaluate. Per-run aborts are recorded in
// the report; a cell with zero surviving runs raises TrainingError.
ExperimentReport run_table1(const Dataset& full, const ExperimentSpec& spec);

// Fraction sweep with top-up augmentation: for every fraction, a real-only
// run and a run whose classes are topped up to spec.top_up_target samples
// with synthetic data. Both runs of a job share the split, the subsample,
// and the classifier seed, so at fraction 1.0 the two curves coincide.
ExperimentReport run_fraction_sweep(const Dataset& full,
                                    const ExperimentSpec& spec);

// Per-cell mean/std/min/max (population std, so a single record has std 0).
std::vector<CellStats> aggregate(const std::vector<RunRecord>& records);

}  // namespace ganloc
