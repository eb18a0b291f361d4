#include "ganloc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <thread>
#include <tuple>

namespace ganloc {

namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

struct JobOutcome {
  std::vector<RunRecord> records;
  std::vector<std::string> failures;
};

// The per-job front half shared by both experiments: fresh split,
// standardizer fitted on the training half, subsample of the standardized
// training data.
struct JobData {
  Dataset train;  // standardized, subsampled
  Dataset test;   // standardized
};

JobData prepare_job(const Dataset& full, double fraction, std::uint64_t job) {
  Rng split_rng(stage_seed(job, kStreamSplit));
  SplitResult split = stratified_split(full, split_rng);
  Standardizer std_ = Standardizer::fit(split.train);
  JobData data;
  data.test = std_.apply(split.test);
  Dataset train = std_.apply(split.train);
  if (fraction < 1.0) {
    Rng sub_rng(stage_seed(job, kStreamSubsample));
    data.train = subsample_fraction(train, fraction, sub_rng);
  } else {
    data.train = std::move(train);
  }
  return data;
}

std::vector<GanModel> train_class_gans(const Dataset& train,
                                       const ExperimentSpec& spec,
                                       std::uint64_t job) {
  const std::uint64_t gan_master = stage_seed(job, kStreamGan);
  std::vector<GanModel> models;
  models.reserve(static_cast<std::size_t>(train.class_count));
  for (int c = 1; c <= train.class_count; ++c) {
    GanConfig cfg = spec.gan;
    cfg.seed = gan_master ^ static_cast<std::uint64_t>(c);
    models.push_back(train_gan(class_matrix(train, c), cfg));
  }
  return models;
}

// Assembles the augmented training set for the given per-class synthetic
// counts; with an all-zero allocation the subsample is reused directly.
Dataset augmented_train(const Dataset& train,
                        const std::vector<GanModel>& gans,
                        const std::vector<long>& per_class,
                        std::uint64_t job, long cell_tag) {
  bool any = false;
  for (long p : per_class) any = any || p > 0;
  if (!any) return train;

  std::vector<ClassMatrix> blocks;
  blocks.reserve(per_class.size());
  for (int c = 1; c <= train.class_count; ++c) {
    ClassMatrix real = class_matrix(train, c);
    const long p = per_class[static_cast<std::size_t>(c - 1)];
    if (p > 0) {
      Rng gen_rng(mix64(stage_seed(job, kStreamGenerate) ^
                        (static_cast<std::uint64_t>(cell_tag) << 8) ^
                        static_cast<std::uint64_t>(c)));
      SyntheticBlock synth =
          generate(gans[static_cast<std::size_t>(c - 1)], p, gen_rng);
      blocks.push_back(augment(real, synth));
    } else {
      blocks.push_back(std::move(real));
    }
  }
  return dataset_from_class_matrices(blocks, train.class_count);
}

RunRecord evaluate_cell(const JobData& data, const Dataset& train,
                        const ExperimentSpec& spec, std::uint64_t job) {
  ClassifierConfig cfg = spec.classifier;
  cfg.seed = stage_seed(job, kStreamClassifier);
  TrainedClassifier trained = train_classifier(train, cfg);
  EvalResult eval = evaluate(trained.params, data.test);
  RunRecord record;
  record.accuracy = eval.accuracy;
  record.log_loss = eval.log_loss;
  return record;
}

JobOutcome run_table1_job(const Dataset& full, const ExperimentSpec& spec,
                          double fraction, int rep) {
  const std::uint64_t job = job_seed(spec.master_seed, fraction, rep);
  JobOutcome outcome;
  JobData data = prepare_job(full, fraction, job);

  bool needs_gans = false;
  for (long s : spec.synthetic_counts) needs_gans = needs_gans || s > 0;
  std::vector<GanModel> gans;
  std::string gan_failure;
  if (needs_gans) {
    try {
      gans = train_class_gans(data.train, spec, job);
    } catch (const std::exception& e) {
      gan_failure = e.what();
    }
  }

  for (long count : spec.synthetic_counts) {
    RunRecord record;
    record.experiment = "table1";
    record.variant = count == 0 ? "real_only" : "augmented";
    record.real_fraction = fraction;
    record.synthetic_count = count;
    record.interpretation = spec.counts_are_totals ? "totals" : "per_class";
    record.rep = rep;
    record.run_seed = job;
    const std::string cell = "table1 fraction " + std::to_string(fraction) +
                             " synthetic " + std::to_string(count) + " rep " +
                             std::to_string(rep);
    if (count > 0 && !gan_failure.empty()) {
      outcome.failures.push_back(cell + ": " + gan_failure);
      continue;
    }
    try {
      const auto start = Clock::now();
      std::vector<long> per_class =
          spec.counts_are_totals
              ? allocate_total(count, data.train.class_count)
              : std::vector<long>(
                    static_cast<std::size_t>(data.train.class_count), count);
      Dataset train =
          augmented_train(data.train, gans, per_class, job, count);
      RunRecord measured = evaluate_cell(data, train, spec, job);
      record.accuracy = measured.accuracy;
      record.log_loss = measured.log_loss;
      record.wall_ms = elapsed_ms(start);
      outcome.records.push_back(record);
    } catch (const std::exception& e) {
      outcome.failures.push_back(cell + ": " + e.what());
    }
  }
  return outcome;
}

JobOutcome run_sweep_job(const Dataset& full, const ExperimentSpec& spec,
                         double fraction, int rep) {
  const std::uint64_t job = job_seed(spec.master_seed, fraction, rep);
  JobOutcome outcome;
  JobData data = prepare_job(full, fraction, job);

  // Per-class top-up: P_c = max(0, target - K_c).
  std::vector<long> per_class(
      static_cast<std::size_t>(data.train.class_count), 0);
  long total_added = 0;
  auto counts = data.train.per_class_counts();
  for (int c = 1; c <= data.train.class_count; ++c) {
    const long k = static_cast<long>(counts[c]);
    const long p = std::max(0L, spec.top_up_target - k);
    per_class[static_cast<std::size_t>(c - 1)] = p;
    total_added += p;
  }

  std::vector<GanModel> gans;
  std::string gan_failure;
  if (total_added > 0) {
    try {
      gans = train_class_gans(data.train, spec, job);
    } catch (const std::exception& e) {
      gan_failure = e.what();
    }
  }

  struct Cell {
    const char* variant;
    long count;
  };
  const Cell cells[] = {{"real_only", 0}, {"augmented", total_added}};
  for (const Cell& cell : cells) {
    RunRecord record;
    record.experiment = "sweep";
    record.variant = cell.variant;
    record.real_fraction = fraction;
    record.synthetic_count = cell.count;
    record.interpretation = "top_up";
    record.rep = rep;
    record.run_seed = job;
    const std::string label = "sweep fraction " + std::to_string(fraction) +
                              " " + cell.variant + " rep " +
                              std::to_string(rep);
    if (cell.count > 0 && !gan_failure.empty()) {
      outcome.failures.push_back(label + ": " + gan_failure);
      continue;
    }
    try {
      const auto start = Clock::now();
      Dataset train =
          cell.count == 0
              ? data.train
              : augmented_train(data.train, gans, per_class, job, 1);
      RunRecord measured = evaluate_cell(data, train, spec, job);
      record.accuracy = measured.accuracy;
      record.log_loss = measured.log_loss;
      record.wall_ms = elapsed_ms(start);
      outcome.records.push_back(record);
    } catch (const std::exception& e) {
      outcome.failures.push_back(label + ": " + e.what());
    }
  }
  return outcome;
}

using JobFn = JobOutcome (*)(const Dataset&, const ExperimentSpec&, double,
                             int);

// Runs every (fraction, rep) job on a bounded pool and merges the outcomes
// in job order, so the report is independent of scheduling.
ExperimentReport run_grid(const Dataset& full, const ExperimentSpec& spec,
                          JobFn job_fn) {
  spec.validate();
  if (full.samples.empty()) throw DataError("experiment dataset is empty");

  struct Job {
    double fraction;
    int rep;
  };
  std::vector<Job> jobs;
  for (double f : spec.real_fractions) {
    for (int r = 0; r < spec.repetitions; ++r) {
      jobs.push_back({f, r});
    }
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  std::vector<std::string> panics(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        outcomes[i] = job_fn(full, spec, jobs[i].fraction, jobs[i].rep);
      } catch (const std::exception& e) {
        panics[i] = e.what();
      }
    }
  };

  const std::size_t pool = std::min<std::size_t>(
      jobs.size(), static_cast<std::size_t>(std::max(1, spec.workers)));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  ExperimentReport report;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!panics[i].empty()) {
      report.failures.push_back("job fraction " +
                                std::to_string(jobs[i].fraction) + " rep " +
                                std::to_string(jobs[i].rep) + ": " +
                                panics[i]);
      continue;
    }
    for (RunRecord& r : outcomes[i].records) {
      report.records.push_back(std::move(r));
    }
    for (std::string& f : outcomes[i].failures) {
      report.failures.push_back(std::move(f));
    }
  }

  if (report.records.empty()) {
    std::string detail =
        report.failures.empty() ? "" : (" first: " + report.failures.front());
    throw TrainingError("experiment produced no successful runs;" + detail);
  }
  report.cells = aggregate(report.records);
  return report;
}

// A cell may lose individual repetitions, but losing all of them is fatal.
void require_cell(const ExperimentReport& report, bool found,
                  const std::string& what) {
  if (found) return;
  std::string detail =
      report.failures.empty() ? "" : ("; first abort: " +
                                      report.failures.front());
  throw TrainingError("every repetition of cell " + what + " failed" +
                      detail);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (real_fractions.empty()) {
    throw ConfigError("experiment needs at least one real fraction");
  }
  for (double f : real_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ConfigError("real fractions must be in (0, 1]");
    }
  }
  if (synthetic_counts.empty()) {
    throw ConfigError("experiment needs at least one synthetic count");
  }
  for (long s : synthetic_counts) {
    if (s < 0) throw ConfigError("synthetic counts must be >= 0");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (top_up_target < 1) throw ConfigError("top_up_target must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  classifier.validate();
  gan.validate();
}

std::vector<long> allocate_total(long total, int class_count) {
  if (class_count < 1) throw ConfigError("allocate_total: no classes");
  if (total < 0) throw ConfigError("allocate_total: negative total");
  std::vector<long> out(static_cast<std::size_t>(class_count),
                        total / class_count);
  const long remainder = total % class_count;
  for (long i = 0; i < remainder; ++i) {
    out[static_cast<std::size_t>(i)] += 1;
  }
  return out;
}

ExperimentReport run_table1(const Dataset& full, const ExperimentSpec& spec) {
  ExperimentReport report = run_grid(full, spec, &run_table1_job);
  for (double f : spec.real_fractions) {
    for (long s : spec.synthetic_counts) {
      bool found = false;
      for (const CellStats& c : report.cells) {
        found = found || (c.real_fraction == f && c.synthetic_count == s);
      }
      require_cell(report, found,
                   "table1 fraction " + std::to_string(f) + " synthetic " +
                       std::to_string(s));
    }
  }
  return report;
}

ExperimentReport run_fraction_sweep(const Dataset& full,
                                    const ExperimentSpec& spec) {
  ExperimentReport report = run_grid(full, spec, &run_sweep_job);
  for (double f : spec.real_fractions) {
    for (const char* variant : {"real_only", "augmented"}) {
      bool found = false;
      for (const CellStats& c : report.cells) {
        found = found || (c.real_fraction == f && c.variant == variant);
      }
      require_cell(report, found,
                   "sweep " + std::string(variant) + " fraction " +
                       std::to_string(f));
    }
  }
  return report;
}

std::vector<CellStats> aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) {
    throw DataError("aggregate: no records");
  }
  using Key = std::tuple<std::string, std::string, double, long>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    groups[{r.experiment, r.variant, r.real_fraction, r.synthetic_count}]
        .push_back(&r);
  }

  std::vector<CellStats> cells;
  cells.reserve(groups.size());
  for (const auto& [key, group] : groups) {
    CellStats cell;
    cell.experiment = std::get<0>(key);
    cell.variant = std::get<1>(key);
    cell.real_fraction = std::get<2>(key);
    cell.synthetic_count = std::get<3>(key);
    cell.runs = static_cast<int>(group.size());

    auto stats = [&](auto pick, double& mean, double& stdev, double& mn,
                     double& mx) {
      double sum = 0.0;
      mn = pick(*group.front());
      mx = mn;
      for (const RunRecord* r : group) {
        const double v = pick(*r);
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      mean = sum / double(group.size());
      double sq = 0.0;
      for (const RunRecord* r : group) {
        const double d = pick(*r) - mean;
        sq += d * d;
      }
      // population std: a single record aggregates to exactly 0
      stdev = std::sqrt(sq / double(group.size()));
    };
    stats([](const RunRecord& r) { return r.accuracy; }, cell.mean_accuracy,
          cell.std_accuracy, cell.min_accuracy, cell.max_accuracy);
    stats([](const RunRecord& r) { return r.log_loss; }, cell.mean_log_loss,
          cell.std_log_loss, cell.min_log_loss, cell.max_log_loss);
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace ganloc
