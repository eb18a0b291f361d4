// Command-line front end for the whole pipeline: dataset fetch, split,
// per-class GAN training, synthetic generation, classifier training,
// evaluation, and the two experiment grids.
//
// The --config file is loaded before flag parsing, so its values act as
// defaults that explicitly-given flags then override.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ganloc/classifier.hpp"
#include "ganloc/config.hpp"
#include "ganloc/dataset.hpp"
#include "ganloc/experiments.hpp"
#include "ganloc/fetch.hpp"
#include "ganloc/gan.hpp"
#include "ganloc/model_io.hpp"
#include "ganloc/report.hpp"
#include "ganloc/standardize.hpp"

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace ganloc;

namespace {

// State shared across subcommands: the loaded config plus string-typed flag
// values that need conversion after parsing.
struct Cli {
  std::string config_path;
  RunConfig cfg;
  std::string tag;  // artifact subdirectory; defaults to a UTC timestamp
  std::string output_dir_flag;
  std::string dataset_flag;
  std::string interpretation_flag;
  std::string loss_variant_flag;
  std::string classifier_adam_flag;
  std::string gen_adam_flag;
  std::string disc_adam_flag;

  fs::path out_dir(const std::string& command) const {
    fs::path dir = cfg.output_dir / command / tag;
    fs::create_directories(dir);
    return dir;
  }
};

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

AdamConfig parse_adam(const std::string& text) {
  AdamConfig adam;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &adam.alpha, &adam.beta1,
                  &adam.beta2, &adam.epsilon) != 4) {
    throw ConfigError("expected LR,BETA1,BETA2,EPS but got \"" + text + "\"");
  }
  return adam;
}

// Converts the string-typed flags into their config fields.
void apply_string_flags(Cli& cli) {
  if (!cli.output_dir_flag.empty()) cli.cfg.output_dir = cli.output_dir_flag;
  if (!cli.dataset_flag.empty()) cli.cfg.dataset.path = cli.dataset_flag;
  if (!cli.interpretation_flag.empty()) {
    if (cli.interpretation_flag == "totals") {
      cli.cfg.counts_are_totals = true;
    } else if (cli.interpretation_flag == "per_class") {
      cli.cfg.counts_are_totals = false;
    } else {
      throw ConfigError("--interpretation must be totals or per_class, got " +
                        cli.interpretation_flag);
    }
  }
  if (!cli.loss_variant_flag.empty()) {
    cli.cfg.gan.loss_variant = gan_loss_from_string(cli.loss_variant_flag);
  }
  if (!cli.classifier_adam_flag.empty()) {
    cli.cfg.classifier.adam = parse_adam(cli.classifier_adam_flag);
  }
  if (!cli.gen_adam_flag.empty()) {
    cli.cfg.gan.gen_adam = parse_adam(cli.gen_adam_flag);
  }
  if (!cli.disc_adam_flag.empty()) {
    cli.cfg.gan.disc_adam = parse_adam(cli.disc_adam_flag);
  }
}

Dataset load_benchmark(const Cli& cli) {
  const fs::path path = cli.cfg.resolved_dataset_path();
  if (path.empty()) {
    throw ConfigError("no dataset path configured (set dataset.path)");
  }
  if (!fs::exists(path)) {
    throw DataError("dataset file " + path.string() +
                    " is missing; run the fetch command first");
  }
  return load_dataset(path);
}

void add_experiment_flags(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--reps", cli.cfg.repetitions, "Repetitions per cell");
  cmd->add_option("--workers", cli.cfg.workers,
                  "Worker threads (0 = one per logical core)");
  cmd->add_option("--interpretation", cli.interpretation_flag,
                  "Synthetic counts are totals or per_class");
  cmd->add_option("--fractions", cli.cfg.real_fractions,
                  "Real-data fractions")
      ->delimiter(',');
  cmd->add_option("--counts", cli.cfg.synthetic_counts, "Synthetic counts")
      ->delimiter(',');
  cmd->add_option("--top-up-target", cli.cfg.top_up_target,
                  "Per-class top-up target for the sweep");
}

void add_classifier_flags(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--epochs", cli.cfg.classifier.epochs,
                  "Classifier training epochs");
  cmd->add_option("--batch-size", cli.cfg.classifier.batch_size,
                  "Classifier minibatch size");
  cmd->add_option("--classifier-layers", cli.cfg.classifier.layer_sizes,
                  "Classifier layer sizes (7 values)")
      ->delimiter(',');
  cmd->add_option("--classifier-adam", cli.classifier_adam_flag,
                  "Classifier Adam as LR,BETA1,BETA2,EPS");
  cmd->add_option("--classifier-alpha", cli.cfg.classifier.adam.alpha,
                  "Classifier Adam learning rate");
}

void add_gan_flags(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--gan-iterations", cli.cfg.gan.iterations,
                  "GAN training iterations");
  cmd->add_option("--disc-steps", cli.cfg.gan.disc_steps,
                  "Discriminator updates per generator update");
  cmd->add_option("--latent-dim", cli.cfg.gan.latent_dim,
                  "Generator latent dimension");
  cmd->add_option("--minibatch", cli.cfg.gan.minibatch, "GAN minibatch size");
  cmd->add_option("--generator-layers", cli.cfg.gan.generator_sizes,
                  "Generator layer sizes")
      ->delimiter(',');
  cmd->add_option("--discriminator-layers", cli.cfg.gan.discriminator_sizes,
                  "Discriminator layer sizes")
      ->delimiter(',');
  cmd->add_option("--gen-adam", cli.gen_adam_flag,
                  "Generator Adam as LR,BETA1,BETA2,EPS");
  cmd->add_option("--disc-adam", cli.disc_adam_flag,
                  "Discriminator Adam as LR,BETA1,BETA2,EPS");
  cmd->add_option("--gen-alpha", cli.cfg.gan.gen_adam.alpha,
                  "Generator Adam learning rate");
  cmd->add_option("--disc-alpha", cli.cfg.gan.disc_adam.alpha,
                  "Discriminator Adam learning rate");
  cmd->add_option("--loss-variant", cli.loss_variant_flag,
                  "Generator loss: saturating or non_saturating");
  cmd->add_option("--leaky-alpha", cli.cfg.gan.leaky_alpha,
                  "LeakyReLU negative slope");
}

int cmd_fetch(Cli& cli) {
  FetchSpec spec;
  spec.url = cli.cfg.dataset.url;
  spec.sha256 = cli.cfg.dataset.sha256;
  spec.target = cli.cfg.resolved_dataset_path();
  FetchResult result = fetch_dataset(spec);
  std::printf("fetch: %s %s (sha256 %s)\n", result.path.c_str(),
              result.downloaded ? "downloaded" : "already cached",
              result.sha256.c_str());
  return 0;
}

int cmd_split(Cli& cli) {
  Dataset full = load_benchmark(cli);
  Rng rng(cli.cfg.master_seed);
  SplitResult split = stratified_split(full, rng);
  const fs::path dir = cli.out_dir("split");
  save_dataset(dir / "train.tsv", split.train);
  save_dataset(dir / "test.tsv", split.test);
  write_split_manifest(dir / "manifest.csv", split);
  std::printf("split: %lld train / %lld test samples -> %s\n",
              static_cast<long long>(split.train.size()),
              static_cast<long long>(split.test.size()), dir.c_str());
  return 0;
}

int cmd_train_gan(Cli& cli, double fraction, int only_class) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ConfigError("--fraction must be in (0, 1]");
  }
  Dataset full = load_benchmark(cli);
  // Mirror the experiment pipeline so a standalone train-gan reproduces the
  // models a table1 rep-0 job would train.
  const std::uint64_t job = job_seed(cli.cfg.master_seed, fraction, 0);
  Rng split_rng(stage_seed(job, kStreamSplit));
  SplitResult split = stratified_split(full, split_rng);
  Standardizer standardizer = Standardizer::fit(split.train);
  Dataset train = standardizer.apply(split.train);
  if (fraction < 1.0) {
    Rng sub_rng(stage_seed(job, kStreamSubsample));
    train = subsample_fraction(train, fraction, sub_rng);
  }

  const fs::path dir = cli.out_dir("train-gan");
  standardizer.save(dir / "standardizer.json");
  const std::uint64_t gan_master = stage_seed(job, kStreamGan);
  int trained = 0;
  for (int c = 1; c <= train.class_count; ++c) {
    if (only_class != 0 && c != only_class) continue;
    GanConfig gan_cfg = cli.cfg.gan;
    gan_cfg.seed = gan_master ^ static_cast<std::uint64_t>(c);
    GanModel model = train_gan(class_matrix(train, c), gan_cfg);
    save_gan_file(dir / ("gan_class" + std::to_string(c) + ".txt"), model);
    write_trace_csv(dir / ("trace_class" + std::to_string(c) + ".csv"),
                    model.trace);
    ++trained;
  }
  if (trained == 0) {
    throw ConfigError("no class matched --class " +
                      std::to_string(only_class));
  }
  std::printf("train-gan: %d model(s) on %g%% of the train half -> %s\n",
              trained, fraction * 100.0, dir.c_str());
  return 0;
}

int cmd_generate(Cli& cli, const std::string& model_path,
                 const std::string& models_dir, int class_id, long count,
                 const std::string& std_path, bool raw_space) {
  fs::path model_file;
  if (!model_path.empty()) {
    model_file = model_path;
  } else if (!models_dir.empty() && class_id != 0) {
    model_file = fs::path(models_dir) /
                 ("gan_class" + std::to_string(class_id) + ".txt");
  } else {
    throw ConfigError(
        "generate needs --model FILE, or --models-dir DIR with --class N");
  }
  if (!fs::exists(model_file)) {
    throw DataError("missing GAN model file " + model_file.string() +
                    "; train one with the train-gan command");
  }
  GanModel model = load_gan_file(model_file);
  Rng rng(cli.cfg.master_seed);
  SyntheticBlock block = generate(model, static_cast<Index>(count), rng);

  Matrix values = block.values;
  std::string space = "standardized";
  if (raw_space) {
    if (std_path.empty()) throw ConfigError("--raw needs --standardizer");
    values = Standardizer::load(std_path).invert(values);
    space = "raw";
  }

  const fs::path dir = cli.out_dir("generate");
  Dataset out;
  out.class_count = std::max(1, block.class_id);
  out.feature_count = values.cols();
  for (Index i = 0; i < values.rows(); ++i) {
    out.samples.push_back({values.row(i), block.class_id});
  }
  const fs::path data_path = dir / "synthetic.tsv";
  save_dataset(data_path, out);
  std::ofstream manifest(dir / "synthetic.json");
  manifest << "{\n  \"synthetic\": true,\n  \"class\": " << block.class_id
           << ",\n  \"count\": " << values.rows() << ",\n  \"space\": \""
           << space << "\"\n}\n";
  std::printf("generate: %lld class-%d samples (%s space) -> %s\n",
              static_cast<long long>(values.rows()), block.class_id,
              space.c_str(), data_path.c_str());
  return 0;
}

int cmd_train_classifier(Cli& cli, const std::string& train_path,
                         const std::string& std_path) {
  if (!fs::exists(train_path)) {
    throw DataError("missing training data " + train_path);
  }
  Dataset train = load_dataset(train_path);
  Standardizer standardizer = std_path.empty() ? Standardizer::fit(train)
                                               : Standardizer::load(std_path);
  Dataset standardized = standardizer.apply(train);

  ClassifierConfig cfg = cli.cfg.classifier;
  cfg.seed = cli.cfg.master_seed;
  TrainedClassifier trained = train_classifier(standardized, cfg);

  const fs::path dir = cli.out_dir("train-classifier");
  save_mlp_file(dir / "classifier.txt", trained.params);
  standardizer.save(dir / "standardizer.json");
  std::ofstream trace(dir / "loss_trace.csv");
  trace << "epoch,mean_loss\n";
  for (const EpochTrace& t : trained.trace) {
    char line[64];
    std::snprintf(line, sizeof(line), "%d,%.17g\n", t.epoch, t.mean_loss);
    trace << line;
  }
  const double final_loss =
      trained.trace.empty() ? 0.0 : trained.trace.back().mean_loss;
  std::printf("train-classifier: %d epochs, final mean loss %.4f -> %s\n",
              cfg.epochs, final_loss, dir.c_str());
  return 0;
}

int cmd_evaluate(Cli& cli, const std::string& model_path,
                 const std::string& test_path, const std::string& std_path) {
  if (!fs::exists(model_path)) {
    throw DataError("missing classifier model " + model_path +
                    "; train one with the train-classifier command");
  }
  if (!fs::exists(test_path)) {
    throw DataError("missing test data " + test_path);
  }
  MlpParams params = load_mlp_file(model_path);
  Dataset test = load_dataset(test_path);
  if (!std_path.empty()) test = Standardizer::load(std_path).apply(test);
  EvalResult result = evaluate(params, test);

  const fs::path dir = cli.out_dir("evaluate");
  std::ofstream out(dir / "evaluation.csv");
  out << "metric,value\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "accuracy,%.17g\n", result.accuracy);
  out << buf;
  std::snprintf(buf, sizeof(buf), "log_loss,%.17g\n", result.log_loss);
  out << buf;
  for (Index i = 0; i < result.confusion.rows(); ++i) {
    for (Index j = 0; j < result.confusion.cols(); ++j) {
      out << "confusion_" << (i + 1) << '_' << (j + 1) << ','
          << result.confusion(i, j) << '\n';
    }
  }
  std::printf("evaluate: accuracy %.2f%%, log loss %.4f -> %s\n",
              result.accuracy, result.log_loss, dir.c_str());
  return 0;
}

void write_failures(const fs::path& dir, const ExperimentReport& report) {
  if (report.failures.empty()) return;
  std::ofstream out(dir / "failures.txt");
  for (const std::string& f : report.failures) out << f << '\n';
}

int cmd_table1(Cli& cli, bool full) {
  Dataset data = load_benchmark(cli);
  ExperimentSpec spec = cli.cfg.experiment_spec();
  if (full) spec.repetitions = 100;
  ExperimentReport report = run_table1(data, spec);

  const fs::path dir = cli.out_dir("table1");
  write_runs_csv(dir / "runs.csv", report.records);
  write_cells_csv(dir / "cells.csv", report.cells);
  write_table_markdown(dir / "table.md", report.cells);
  write_failures(dir, report);
  std::printf("table1: %zu runs across %zu cells -> %s\n",
              report.records.size(), report.cells.size(), dir.c_str());
  return 0;
}

int cmd_sweep(Cli& cli, bool full, double step_percent) {
  Dataset data = load_benchmark(cli);
  ExperimentSpec spec = cli.cfg.experiment_spec();
  if (full) spec.repetitions = 100;
  spec.real_fractions = sweep_fractions(
      step_percent > 0.0 ? step_percent : cli.cfg.sweep_step_percent);
  ExperimentReport report = run_fraction_sweep(data, spec);

  const fs::path dir = cli.out_dir("sweep");
  write_runs_csv(dir / "runs.csv", report.records);
  write_cells_csv(dir / "cells.csv", report.cells);
  write_sweep_svg(dir / "sweep.svg", report.cells);
  write_failures(dir, report);
  std::printf("sweep: %zu runs across %zu cells -> %s\n",
              report.records.size(), report.cells.size(), dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  cli.tag = utc_timestamp();

  // Honor --config before the regular parse so flags override file values.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        cli.config_path = argv[i + 1];
      } else if (arg.rfind("--config=", 0) == 0) {
        cli.config_path = arg.substr(9);
      }
    }
    if (!cli.config_path.empty()) cli.cfg = load_config(cli.config_path);
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  }

  CLI::App app{"GAN-augmented RSS fingerprint room classification pipeline"};
  app.require_subcommand(1);

  app.add_option("--config", cli.config_path,
                 "JSON run configuration (see docs/formats.md)");
  app.add_option("--seed", cli.cfg.master_seed, "Master seed");
  app.add_option("--output-dir", cli.output_dir_flag,
                 "Artifact root directory");
  app.add_option("--dataset", cli.dataset_flag, "Dataset file override");
  app.add_option("--tag", cli.tag,
                 "Artifact subdirectory name (default: UTC timestamp)");

  CLI::App* fetch = app.add_subcommand(
      "fetch", "Download and checksum-verify the benchmark dataset");
  std::string url_flag, sha_flag;
  fetch->add_option("--url", url_flag, "Source URL override");
  fetch->add_option("--sha256", sha_flag, "Expected digest override");

  CLI::App* split =
      app.add_subcommand("split", "Write a stratified 50/50 split");

  CLI::App* train_gan_cmd = app.add_subcommand(
      "train-gan", "Train per-class GANs on (a fraction of) the train half");
  double fraction = 1.0;
  int only_class = 0;
  train_gan_cmd->add_option("--fraction", fraction,
                            "Real-data fraction in (0,1]");
  train_gan_cmd->add_option("--class", only_class,
                            "Train only this class id (default: all)");
  add_gan_flags(train_gan_cmd, cli);

  CLI::App* generate_cmd = app.add_subcommand(
      "generate", "Sample synthetic fingerprints from a trained GAN");
  std::string model_path, models_dir, std_path;
  int gen_class = 0;
  long gen_count = 250;
  bool raw_space = false;
  generate_cmd->add_option("--model", model_path, "GAN model file");
  generate_cmd->add_option("--models-dir", models_dir,
                           "train-gan output directory");
  generate_cmd->add_option("--class", gen_class,
                           "Class id within --models-dir");
  generate_cmd->add_option("--count", gen_count, "Samples to generate");
  generate_cmd->add_option("--standardizer", std_path,
                           "Standardizer JSON (for --raw)");
  generate_cmd->add_flag("--raw", raw_space,
                         "Invert standardization before export");

  CLI::App* train_clf = app.add_subcommand(
      "train-classifier", "Train the room classifier on a dataset file");
  std::string train_path, clf_std_path;
  train_clf->add_option("--train", train_path, "Training dataset (TSV)")
      ->required();
  train_clf->add_option("--standardizer", clf_std_path,
                        "Apply this standardizer instead of fitting one");
  add_classifier_flags(train_clf, cli);

  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "Evaluate a trained classifier on a dataset file");
  std::string eval_model, test_path, eval_std_path;
  evaluate_cmd->add_option("--model", eval_model, "Classifier model file")
      ->required();
  evaluate_cmd->add_option("--test", test_path, "Test dataset (TSV)")
      ->required();
  evaluate_cmd->add_option("--standardizer", eval_std_path,
                           "Standardizer JSON to apply to the test data");

  CLI::App* table1 = app.add_subcommand(
      "table1", "Accuracy grid: real fractions x synthetic counts");
  bool full = false;
  table1->add_flag("--full", full, "Run 100 repetitions per cell");
  add_experiment_flags(table1, cli);
  add_classifier_flags(table1, cli);
  add_gan_flags(table1, cli);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Fraction sweep with top-up augmentation");
  double step_percent = 0.0;  // 0: take the config value
  sweep->add_option("--step", step_percent, "Fraction step in percent");
  sweep->add_flag("--full", full, "Run 100 repetitions per cell");
  add_experiment_flags(sweep, cli);
  add_classifier_flags(sweep, cli);
  add_gan_flags(sweep, cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_string_flags(cli);
    if (!url_flag.empty()) cli.cfg.dataset.url = url_flag;
    if (!sha_flag.empty()) cli.cfg.dataset.sha256 = sha_flag;

    if (app.got_subcommand(fetch)) return cmd_fetch(cli);
    if (app.got_subcommand(split)) return cmd_split(cli);
    if (app.got_subcommand(train_gan_cmd)) {
      return cmd_train_gan(cli, fraction, only_class);
    }
    if (app.got_subcommand(generate_cmd)) {
      return cmd_generate(cli, model_path, models_dir, gen_class, gen_count,
                          std_path, raw_space);
    }
    if (app.got_subcommand(train_clf)) {
      return cmd_train_classifier(cli, train_path, clf_std_path);
    }
    if (app.got_subcommand(evaluate_cmd)) {
      return cmd_evaluate(cli, eval_model, test_path, eval_std_path);
    }
    if (app.got_subcommand(table1)) return cmd_table1(cli, full);
    if (app.got_subcommand(sweep)) return cmd_sweep(cli, full, step_percent);
    throw ConfigError("no command given");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const TrainingError& e) {
    std::fprintf(stderr, "training error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
