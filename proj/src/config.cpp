#include "ganloc/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

namespace ganloc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw ConfigError("config: " + what);
}

// Strict object reader: every present key must be claimed by get() or
// mark(), so unknown keys (typos, stale fields) are hard errors.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j.is_object()) bad(where_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      bad(where_ + "." + key + " has the wrong type");
    }
  }

  // Claims a key handled out of band; returns its value if present.
  const json* mark(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        bad("unknown key " + where_ + "." + it.key());
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

AdamConfig read_adam(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  AdamConfig adam;
  r.get("alpha", adam.alpha);
  r.get("beta1", adam.beta1);
  r.get("beta2", adam.beta2);
  r.get("epsilon", adam.epsilon);
  r.finish();
  return adam;
}

std::vector<Index> read_sizes(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of layer sizes");
  std::vector<Index> sizes;
  for (const json& v : j) {
    if (!v.is_number_integer()) bad(where + " entries must be integers");
    sizes.push_back(v.get<Index>());
  }
  return sizes;
}

ClassifierConfig read_classifier(const json& j) {
  ObjectReader r(j, "classifier");
  ClassifierConfig cfg;
  if (const json* sizes = r.mark("layer_sizes")) {
    cfg.layer_sizes = read_sizes(*sizes, "classifier.layer_sizes");
  }
  r.get("epochs", cfg.epochs);
  r.get("batch_size", cfg.batch_size);
  if (const json* adam = r.mark("adam")) {
    cfg.adam = read_adam(*adam, "classifier.adam");
  }
  r.finish();
  return cfg;
}

GanConfig read_gan(const json& j) {
  ObjectReader r(j, "gan");
  GanConfig cfg;
  r.get("latent_dim", cfg.latent_dim);
  if (const json* sizes = r.mark("generator_sizes")) {
    cfg.generator_sizes = read_sizes(*sizes, "gan.generator_sizes");
  }
  if (const json* sizes = r.mark("discriminator_sizes")) {
    cfg.discriminator_sizes = read_sizes(*sizes, "gan.discriminator_sizes");
  }
  r.get("disc_steps", cfg.disc_steps);
  r.get("iterations", cfg.iterations);
  r.get("minibatch", cfg.minibatch);
  if (const json* adam = r.mark("gen_adam")) {
    cfg.gen_adam = read_adam(*adam, "gan.gen_adam");
  }
  if (const json* adam = r.mark("disc_adam")) {
    cfg.disc_adam = read_adam(*adam, "gan.disc_adam");
  }
  if (const json* variant = r.mark("loss_variant")) {
    if (!variant->is_string()) bad("gan.loss_variant must be a string");
    cfg.loss_variant = gan_loss_from_string(variant->get<std::string>());
  }
  r.get("leaky_alpha", cfg.leaky_alpha);
  r.finish();
  return cfg;
}

}  // namespace

ExperimentSpec RunConfig::experiment_spec() const {
  ExperimentSpec spec;
  spec.real_fractions = real_fractions;
  spec.synthetic_counts = synthetic_counts;
  spec.counts_are_totals = counts_are_totals;
  spec.repetitions = repetitions;
  spec.master_seed = master_seed;
  spec.classifier = classifier;
  spec.gan = gan;
  spec.top_up_target = top_up_target;
  if (workers > 0) {
    spec.workers = workers;
  } else {
    const unsigned hw = std::thread::hardware_concurrency();
    spec.workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return spec;
}

std::filesystem::path RunConfig::resolved_dataset_path() const {
  if (const char* cache = std::getenv("GANLOC_CACHE_DIR")) {
    if (*cache != '\0') {
      return std::filesystem::path(cache) / dataset.path.filename();
    }
  }
  return dataset.path;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " +
                      e.what());
  }

  ObjectReader r(j, "config");
  int version = 1;
  r.get("version", version);
  if (version != 1) bad("unsupported config version");

  RunConfig cfg;
  if (const json* dataset = r.mark("dataset")) {
    ObjectReader d(*dataset, "dataset");
    std::string p;
    d.get("path", p);
    cfg.dataset.path = p;
    d.get("url", cfg.dataset.url);
    d.get("sha256", cfg.dataset.sha256);
    d.finish();
  }
  {
    std::string out;
    r.get("output_dir", out);
    if (!out.empty()) cfg.output_dir = out;
  }
  r.get("master_seed", cfg.master_seed);
  if (const json* mode = r.mark("interpretation")) {
    if (*mode == "totals") {
      cfg.counts_are_totals = true;
    } else if (*mode == "per_class") {
      cfg.counts_are_totals = false;
    } else {
      bad("interpretation must be totals or per_class");
    }
  }
  if (const json* classifier = r.mark("classifier")) {
    cfg.classifier = read_classifier(*classifier);
  }
  if (const json* gan = r.mark("gan")) {
    cfg.gan = read_gan(*gan);
  }
  r.get("real_fractions", cfg.real_fractions);
  r.get("synthetic_counts", cfg.synthetic_counts);
  r.get("repetitions", cfg.repetitions);
  r.get("top_up_target", cfg.top_up_target);
  r.get("sweep_step_percent", cfg.sweep_step_percent);
  r.get("workers", cfg.workers);
  r.finish();
  return cfg;
}

std::vector<double> sweep_fractions(double step_percent) {
  const long step_bp = std::llround(step_percent * 100.0);
  if (step_bp < 1 || step_bp > 10000) {
    throw ConfigError("sweep step must be in (0, 100] percent");
  }
  if (10000 % step_bp != 0) {
    throw ConfigError("sweep step must divide 100%");
  }
  std::vector<double> fractions;
  for (long bp = step_bp; bp <= 10000; bp += step_bp) {
    fractions.push_back(double(bp) / 10000.0);
  }
  return fractions;
}

}  // namespace ganloc
