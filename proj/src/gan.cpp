#include "ganloc/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ganloc/loss.hpp"
#include "ganloc/model_io.hpp"

namespace ganloc {

namespace {

std::string fmt(Scalar v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scalar clamp_prob(Scalar p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

// The discriminator's sigmoid keeps outputs inside [0,1]; anything else means
// the wrong network was passed in.
void check_scores(const Matrix& d, const char* where) {
  if (d.cols() != 1) {
    throw TrainingError(std::string(where) +
                        ": discriminator must emit one score per sample");
  }
  for (Index i = 0; i < d.rows(); ++i) {
    const Scalar p = d(i, 0);
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
      throw TrainingError(std::string(where) + ": score " + fmt(p) +
                          " outside [0, 1]");
    }
  }
}

std::vector<Activation> hidden_then(const std::vector<Index>& sizes,
                                    Activation last) {
  std::vector<Activation> acts(sizes.size() - 1, Activation::LeakyReLU);
  acts.back() = last;
  return acts;
}

}  // namespace

std::string to_string(GanLoss loss) {
  return loss == GanLoss::Saturating ? "saturating" : "non_saturating";
}

GanLoss gan_loss_from_string(const std::string& name) {
  if (name == "saturating") return GanLoss::Saturating;
  if (name == "non_saturating") return GanLoss::NonSaturating;
  throw ConfigError("unknown gan loss variant: " + name);
}

void GanConfig::validate() const {
  if (latent_dim < 1) throw ConfigError("gan latent_dim must be >= 1");
  if (generator_sizes.size() < 2 || discriminator_sizes.size() < 2) {
    throw ConfigError("gan networks need at least one weight layer");
  }
  if (generator_sizes.front() != latent_dim) {
    throw ConfigError("generator input dim must equal latent_dim");
  }
  if (discriminator_sizes.back() != 1) {
    throw ConfigError("discriminator must end in a single score unit");
  }
  if (generator_sizes.back() != discriminator_sizes.front()) {
    throw ConfigError(
        "generator output dim must match discriminator input dim");
  }
  for (Index d : generator_sizes) {
    if (d < 1) throw ConfigError("generator layer sizes must be positive");
  }
  for (Index d : discriminator_sizes) {
    if (d < 1) throw ConfigError("discriminator layer sizes must be positive");
  }
  if (disc_steps < 1) throw ConfigError("gan disc_steps must be >= 1");
  if (iterations < 0) throw ConfigError("gan iterations must be >= 0");
  if (minibatch < 1) throw ConfigError("gan minibatch must be >= 1");
  if (!(leaky_alpha > 0.0 && leaky_alpha < 1.0)) {
    throw ConfigError("gan leaky_alpha must be in (0, 1)");
  }
}

Scalar disc_loss(const MlpParams& theta_d, const Matrix& real_batch,
                 const Matrix& fake_batch, Gradients* grads) {
  if (real_batch.rows() == 0 || fake_batch.rows() == 0) {
    throw DataError("disc_loss: empty batch");
  }
  ForwardCache real_cache, fake_cache;
  Matrix d_real = forward(theta_d, real_batch, grads ? &real_cache : nullptr);
  Matrix d_fake = forward(theta_d, fake_batch, grads ? &fake_cache : nullptr);
  check_scores(d_real, "disc_loss");
  check_scores(d_fake, "disc_loss");

  const Scalar kr = Scalar(d_real.rows());
  const Scalar kf = Scalar(d_fake.rows());
  Scalar value = 0.0;
  for (Index i = 0; i < d_real.rows(); ++i) {
    value += std::log(clamp_prob(d_real(i, 0))) / kr;
  }
  for (Index i = 0; i < d_fake.rows(); ++i) {
    value += std::log(1.0 - clamp_prob(d_fake(i, 0))) / kf;
  }

  if (grads) {
    // d/dD mean log D = 1/(K D); d/dD mean log(1-D) = -1/(P (1-D)).
    // The clamp is pass-through, as in cross_entropy_grad.
    Matrix g_real(d_real.rows(), 1);
    for (Index i = 0; i < d_real.rows(); ++i) {
      g_real(i, 0) = 1.0 / (kr * clamp_prob(d_real(i, 0)));
    }
    Matrix g_fake(d_fake.rows(), 1);
    for (Index i = 0; i < d_fake.rows(); ++i) {
      g_fake(i, 0) = -1.0 / (kf * (1.0 - clamp_prob(d_fake(i, 0))));
    }
    *grads = add(backward(theta_d, real_cache, g_real),
                 backward(theta_d, fake_cache, g_fake));
  }
  return value;
}

Scalar gen_loss(const MlpParams& theta_g, const MlpParams& theta_d,
                const Matrix& z_batch, Gradients* gen_grads, GanLoss variant) {
  if (z_batch.rows() == 0) throw DataError("gen_loss: empty latent batch");
  ForwardCache g_cache, d_cache;
  Matrix fake = forward(theta_g, z_batch, gen_grads ? &g_cache : nullptr);
  Matrix d = forward(theta_d, fake, gen_grads ? &d_cache : nullptr);
  check_scores(d, "gen_loss");

  const Scalar n = Scalar(d.rows());
  Scalar value = 0.0;
  for (Index i = 0; i < d.rows(); ++i) {
    const Scalar p = clamp_prob(d(i, 0));
    value += (variant == GanLoss::Saturating ? std::log(1.0 - p)
                                             : -std::log(p)) /
             n;
  }

  if (gen_grads) {
    Matrix g(d.rows(), 1);
    for (Index i = 0; i < d.rows(); ++i) {
      const Scalar p = clamp_prob(d(i, 0));
      g(i, 0) = variant == GanLoss::Saturating ? -1.0 / (n * (1.0 - p))
                                               : -1.0 / (n * p);
    }
    // The discriminator is a fixed function here: its parameter gradients are
    // computed and dropped, only d(loss)/d(fake input) chains into G.
    Gradients through_d = backward(theta_d, d_cache, g);
    *gen_grads = backward(theta_g, g_cache, through_d.input);
  }
  return value;
}

GanModel train_gan(const ClassMatrix& real, const GanConfig& cfg) {
  cfg.validate();
  const Index k = real.values.rows();
  if (k == 0) throw DataError("train_gan: class has no samples");
  if (real.values.cols() != cfg.generator_sizes.back()) {
    throw DataError("train_gan: data has " +
                    std::to_string(real.values.cols()) +
                    " features but the generator emits " +
                    std::to_string(cfg.generator_sizes.back()));
  }

  Rng rng(cfg.seed);
  GanModel model;
  model.class_id = real.class_id;
  model.theta_g = make_mlp(cfg.generator_sizes,
                           hidden_then(cfg.generator_sizes,
                                       Activation::Identity),
                           rng, cfg.leaky_alpha);
  model.theta_d = make_mlp(cfg.discriminator_sizes,
                           hidden_then(cfg.discriminator_sizes,
                                       Activation::Sigmoid),
                           rng, cfg.leaky_alpha);

  AdamState g_state = AdamState::init(model.theta_g, cfg.gen_adam);
  AdamState d_state = AdamState::init(model.theta_d, cfg.disc_adam);
  const Index m = std::min(cfg.minibatch, k);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    Scalar ld = 0.0, mean_real = 0.0, mean_fake = 0.0;
    for (int step = 0; step < cfg.disc_steps; ++step) {
      Matrix real_mb(m, real.values.cols());
      for (Index r = 0; r < m; ++r) {
        real_mb.row(r) = real.values.row(
            static_cast<Index>(rng.index(static_cast<std::size_t>(k))));
      }
      Matrix z = rng.normal_matrix(m, cfg.latent_dim);
      Matrix fake = forward(model.theta_g, z);

      Gradients dg;
      ld = disc_loss(model.theta_d, real_mb, fake, &dg);
      if (!std::isfinite(ld)) {
        throw TrainingError("train_gan: discriminator loss " + fmt(ld) +
                            " at iteration " + std::to_string(iter));
      }
      if (step == cfg.disc_steps - 1) {
        mean_real = forward(model.theta_d, real_mb).mean();
        mean_fake = forward(model.theta_d, fake).mean();
      }
      scale(dg, -1.0);  // Adam minimizes; the discriminator ascends
      adam_step(model.theta_d, dg, d_state);
    }

    Matrix z = rng.normal_matrix(m, cfg.latent_dim);
    Gradients gg;
    const Scalar lg =
        gen_loss(model.theta_g, model.theta_d, z, &gg, cfg.loss_variant);
    if (!std::isfinite(lg)) {
      throw TrainingError("train_gan: generator loss " + fmt(lg) +
                          " at iteration " + std::to_string(iter) +
                          " (discriminator loss " + fmt(ld) + ")");
    }
    adam_step(model.theta_g, gg, g_state);

    model.trace.push_back({iter, ld, lg, mean_real, mean_fake});
  }
  return model;
}

SyntheticBlock generate(const GanModel& model, Index count, Rng& rng) {
  if (model.trace.empty()) {
    throw TrainingError("generate: model has no training trace");
  }
  if (count < 0) throw ConfigError("generate: count must be >= 0");
  SyntheticBlock block;
  block.class_id = model.class_id;
  const Index m = model.theta_g.output_dim();
  if (count == 0) {
    block.values = Matrix(0, m);
    return block;
  }
  Matrix z = rng.normal_matrix(count, model.theta_g.input_dim());
  block.values = forward(model.theta_g, z);
  return block;
}

ClassMatrix augment(const ClassMatrix& real, const SyntheticBlock& synth) {
  if (real.class_id != synth.class_id) {
    throw DataError("augment: class " + std::to_string(synth.class_id) +
                    " synthetic rows offered to class " +
                    std::to_string(real.class_id));
  }
  ClassMatrix out;
  out.class_id = real.class_id;
  if (synth.values.rows() == 0) {
    out.values = real.values;
    return out;
  }
  if (synth.values.cols() != real.values.cols()) {
    throw DataError("augment: width mismatch (" +
                    std::to_string(real.values.cols()) + " vs " +
                    std::to_string(synth.values.cols()) + ")");
  }
  out.values.resize(real.values.rows() + synth.values.rows(),
                    real.values.cols());
  out.values.topRows(real.values.rows()) = real.values;
  out.values.bottomRows(synth.values.rows()) = synth.values;
  return out;
}

void save_gan(std::ostream& out, const GanModel& model) {
  out << "ganloc-gan 1\n";
  out << "class " << model.class_id << '\n';
  out << "trace " << model.trace.size() << '\n';
  for (const GanTracePoint& t : model.trace) {
    out << t.iteration << ' ' << fmt(t.disc_loss) << ' ' << fmt(t.gen_loss)
        << ' ' << fmt(t.mean_d_real) << ' ' << fmt(t.mean_d_fake) << '\n';
  }
  out << "generator\n";
  save_mlp(out, model.theta_g);
  out << "discriminator\n";
  save_mlp(out, model.theta_d);
}

GanModel load_gan(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw DataError("gan file: " + what);
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ganloc-gan") {
    fail("bad magic");
  }
  if (version != 1) fail("unsupported version " + std::to_string(version));

  GanModel model;
  std::string token;
  std::size_t trace_len = 0;
  if (!(in >> token >> model.class_id) || token != "class") {
    fail("missing class id");
  }
  if (!(in >> token >> trace_len) || token != "trace") {
    fail("missing trace header");
  }
  model.trace.resize(trace_len);
  for (std::size_t i = 0; i < trace_len; ++i) {
    GanTracePoint& t = model.trace[i];
    if (!(in >> t.iteration >> t.disc_loss >> t.gen_loss >> t.mean_d_real >>
          t.mean_d_fake)) {
      fail("truncated trace");
    }
  }
  if (!(in >> token) || token != "generator") fail("missing generator block");
  model.theta_g = load_mlp(in);
  if (!(in >> token) || token != "discriminator") {
    fail("missing discriminator block");
  }
  model.theta_d = load_mlp(in);
  return model;
}

void save_gan_file(const std::filesystem::path& path, const GanModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  save_gan(out, model);
  if (!out.good()) throw DataError("failed writing " + path.string());
}

GanModel load_gan_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return load_gan(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<GanTracePoint>& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "iteration,disc_loss,gen_loss,mean_d_real,mean_d_fake\n";
  for (const GanTracePoint& t : trace) {
    out << t.iteration << ',' << fmt(t.disc_loss) << ',' << fmt(t.gen_loss)
        << ',' << fmt(t.mean_d_real) << ',' << fmt(t.mean_d_fake) << '\n';
  }
}

}  // namespace ganloc
