#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ganloc/adam.hpp"
#include "ganloc/dataset.hpp"
#include "ganloc/mlp.hpp"
#include "ganloc/rng.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

// Saturating minimizes mean log(1 - D(G(z))); NonSaturating minimizes
// -mean log D(G(z)) instead, which gives stronger gradients when the
// discriminator wins early. Saturating is the default.
enum class GanLoss { Saturating, NonSaturating };

std::string to_string(GanLoss loss);
GanLoss gan_loss_from_string(const std::string& name);

struct GanConfig {
  Index latent_dim = 16;
  std::vector<Index> generator_sizes{16, 32, 32, 7};
  std::vector<Index> discriminator_sizes{7, 32, 16, 1};
  int disc_steps = 1;  // discriminator updates per generator update
  int iterations = 3000;
  Index minibatch = 32;
  AdamConfig gen_adam{};
  AdamConfig disc_adam{};
  std::uint64_t seed = 1;
  GanLoss loss_variant = GanLoss::Saturating;
  Scalar leaky_alpha = 0.2;

  void validate() const;
};

struct GanTracePoint {
  int iteration = 0;
  Scalar disc_loss = 0.0;
  Scalar gen_loss = 0.0;
  Scalar mean_d_real = 0.0;
  Scalar mean_d_fake = 0.0;
};

struct GanModel {
  MlpParams theta_g;
  MlpParams theta_d;
  int class_id = 0;
  std::vector<GanTracePoint> trace;
};

// One synthetic per-class block, standardized space, produced by generate().
struct SyntheticBlock {
  int class_id = 0;
  Matrix values;
};

// Discriminator objective (maximized during training):
//   mean log D(real) + mean log(1 - D(fake)).
// Outputs are clamped like every probability in this codebase; values outside
// [0, 1] mean the network is not a discriminator and raise TrainingError.
// When grads is non-null it receives d(value)/d(theta_d).
Scalar disc_loss(const MlpParams& theta_d, const Matrix& real_batch,
                 const Matrix& fake_batch, Gradients* grads = nullptr);

// Generator objective (minimized). Gradients flow through the generator
// only; theta_d is a fixed function during this step.
Scalar gen_loss(const MlpParams& theta_g, const MlpParams& theta_d,
                const Matrix& z_batch, Gradients* gen_grads = nullptr,
                GanLoss variant = GanLoss::Saturating);

// Alternating Adam: cfg.disc_steps ascent steps on the discriminator
// objective, then one descent step on the generator objective, for
// cfg.iterations rounds. Real minibatches are drawn with replacement.
GanModel train_gan(const ClassMatrix& real, const GanConfig& cfg);

// count x M standardized samples from the trained generator.
SyntheticBlock generate(const GanModel& model, Index count, Rng& rng);

// Row-wise concatenation, real rows first: (K + P) x M.
ClassMatrix augment(const ClassMatrix& real, const SyntheticBlock& synth);

// Versioned container ("ganloc-gan 1") holding both networks, the class id,
// and the training trace.
void save_gan(std::ostream& out, const GanModel& model);
GanModel load_gan(std::istream& in);
void save_gan_file(const std::filesystem::path& path, const GanModel& model);
GanModel load_gan_file(const std::filesystem::path& path);

// Trace export: iteration, disc_loss, gen_loss, mean_d_real, mean_d_fake.
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<GanTracePoint>& trace);

}  // namespace ganloc
