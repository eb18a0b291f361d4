// Deterministic generator for the bundled benchmark dataset: 2000 RSS
// fingerprints (500 per room) over 7 access points, written as integer dBm
// in the same TSV layout as the public wireless-localization benchmarks.
//
// Geometry: all rooms share the same propagation noise — a few wide
// directions (slow fading across the whole floor) plus a tight residual —
// and room identity is carried by mean offsets confined to the tight
// subspace. A regular tetrahedron of room centers sits inside that
// subspace, so every pair of rooms is equally far apart. The wide shared
// directions carry no room information; they only slow learning down.
// With the full survey a classifier saturates, while a thin slice of it
// leaves the fit visibly short of converged — matching the benchmark's
// character. An optional low-weight satellite mode per room (a second
// doorway/furniture regime) is available as a difficulty knob. Rerunning
// with the same arguments reproduces the file byte for byte.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "ganloc/rng.hpp"
#include "ganloc/types.hpp"

using ganloc::Index;
using ganloc::Matrix;
using ganloc::Rng;
using ganloc::RowVector;

namespace {

constexpr int kClasses = 4;
constexpr int kPerClass = 500;
constexpr int kAps = 7;
constexpr int kSignalDims = 3;  // trailing directions hold the room signal

// Typical signal levels per AP, dBm.
const double kBase[kAps] = {-58, -55, -62, -60, -57, -64, -61};

// Spread spectrum, shared by every room: the first four entries are the
// wide floor-wide fading directions, the last three the spread inside the
// signature subspace where the room means live.
double kSigma[kAps] = {12.0, 10.0, 9.0, 8.0, 2.5, 2.5, 2.5};

struct Knobs {
  double separation = 11.5;  // pairwise distance between room means
  double satellite_weight = 0.0;
  double satellite_offset = 8.0;
  double satellite_scale = 0.5;
};

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.transpose());
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

int clamp_dbm(double v) {
  const long r = std::lround(v);
  if (r < -95) return -95;
  if (r > -25) return -25;
  return static_cast<int>(r);
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_path = "data/benchmark.tsv";
  std::uint64_t seed = 74;
  Knobs knobs;
  if (argc > 1) out_path = argv[1];
  if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);
  if (argc > 3) knobs.separation = std::strtod(argv[3], nullptr);
  if (argc > 4) knobs.satellite_weight = std::strtod(argv[4], nullptr);
  if (argc > 5) knobs.satellite_offset = std::strtod(argv[5], nullptr);
  if (argc > 6) knobs.satellite_scale = std::strtod(argv[6], nullptr);
  if (argc > 7 + kAps - 1) {
    for (int a = 0; a < kAps; ++a) kSigma[a] = std::strtod(argv[7 + a], nullptr);
  }

  Rng layout_rng(ganloc::mix64(seed));
  const Matrix frame = random_orthogonal(kAps, layout_rng);  // rows = dirs

  // Room means: a regular tetrahedron spanning the signature subspace
  // (the last kSignalDims rows of the frame).
  const double tetra[kClasses][kSignalDims] = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  const double edge = 2.0 * std::sqrt(2.0 / 3.0);  // tetra edge at radius 1
  Matrix means(kClasses, kAps);
  for (int c = 0; c < kClasses; ++c) {
    RowVector m = RowVector::Zero(kAps);
    for (int k = 0; k < kSignalDims; ++k) {
      m += tetra[c][k] / std::sqrt(3.0) * knobs.separation / edge *
           frame.row(kAps - kSignalDims + k);
    }
    for (int a = 0; a < kAps; ++a) means(c, a) = kBase[a] + m(a);
  }

  // Satellite offsets point from each room toward the next one, inside the
  // signature subspace, so the secondary regime of one room sits in the
  // border region of another.
  Matrix satellite(kClasses, kAps);
  for (int c = 0; c < kClasses; ++c) {
    RowVector dir = means.row((c + 1) % kClasses) - means.row(c);
    satellite.row(c) = dir / dir.norm() * knobs.satellite_offset;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
    return 1;
  }
  for (int c = 0; c < kClasses; ++c) {
    Rng rng(ganloc::mix64(seed ^ ((0x202u + c) << 8)));
    for (int i = 0; i < kPerClass; ++i) {
      const bool sat = rng.uniform() < knobs.satellite_weight;
      RowVector x = means.row(c);
      for (int k = 0; k < kAps; ++k) {
        const double tight = sat ? knobs.satellite_scale : 1.0;
        x += rng.normal() * kSigma[k] * tight * frame.row(k);
      }
      if (sat) x += satellite.row(c);
      for (int a = 0; a < kAps; ++a) {
        out << clamp_dbm(x(a)) << '\t';
      }
      out << (c + 1) << '\n';
    }
  }
  out.close();

  std::fprintf(stderr,
               "wrote %d samples to %s (seed %llu, sep %.1f, sat %.2f)\n",
               kClasses * kPerClass, out_path.c_str(),
               static_cast<unsigned long long>(seed), knobs.separation,
               knobs.satellite_weight);
  for (int c = 0; c < kClasses; ++c) {
    std::string line = "room " + std::to_string(c + 1) + " mean:";
    for (int a = 0; a < kAps; ++a) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), " %.1f", means(c, a));
      line += buf;
    }
    std::fprintf(stderr, "%s\n", line.c_str());
  }
  return 0;
}
