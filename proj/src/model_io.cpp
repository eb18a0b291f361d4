#include "ganloc/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace ganloc {

namespace {

constexpr const char* kMagic = "ganloc-mlp";
constexpr int kVersion = 1;

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(const std::string& what) {
  throw DataError("model file: " + what);
}

}  // namespace

void save_mlp(std::ostream& out, const MlpParams& params) {
  params.validate();
  out << kMagic << ' ' << kVersion << '\n';
  out << "layers " << params.layers.size() << '\n';
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const DenseLayer& l = params.layers[i];
    out << "layer " << i << ' ' << l.in_dim() << ' ' << l.out_dim() << ' '
        << to_string(l.activation) << ' ' << fmt(l.leaky_alpha) << '\n';
    for (Index r = 0; r < l.in_dim(); ++r) {
      for (Index c = 0; c < l.out_dim(); ++c) {
        out << (c > 0 ? " " : "") << fmt(l.weights(r, c));
      }
      out << '\n';
    }
    for (Index c = 0; c < l.out_dim(); ++c) {
      out << (c > 0 ? " " : "") << fmt(l.bias(c));
    }
    out << '\n';
  }
  out << "end\n";
}

MlpParams load_mlp(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version)) {
    parse_error("missing header");
  }
  if (magic != kMagic) {
    parse_error("bad magic '" + magic + "'");
  }
  if (version != kVersion) {
    parse_error("unsupported version " + std::to_string(version));
  }
  std::string token;
  std::size_t n_layers = 0;
  if (!(in >> token >> n_layers) || token != "layers" || n_layers == 0) {
    parse_error("bad layer count");
  }
  MlpParams params;
  params.layers.reserve(n_layers);
  for (std::size_t i = 0; i < n_layers; ++i) {
    std::size_t idx = 0;
    Index in_dim = 0, out_dim = 0;
    std::string act_name;
    Scalar alpha = 0.0;
    if (!(in >> token >> idx >> in_dim >> out_dim >> act_name >> alpha) ||
        token != "layer" || idx != i || in_dim < 1 || out_dim < 1) {
      parse_error("bad layer header at layer " + std::to_string(i));
    }
    DenseLayer layer;
    layer.activation = activation_from_string(act_name);
    layer.leaky_alpha = alpha;
    layer.weights = Matrix(in_dim, out_dim);
    for (Index r = 0; r < in_dim; ++r) {
      for (Index c = 0; c < out_dim; ++c) {
        if (!(in >> layer.weights(r, c))) {
          parse_error("truncated weights at layer " + std::to_string(i));
        }
      }
    }
    layer.bias = RowVector(out_dim);
    for (Index c = 0; c < out_dim; ++c) {
      if (!(in >> layer.bias(c))) {
        parse_error("truncated bias at layer " + std::to_string(i));
      }
    }
    params.layers.push_back(std::move(layer));
  }
  if (!(in >> token) || token != "end") {
    parse_error("missing end marker");
  }
  params.validate();
  return params;
}

void save_mlp_file(const std::filesystem::path& path,
                   const MlpParams& params) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  save_mlp(out, params);
  if (!out) {
    throw DataError("write failed: " + path.string());
  }
}

MlpParams load_mlp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open model file: " + path.string());
  }
  try {
    return load_mlp(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace ganloc
