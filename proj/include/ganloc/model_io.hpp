#pragma once

#include <filesystem>
#include <iosfwd>

#include "ganloc/mlp.hpp"

namespace ganloc {

// Versioned text model format ("ganloc-mlp 1", see docs/formats.md).
// Weights are written row-major with 17 significant digits, which round-trips
// IEEE doubles exactly.
void save_mlp(std::ostream& out, const MlpParams& params);
MlpParams load_mlp(std::istream& in);

void save_mlp_file(const std::filesystem::path& path, const MlpParams& params);
MlpParams load_mlp_file(const std::filesystem::path& path);

}  // namespace ganloc
