#pragma once

#include <filesystem>
#include <string>

namespace ganloc {

struct FetchSpec {
  std::string url;     // http:// or https://
  std::string sha256;  // expected digest, lowercase hex
  std::filesystem::path target;
};

struct FetchResult {
  std::filesystem::path path;
  bool downloaded = false;  // false on a cache hit
  std::string sha256;
};

// Idempotent checked download. A target file whose digest already matches is
// accepted without touching the network. Any file failing verification is
// moved to "<target>.quarantined" and the error names both digests.
FetchResult fetch_dataset(const FetchSpec& spec);

}  // namespace ganloc
