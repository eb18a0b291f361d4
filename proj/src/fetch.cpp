#include "ganloc/fetch.hpp"

#include <fstream>

#include "ganloc/sha256.hpp"
#include "ganloc/types.hpp"

// keep last: the ssl headers pulled in here leak macros that mangle any
// templated code included after them
#include <httplib.h>

namespace ganloc {

namespace {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("fetch: url has no scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::filesystem::path quarantine(const std::filesystem::path& file) {
  std::filesystem::path aside = file;
  aside += ".quarantined";
  std::filesystem::rename(file, aside);
  return aside;
}

}  // namespace

FetchResult fetch_dataset(const FetchSpec& spec) {
  if (spec.sha256.empty()) {
    throw ConfigError("fetch: no expected sha256 configured");
  }
  if (spec.target.empty()) {
    throw ConfigError("fetch: no target path configured");
  }

  if (std::filesystem::exists(spec.target)) {
    const std::string actual = sha256_file(spec.target);
    if (actual == spec.sha256) {
      return {spec.target, false, actual};
    }
    // Stale or corrupt cache: move it aside and fall through to a fresh
    // download.
    quarantine(spec.target);
  }

  UrlParts parts = split_url(spec.url);
  httplib::Client client(parts.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(30);
  client.set_read_timeout(60);
  httplib::Result res = client.Get(parts.path);
  if (!res) {
    throw DataError("fetch: request to " + spec.url +
                    " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataError("fetch: " + spec.url + " returned status " +
                    std::to_string(res->status));
  }

  if (spec.target.has_parent_path()) {
    std::filesystem::create_directories(spec.target.parent_path());
  }
  {
    std::ofstream out(spec.target, std::ios::binary);
    if (!out) throw DataError("fetch: cannot write " + spec.target.string());
    out.write(res->body.data(),
              static_cast<std::streamsize>(res->body.size()));
    if (!out.good()) {
      throw DataError("fetch: failed writing " + spec.target.string());
    }
  }

  const std::string actual = sha256_file(spec.target);
  if (actual != spec.sha256) {
    const std::filesystem::path aside = quarantine(spec.target);
    throw DataError("fetch: checksum mismatch for " + spec.url +
                    ": expected " + spec.sha256 + ", actual " + actual +
                    "; file quarantined at " + aside.string());
  }
  return {spec.target, true, actual};
}

}  // namespace ganloc
