#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ganloc/fetch.hpp"
#include "ganloc/sha256.hpp"
#include "ganloc/types.hpp"

// keep last: the ssl headers pulled in here leak macros that mangle any
// templated code included after them
#include <httplib.h>

using namespace ganloc;
namespace fs = std::filesystem;

namespace {

// Loopback HTTP server for exercising fetch without a network.
class LocalServer {
 public:
  LocalServer() {
    server_.Get("/data.txt", [this](const httplib::Request&,
                                    httplib::Response& res) {
      ++hits_;
      res.set_content(payload_, "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  void set_payload(std::string p) { payload_ = std::move(p); }
  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/data.txt";
  }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::string payload_ = "server content\n";
  std::atomic<int> hits_{0};
  int port_ = 0;
  std::thread thread_;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ganloc_fetch_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("sha256_file digests the same bytes as sha256_hex") {
  TempDir dir;
  fs::path file = dir.path / "probe.bin";
  std::ofstream(file, std::ios::binary) << "abc";
  CHECK(sha256_file(file) == sha256_hex("abc"));
}

TEST_CASE("fresh fetch downloads and verifies") {
  LocalServer server;
  const std::string body = "server content\n";
  TempDir dir;
  FetchSpec spec;
  spec.url = server.url();
  spec.sha256 = sha256_hex(body);
  spec.target = dir.path / "dataset.txt";
  FetchResult result = fetch_dataset(spec);
  CHECK(result.downloaded);
  CHECK(result.sha256 == spec.sha256);
  CHECK(fs::exists(spec.target));
  std::ifstream in(spec.target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == body);
  CHECK(server.hits() == 1);
}

TEST_CASE("cached valid file short-circuits the network") {
  LocalServer server;
  const std::string body = "server content\n";
  TempDir dir;
  FetchSpec spec;
  spec.url = server.url();
  spec.sha256 = sha256_hex(body);
  spec.target = dir.path / "dataset.txt";
  std::ofstream(spec.target, std::ios::binary) << body;

  FetchResult result = fetch_dataset(spec);
  CHECK_FALSE(result.downloaded);
  CHECK(server.hits() == 0);

  // and it is idempotent
  FetchResult again = fetch_dataset(spec);
  CHECK_FALSE(again.downloaded);
  CHECK(server.hits() == 0);
}

TEST_CASE("corrupted download is quarantined with both digests named") {
  LocalServer server;
  server.set_payload("tampered bytes\n");
  TempDir dir;
  FetchSpec spec;
  spec.url = server.url();
  spec.sha256 = sha256_hex("what was expected\n");
  spec.target = dir.path / "dataset.txt";
  bool threw = false;
  try {
    fetch_dataset(spec);
  } catch (const DataError& e) {
    threw = true;
    const std::string what = e.what();
    CHECK(what.find(spec.sha256) != std::string::npos);
    CHECK(what.find(sha256_hex("tampered bytes\n")) != std::string::npos);
    CHECK(what.find("quarantined") != std::string::npos);
  }
  CHECK(threw);
  CHECK_FALSE(fs::exists(spec.target));
  CHECK(fs::exists(dir.path / "dataset.txt.quarantined"));
}

TEST_CASE("stale cache is replaced by a good download") {
  LocalServer server;
  const std::string body = "server content\n";
  TempDir dir;
  FetchSpec spec;
  spec.url = server.url();
  spec.sha256 = sha256_hex(body);
  spec.target = dir.path / "dataset.txt";
  std::ofstream(spec.target, std::ios::binary) << "old partial junk";

  FetchResult result = fetch_dataset(spec);
  CHECK(result.downloaded);
  CHECK(server.hits() == 1);
  CHECK(fs::exists(dir.path / "dataset.txt.quarantined"));
  CHECK(sha256_file(spec.target) == spec.sha256);
}

TEST_CASE("unreachable host is a DataError") {
  FetchSpec spec;
  spec.url = "http://127.0.0.1:1/never.txt";  // port 1: nothing listens
  spec.sha256 = sha256_hex("x");
  TempDir dir;
  spec.target = dir.path / "never.txt";
  CHECK_THROWS_AS(fetch_dataset(spec), DataError);
}

TEST_CASE("config holes are ConfigError") {
  FetchSpec no_digest;
  no_digest.url = "http://example.invalid/x";
  no_digest.target = "x";
  CHECK_THROWS_AS(fetch_dataset(no_digest), ConfigError);

  FetchSpec no_scheme;
  no_scheme.url = "example.invalid/x";
  no_scheme.sha256 = sha256_hex("x");
  no_scheme.target = "x";
  CHECK_THROWS_AS(fetch_dataset(no_scheme), ConfigError);
}
