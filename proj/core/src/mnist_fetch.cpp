#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>

#include <curl/curl.h>
#include <zlib.h>

#include "datasignal/mnist.hpp"

namespace datasignal::mnist {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::uintmax_t>& canonical_sizes() {
  static const std::map<std::string, std::uintmax_t> sizes{
      {"train-images-idx3-ubyte", 16 + 60000ULL * kPixels},
      {"train-labels-idx1-ubyte", 8 + 60000ULL},
      {"t10k-images-idx3-ubyte", 16 + 10000ULL * kPixels},
      {"t10k-labels-idx1-ubyte", 8 + 10000ULL},
  };
  return sizes;
}

bool has_size(const fs::path& path, std::uintmax_t size) {
  std::error_code ec;
  return fs::is_regular_file(path, ec) && fs::file_size(path, ec) == size && !ec;
}

std::size_t write_to_stream(char* data, std::size_t size, std::size_t nmemb, void* user) {
  auto* out = static_cast<std::ofstream*>(user);
  out->write(data, static_cast<std::streamsize>(size * nmemb));
  return *out ? size * nmemb : 0;
}

// Returns false on HTTP errors (e.g. 404) so the caller can try another name;
// throws NetworkError when the transfer itself fails.
bool download(const std::string& url, const fs::path& target) {
  static const CURLcode init = curl_global_init(CURL_GLOBAL_DEFAULT);
  if (init != CURLE_OK) throw Error(ErrorCode::NetworkError, "curl initialisation failed");

  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw Error(ErrorCode::NetworkError, "curl_easy_init failed");
  const fs::path partial = target.string() + ".part";
  long status = 0;
  CURLcode rc = CURLE_OK;
  {
    std::ofstream out(partial, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + partial.string());
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_CONNECTTIMEOUT, 20L);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, write_to_stream);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &out);
    rc = curl_easy_perform(curl.get());
    curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
  }
  if (rc != CURLE_OK) {
    fs::remove(partial);
    throw Error(ErrorCode::NetworkError, url + ": " + curl_easy_strerror(rc));
  }
  if (status >= 400) {
    fs::remove(partial);
    return false;
  }
  fs::rename(partial, target);
  return true;
}

void gunzip(const fs::path& source, const fs::path& target) {
  gzFile in = gzopen(source.string().c_str(), "rb");
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + source.string());
  std::ofstream out(target, std::ios::binary);
  std::vector<char> buffer(1 << 16);
  int n = 0;
  while ((n = gzread(in, buffer.data(), static_cast<unsigned>(buffer.size()))) > 0) {
    out.write(buffer.data(), n);
  }
  const bool ok = n == 0;
  gzclose(in);
  if (!ok || !out) throw Error(ErrorCode::ChecksumMismatch, source.string() + " is not a valid gzip stream");
}

fs::path ensure_file(const fs::path& cache_dir, const std::string& base_url, const std::string& name) {
  const std::uintmax_t size = canonical_sizes().at(name);
  const fs::path raw = cache_dir / name;
  if (has_size(raw, size)) return raw;

  const fs::path gz = cache_dir / (name + ".gz");
  if (!fs::exists(gz)) {
    std::string base = base_url;
    while (!base.empty() && base.back() == '/') base.pop_back();
    if (!download(base + "/" + name + ".gz", gz) && !download(base + "/" + name, raw)) {
      throw Error(ErrorCode::NetworkError, base + " serves neither " + name + ".gz nor " + name);
    }
  }
  if (fs::exists(gz)) gunzip(gz, raw);
  if (!has_size(raw, size)) {
    throw Error(ErrorCode::ChecksumMismatch, name + " does not have the expected " + std::to_string(size) +
                                                 " bytes");
  }
  return raw;
}

}  // namespace

std::uintmax_t expected_file_size(const std::string& name) {
  auto it = canonical_sizes().find(name);
  if (it == canonical_sizes().end()) throw Error(ErrorCode::InvalidArgument, "unknown MNIST file " + name);
  return it->second;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("DATASIGNAL_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "datasignal" / "mnist";
  }
  return fs::path(".cache") / "datasignal" / "mnist";
}

MnistFiles fetch_mnist(const std::filesystem::path& cache_dir, const std::string& base_url) {
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + cache_dir.string());
  MnistFiles files;
  files.train_images = ensure_file(cache_dir, base_url, "train-images-idx3-ubyte");
  files.train_labels = ensure_file(cache_dir, base_url, "train-labels-idx1-ubyte");
  files.test_images = ensure_file(cache_dir, base_url, "t10k-images-idx3-ubyte");
  files.test_labels = ensure_file(cache_dir, base_url, "t10k-labels-idx1-ubyte");
  return files;
}

}  // namespace datasignal::mnist
