#pragma once

// SuiteSparse Matrix Collection client. Needs libcurl and zlib at link time.

#include <curl/curl.h>
#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "frcn/graph.hpp"

namespace frcn {

class FetchError : public Error {
 public:
  enum class Kind { network, unknown_matrix, corrupt_archive, size_mismatch };

  FetchError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }
  bool retryable() const { return kind_ == Kind::network || kind_ == Kind::size_mismatch; }

 private:
  Kind kind_;
};

struct SuiteSparseConfig {
  // `{group}` and `{name}` are substituted.
  std::string url_template = "https://sparse.tamu.edu/MM/{group}/{name}.tar.gz";
  std::filesystem::path cache_dir;
  int attempts = 3;
  long timeout_seconds = 120;

  static constexpr const char* kUrlEnv = "FRCN_SUITESPARSE_URL";
  static constexpr const char* kCacheEnv = "FRCN_CACHE_DIR";

  // Defaults overridden by FRCN_SUITESPARSE_URL and FRCN_CACHE_DIR.
  static SuiteSparseConfig from_environment() {
    SuiteSparseConfig cfg;
    if (const char* url = std::getenv(kUrlEnv); url && *url) cfg.url_template = url;
    if (const char* dir = std::getenv(kCacheEnv); dir && *dir) {
      cfg.cache_dir = dir;
    } else if (const char* home = std::getenv("HOME"); home && *home) {
      cfg.cache_dir = std::filesystem::path(home) / ".cache" / "frcn";
    } else {
      cfg.cache_dir = std::filesystem::temp_directory_path() / "frcn-cache";
    }
    return cfg;
  }
};

// Collection group of the matrices used in the experiments, so they can be
// named without a group prefix.
inline std::string known_matrix_group(std::string_view name) {
  static const std::vector<std::pair<std::string_view, std::string_view>> table{
      {"jagmesh1", "HB"},   {"dwt_1005", "HB"},         {"1138_bus", "HB"},         {"dwt_2680", "HB"},
      {"dwt_992", "HB"},    {"3elt", "AG-Monien"},      {"collins_15NN", "ML_Graph"}, {"Spectro_10NN", "ML_Graph"},
      {"can_96", "HB"},     {"bcsstk01", "HB"},
  };
  for (const auto& [n, g] : table)
    if (n == name) return std::string(g);
  return {};
}

namespace detail {

inline std::string substitute(std::string text, std::string_view key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
    text.replace(pos, key.size(), value);
  return text;
}

inline std::vector<unsigned char> read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<unsigned char> gunzip(const std::vector<unsigned char>& data) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw FetchError(FetchError::Kind::corrupt_archive, "gzip: inflateInit failed");
  std::vector<unsigned char> out;
  std::vector<unsigned char> chunk(1 << 16);
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk.data();
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw FetchError(FetchError::Kind::corrupt_archive, "gzip: corrupt stream");
    }
    out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw FetchError(FetchError::Kind::corrupt_archive, "gzip: truncated stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

inline std::uint64_t parse_octal(const unsigned char* field, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len && field[i]; ++i) {
    if (field[i] == ' ') continue;
    if (field[i] < '0' || field[i] > '7') throw FetchError(FetchError::Kind::corrupt_archive, "tar: bad octal field");
    v = v * 8 + (field[i] - '0');
  }
  return v;
}

inline std::string cstr_field(const unsigned char* field, std::size_t len) {
  std::size_t n = 0;
  while (n < len && field[n]) ++n;
  return {reinterpret_cast<const char*>(field), n};
}

// Returns the contents of the first member whose path is `wanted` or ends in
// `/wanted`. Understands ustar prefixes, GNU long names and pax `path=`.
inline std::optional<std::string> tar_member(const std::vector<unsigned char>& tar, const std::string& wanted) {
  std::size_t off = 0;
  std::string long_name;
  while (off + 512 <= tar.size()) {
    const unsigned char* h = tar.data() + off;
    if (std::all_of(h, h + 512, [](unsigned char c) { return c == 0; })) return std::nullopt;
    const auto size = parse_octal(h + 124, 12);
    const char type = static_cast<char>(h[156]);
    std::string name = cstr_field(h, 100);
    if (cstr_field(h + 257, 5) == "ustar") {
      const auto prefix = cstr_field(h + 345, 155);
      if (!prefix.empty()) name = prefix + "/" + name;
    }
    const std::size_t data = off + 512;
    if (data + size > tar.size()) throw FetchError(FetchError::Kind::corrupt_archive, "tar: member exceeds archive");
    const std::string body(reinterpret_cast<const char*>(tar.data() + data), size);
    off = data + (size + 511) / 512 * 512;
    if (type == 'L') {
      long_name = cstr_field(reinterpret_cast<const unsigned char*>(body.data()), body.size());
      continue;
    }
    if (type == 'x') {
      std::istringstream records(body);
      for (std::string rec; std::getline(records, rec);) {
        const auto key = rec.find(" path=");
        if (key != std::string::npos) long_name = rec.substr(key + 6);
      }
      continue;
    }
    if (!long_name.empty()) {
      name = long_name;
      long_name.clear();
    }
    const bool regular = type == '0' || type == '\0';
    if (regular && (name == wanted || (name.size() > wanted.size() && name.ends_with("/" + wanted)))) return body;
  }
  return std::nullopt;
}

inline void curl_global() {
  static const bool init = [] {
    curl_global_init(CURL_GLOBAL_DEFAULT);
    return true;
  }();
  (void)init;
}

inline std::size_t curl_write(char* ptr, std::size_t size, std::size_t nmemb, void* userdata) {
  auto* out = static_cast<std::ofstream*>(userdata);
  out->write(ptr, static_cast<std::streamsize>(size * nmemb));
  return *out ? size * nmemb : 0;
}

// Single download attempt of `url` into `dest`.
inline void download_once(const std::string& url, const std::filesystem::path& dest, long timeout_seconds) {
  curl_global();
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw FetchError(FetchError::Kind::network, "cannot create '" + dest.string() + "'");
  CURL* curl = curl_easy_init();
  if (!curl) throw FetchError(FetchError::Kind::network, "curl_easy_init failed");
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_TIMEOUT, timeout_seconds);
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, curl_write);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &out);
  const CURLcode rc = curl_easy_perform(curl);
  long status = 0;
  curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &status);
  curl_off_t expected = -1;
  curl_easy_getinfo(curl, CURLINFO_CONTENT_LENGTH_DOWNLOAD_T, &expected);
  curl_easy_cleanup(curl);
  out.close();

  if (rc == CURLE_FILE_COULDNT_READ_FILE || (rc == CURLE_HTTP_RETURNED_ERROR && status == 404))
    throw FetchError(FetchError::Kind::unknown_matrix, "no such matrix at " + url);
  if (rc != CURLE_OK)
    throw FetchError(FetchError::Kind::network, std::string("download failed: ") + curl_easy_strerror(rc) + " (" + url + ")");
  const auto got = std::filesystem::file_size(dest);
  if (expected >= 0 && static_cast<std::uintmax_t>(expected) != got)
    throw FetchError(FetchError::Kind::size_mismatch, "download size mismatch for " + url + ": expected " +
                                                          std::to_string(expected) + " bytes, got " + std::to_string(got));
}

}  // namespace detail

// Path of the cached archive for group/name.
inline std::filesystem::path suitesparse_cache_path(const SuiteSparseConfig& cfg, const std::string& group,
                                                    const std::string& name) {
  return cfg.cache_dir / group / (name + ".tar.gz");
}

// Downloads (or reuses the cached) Matrix Market archive of group/name and
// parses `<name>/<name>.mtx` from it. Downloads land in a temporary file and
// are renamed into the cache, so concurrent processes never see partial files.
inline Graph fetch_suitesparse(const std::string& group, const std::string& name, const SuiteSparseConfig& cfg) {
  if (group.empty() || name.empty() || name.find('/') != std::string::npos || group.find('/') != std::string::npos)
    throw FetchError(FetchError::Kind::unknown_matrix, "invalid matrix name '" + group + "/" + name + "'");
  const auto cached = suitesparse_cache_path(cfg, group, name);
  if (!std::filesystem::exists(cached)) {
    std::filesystem::create_directories(cached.parent_path());
    const std::string url =
        detail::substitute(detail::substitute(cfg.url_template, "{group}", group), "{name}", name);
    std::random_device rd;
    auto part = cached;
    part += ".part" + std::to_string(rd());
    for (int attempt = 1;; ++attempt) {
      try {
        detail::download_once(url, part, cfg.timeout_seconds);
        break;
      } catch (const FetchError& e) {
        std::error_code ec;
        std::filesystem::remove(part, ec);
        if (!e.retryable() || attempt >= cfg.attempts) throw;
        std::this_thread::sleep_for(std::chrono::seconds(attempt));
      }
    }
    std::filesystem::rename(part, cached);
  }

  try {
    const auto tar = detail::gunzip(detail::read_binary(cached));
    const auto member = detail::tar_member(tar, name + ".mtx");
    if (!member) throw FetchError(FetchError::Kind::corrupt_archive, "archive lacks " + name + ".mtx");
    return parse_matrix_market(*member);
  } catch (const FetchError&) {
    std::error_code ec;
    std::filesystem::remove(cached, ec);
    throw;
  } catch (const ParseError& e) {
    std::error_code ec;
    std::filesystem::remove(cached, ec);
    throw FetchError(FetchError::Kind::corrupt_archive, name + ".mtx: " + e.what());
  }
}

// Accepts `Group/name` or a bare name from the built-in table.
inline Graph fetch_suitesparse(const std::string& qualified, const SuiteSparseConfig& cfg) {
  const auto slash = qualified.find('/');
  if (slash != std::string::npos) return fetch_suitesparse(qualified.substr(0, slash), qualified.substr(slash + 1), cfg);
  const auto group = known_matrix_group(qualified);
  if (group.empty())
    throw FetchError(FetchError::Kind::unknown_matrix, "unknown matrix '" + qualified + "' (use Group/name)");
  return fetch_suitesparse(group, qualified, cfg);
}

}  // namespace frcn
