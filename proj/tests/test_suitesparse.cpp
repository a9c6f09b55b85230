#include <gtest/gtest.h>
#include <unistd.h>
#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "frcn/suitesparse.hpp"

using namespace frcn;
namespace fs = std::filesystem;

namespace {

// Minimal ustar archive holding one regular file.
std::string ustar(const std::string& member, const std::string& body) {
  std::string header(512, '\0');
  std::memcpy(header.data(), member.data(), std::min<std::size_t>(member.size(), 100));
  std::snprintf(header.data() + 100, 8, "%07o", 0644);
  std::snprintf(header.data() + 108, 8, "%07o", 0);
  std::snprintf(header.data() + 116, 8, "%07o", 0);
  std::snprintf(header.data() + 124, 12, "%011lo", static_cast<unsigned long>(body.size()));
  std::snprintf(header.data() + 136, 12, "%011o", 0);
  header[156] = '0';
  std::memcpy(header.data() + 257, "ustar", 6);
  std::memcpy(header.data() + 263, "00", 2);
  std::memset(header.data() + 148, ' ', 8);
  unsigned sum = 0;
  for (unsigned char c : header) sum += c;
  std::snprintf(header.data() + 148, 8, "%06o", sum);
  std::string out = header + body;
  out.resize((out.size() + 511) / 512 * 512, '\0');
  out.append(1024, '\0');
  return out;
}

void write_gzip(const fs::path& path, const std::string& data) {
  gzFile f = gzopen(path.string().c_str(), "wb");
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(gzwrite(f, data.data(), static_cast<unsigned>(data.size())), static_cast<int>(data.size()));
  gzclose(f);
}

const char* kPath4 =
    "%%MatrixMarket matrix coordinate pattern symmetric\n"
    "4 4 3\n2 1\n3 2\n4 3\n";

class FetchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("frcn_fetch_" + std::to_string(::getpid()) + "_" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_ / "server" / "Test");
    cfg_.url_template = "file://" + (root_ / "server").string() + "/{group}/{name}.tar.gz";
    cfg_.cache_dir = root_ / "cache";
    cfg_.attempts = 1;
  }
  void TearDown() override { fs::remove_all(root_); }

  void publish(const std::string& name, const std::string& mtx) {
    write_gzip(root_ / "server" / "Test" / (name + ".tar.gz"), ustar(name + "/" + name + ".mtx", mtx));
  }

  fs::path root_;
  SuiteSparseConfig cfg_;
};

}  // namespace

TEST_F(FetchTest, DownloadsParsesAndCaches) {
  publish("path4", kPath4);
  const auto g = fetch_suitesparse("Test", "path4", cfg_);
  EXPECT_EQ(g.num_vertices(), 4);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_TRUE(fs::exists(suitesparse_cache_path(cfg_, "Test", "path4")));
}

TEST_F(FetchTest, WarmCacheNeedsNoServer) {
  publish("path4", kPath4);
  const auto first = fetch_suitesparse("Test/path4", cfg_);
  fs::remove_all(root_ / "server");
  EXPECT_EQ(fetch_suitesparse("Test/path4", cfg_), first);
}

TEST_F(FetchTest, UnknownMatrix) {
  try {
    fetch_suitesparse("Test", "no_such_matrix", cfg_);
    FAIL() << "expected FetchError";
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchError::Kind::unknown_matrix);
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_THROW(fetch_suitesparse("no_such_matrix", cfg_), FetchError);
  EXPECT_FALSE(fs::exists(suitesparse_cache_path(cfg_, "Test", "no_such_matrix")));
}

TEST_F(FetchTest, CorruptArchiveIsEvicted) {
  std::ofstream(root_ / "server" / "Test" / "junk.tar.gz") << "not a gzip stream";
  try {
    fetch_suitesparse("Test", "junk", cfg_);
    FAIL() << "expected FetchError";
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchError::Kind::corrupt_archive);
  }
  EXPECT_FALSE(fs::exists(suitesparse_cache_path(cfg_, "Test", "junk")));
}

TEST_F(FetchTest, MissingMemberIsCorrupt) {
  write_gzip(root_ / "server" / "Test" / "other.tar.gz", ustar("other/readme.txt", "hello"));
  try {
    fetch_suitesparse("Test", "other", cfg_);
    FAIL() << "expected FetchError";
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchError::Kind::corrupt_archive);
  }
}

TEST(SuiteSparse, KnownGroups) {
  EXPECT_EQ(known_matrix_group("jagmesh1"), "HB");
  EXPECT_EQ(known_matrix_group("3elt"), "AG-Monien");
  EXPECT_EQ(known_matrix_group("nope"), "");
}

TEST(SuiteSparse, EnvironmentOverrides) {
  ::setenv(SuiteSparseConfig::kUrlEnv, "file:///x/{group}/{name}.tgz", 1);
  ::setenv(SuiteSparseConfig::kCacheEnv, "/tmp/frcn-env-cache", 1);
  const auto cfg = SuiteSparseConfig::from_environment();
  EXPECT_EQ(cfg.url_template, "file:///x/{group}/{name}.tgz");
  EXPECT_EQ(cfg.cache_dir, fs::path("/tmp/frcn-env-cache"));
  ::unsetenv(SuiteSparseConfig::kUrlEnv);
  ::unsetenv(SuiteSparseConfig::kCacheEnv);
}

TEST(SuiteSparse, TarParsesOctalAndPrefix) {
  const std::string tar = ustar("dir/a.mtx", "payload");
  const std::vector<unsigned char> bytes(tar.begin(), tar.end());
  EXPECT_EQ(detail::tar_member(bytes, "a.mtx"), std::optional<std::string>("payload"));
  EXPECT_FALSE(detail::tar_member(bytes, "b.mtx").has_value());
}

// Real downloads need network access; opt in with FRCN_NETWORK_TESTS=1.
TEST(SuiteSparseNetwork, Jagmesh1) {
  if (!std::getenv("FRCN_NETWORK_TESTS")) GTEST_SKIP() << "set FRCN_NETWORK_TESTS=1 to run";
  auto cfg = SuiteSparseConfig::from_environment();
  const auto g = fetch_suitesparse("HB", "jagmesh1", cfg);
  EXPECT_EQ(g.num_vertices(), 936);
  EXPECT_EQ(g.num_edges(), 2664u);
  EXPECT_NEAR(100.0 * g.sparsity(), 0.609, 5e-4);
  EXPECT_EQ(fetch_suitesparse("HB", "jagmesh1", cfg), g);
}

TEST(SuiteSparseNetwork, Dwt1005) {
  if (!std::getenv("FRCN_NETWORK_TESTS")) GTEST_SKIP() << "set FRCN_NETWORK_TESTS=1 to run";
  const auto g = fetch_suitesparse("dwt_1005", SuiteSparseConfig::from_environment());
  EXPECT_EQ(g.num_vertices(), 1005);
  EXPECT_EQ(g.num_edges(), 3808u);
}
