#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#ifndef AEROPIPE_SOURCE_DIR
#error "AEROPIPE_SOURCE_DIR must be defined by the build"
#endif

namespace testing {

inline std::filesystem::path source_dir() { return AEROPIPE_SOURCE_DIR; }

inline std::filesystem::path fixture_csv() {
  return source_dir() / "data" / "city_day_synthetic.csv";
}

inline std::filesystem::path golden(const std::string& name) {
  return source_dir() / "tests" / "golden" / name;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("aeropipe-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
