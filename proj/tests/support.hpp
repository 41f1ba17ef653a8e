#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "recode/image.hpp"
#include "recode/report.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return RECODE_SOURCE_DIR; }
inline std::filesystem::path lexicon_dir() { return source_dir() / "data" / "lexicons"; }
inline std::filesystem::path fake_plugin() { return source_dir() / "tests" / "fake_plugin.py"; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("recode-" + tag + "-" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string plugin_cmd(const std::string& mode, const std::string& protocol = "") {
  return "python3 '" + fake_plugin().string() + "' " + mode + (protocol.empty() ? "" : " " + protocol);
}

}  // namespace testing
