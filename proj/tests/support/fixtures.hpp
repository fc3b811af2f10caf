#pragma once

#include <filesystem>
#include <string>

namespace esrinet::testing {

inline std::filesystem::path fixture_dir(const char* name) {
  return std::filesystem::path(ESRINET_FIXTURE_DIR) / name;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("esrinet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace esrinet::testing
