#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mtkit::cli {

/// Output directory of one command run. Files are written atomically and listed with
/// their digests in run.json; a `.failed` marker is left when the run does not finish.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string command, std::string config_digest);

  const std::filesystem::path& path() const { return dir_; }
  const std::string& config_digest() const { return config_digest_; }

  void write(const std::string& name, std::string_view contents);
  /// Records a file written by someone else (already in place).
  void adopt(const std::string& name);
  void input(const std::string& label, const std::filesystem::path& file);
  nlohmann::ordered_json& info() { return info_; }
  /// Writes run.json and clears a stale failure marker.
  void finish();

  static void mark_failed(const std::filesystem::path& dir, std::string_view message);

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::string config_digest_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, std::string> inputs_;
  nlohmann::ordered_json info_ = nlohmann::ordered_json::object();
};

}  // namespace mtkit::cli
