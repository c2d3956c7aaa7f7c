#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace imdd::cli {

/// Record of one CLI run, written next to its first output file as
/// `<output>.manifest.json` unless an explicit path is given.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand);

  nlohmann::json& parameters() { return parameters_; }
  void add_seed(std::uint64_t seed) { seeds_.push_back(seed); }
  void add_output(const std::filesystem::path& path) { outputs_.push_back(path); }
  bool has_outputs() const { return !outputs_.empty(); }

  nlohmann::json to_json() const;
  /// Writes the manifest; returns the path written.
  std::filesystem::path write(const std::filesystem::path& explicit_path = {}) const;

 private:
  std::string subcommand_;
  nlohmann::json parameters_ = nlohmann::json::object();
  std::vector<std::uint64_t> seeds_;
  std::vector<std::filesystem::path> outputs_;
  std::chrono::steady_clock::time_point started_;
};

std::string sha256_file(const std::filesystem::path& path);

}  // namespace imdd::cli
