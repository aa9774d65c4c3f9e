#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polyparse {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
// "fnv1a64:" followed by 16 lowercase hex digits.
std::string digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

struct ManifestFile {
  std::string path;
  std::string digest;

  bool operator==(const ManifestFile&) const = default;
};

// Everything needed to rerun a command: the argument vector (with the
// effective seed made explicit), parsed flags, and digests of every file read
// and written. Contains no timestamps, so reruns produce identical manifests.
struct RunManifest {
  std::string version = std::string(kToolkitVersion);
  std::string subcommand;
  std::vector<std::string> argv;
  std::map<std::string, std::vector<std::string>> flags;
  std::optional<std::uint64_t> seed;
  std::vector<ManifestFile> inputs;
  std::vector<ManifestFile> outputs;

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

}  // namespace polyparse
