#include "polyparse/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "polyparse/error.hpp"

namespace polyparse {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buffer;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return digest(bytes);
}

namespace {

nlohmann::json files_to_json(const std::vector<ManifestFile>& files) {
  auto out = nlohmann::json::array();
  for (const auto& f : files) out.push_back({{"path", f.path}, {"digest", f.digest}});
  return out;
}

std::vector<ManifestFile> files_from_json(const nlohmann::json& j) {
  std::vector<ManifestFile> files;
  for (const auto& item : j) files.push_back({item.at("path").get<std::string>(), item.at("digest").get<std::string>()});
  return files;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "polyparse";
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["flags"] = flags;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["inputs"] = files_to_json(inputs);
  j["outputs"] = files_to_json(outputs);
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.flags = j.at("flags").get<std::map<std::string, std::vector<std::string>>>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = files_from_json(j.at("inputs"));
    m.outputs = files_from_json(j.at("outputs"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run manifest: ") + e.what());
  }
}

}  // namespace polyparse
