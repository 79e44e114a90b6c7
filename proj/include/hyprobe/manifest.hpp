#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "hyprobe/common.hpp"

namespace hyprobe {

inline std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash missing file: " + path.string());
    char buf[1 << 16];
    std::uint64_t h = 0xcbf29ce484222325ULL;
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h = fnv1a(buf, std::size_t(in.gcount()), h);
    return h;
}

// Provenance record written next to every CLI artifact: input file hashes,
// the effective config, and the seed. Hashes chain across pipeline stages.
inline void write_manifest(const std::filesystem::path& artifact,
                           const std::map<std::string, std::filesystem::path>& inputs,
                           const nlohmann::json& config, std::uint64_t seed) {
    nlohmann::json j;
    j["artifact"] = artifact.filename().string();
    j["seed"] = seed;
    j["config"] = config;
    for (const auto& [name, path] : inputs) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(hash_file(path)));
        j["inputs"][name] = {{"path", path.string()}, {"fnv1a64", std::string(hex)}};
    }
    auto out_path = artifact;
    out_path += ".manifest.json";
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write manifest: " + out_path.string());
    out << j.dump(2) << '\n';
}

}  // namespace hyprobe
