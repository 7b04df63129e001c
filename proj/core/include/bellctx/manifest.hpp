#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bellctx::io {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

using ParamValue = std::variant<std::int64_t, double, std::string>;

// Reproduction record written next to every file-emitting CLI run: the
// command line, the seed, the parameter set, and a digest of each output.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, ParamValue>> params;
    std::vector<std::pair<std::string, std::string>> outputs;  // path -> sha256

    void add_output(const std::filesystem::path& base_dir, const std::string& relative_path);
};

std::string manifest_to_json(const RunManifest& manifest, int indent = 2);
void write_manifest(const std::filesystem::path& base_dir, const RunManifest& manifest);

// Recomputes the digest of every listed output under base_dir; returns the
// relative paths that no longer match.
std::vector<std::string> verify_manifest(const std::filesystem::path& base_dir,
                                         const RunManifest& manifest);
RunManifest parse_manifest_json(const std::string& text);

}  // namespace bellctx::io
