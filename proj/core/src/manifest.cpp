#include "bellctx/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellctx/errors.hpp"
#include "bellctx/model_json.hpp"
#include "sha256.hpp"

namespace bellctx::io {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    detail::Sha256 hasher;
    hasher.update(bytes.data(), bytes.size());
    const auto digest = hasher.finish();
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (const auto byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file for digest: " + path.string());
    detail::Sha256 hasher;
    char chunk[65536];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        hasher.update(chunk, static_cast<std::size_t>(in.gcount()));
    }
    const auto digest = hasher.finish();
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (const auto byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xf]);
    }
    return out;
}

void RunManifest::add_output(const std::filesystem::path& base_dir,
                             const std::string& relative_path) {
    outputs.emplace_back(relative_path, sha256_file(base_dir / relative_path));
}

std::string manifest_to_json(const RunManifest& manifest, int indent) {
    json doc;
    doc["format_version"] = format_version();
    doc["command"] = manifest.command;
    doc["argv"] = manifest.argv;
    if (manifest.seed) doc["seed"] = *manifest.seed;
    json params = json::object();
    for (const auto& [key, value] : manifest.params) {
        std::visit([&](const auto& v) { params[key] = v; }, value);
    }
    doc["params"] = std::move(params);
    json outputs = json::array();
    for (const auto& [path, digest] : manifest.outputs) {
        outputs.push_back({{"path", path}, {"sha256", digest}});
    }
    doc["outputs"] = std::move(outputs);
    return doc.dump(indent);
}

void write_manifest(const std::filesystem::path& base_dir, const RunManifest& manifest) {
    const auto path = base_dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write manifest: " + path.string());
    out << manifest_to_json(manifest) << "\n";
}

RunManifest parse_manifest_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw input_error(std::string("manifest JSON: ") + err.what());
    }
    RunManifest manifest;
    manifest.command = doc.value("command", std::string{});
    if (doc.contains("argv")) {
        for (const auto& a : doc.at("argv")) manifest.argv.push_back(a.get<std::string>());
    }
    if (doc.contains("seed")) manifest.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("params")) {
        for (const auto& [key, value] : doc.at("params").items()) {
            if (value.is_number_integer()) {
                manifest.params.emplace_back(key, value.get<std::int64_t>());
            } else if (value.is_number()) {
                manifest.params.emplace_back(key, value.get<double>());
            } else {
                manifest.params.emplace_back(key, value.get<std::string>());
            }
        }
    }
    if (doc.contains("outputs")) {
        for (const auto& entry : doc.at("outputs")) {
            manifest.outputs.emplace_back(entry.at("path").get<std::string>(),
                                          entry.at("sha256").get<std::string>());
        }
    }
    return manifest;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& base_dir,
                                         const RunManifest& manifest) {
    std::vector<std::string> mismatched;
    for (const auto& [path, digest] : manifest.outputs) {
        std::string actual;
        try {
            actual = sha256_file(base_dir / path);
        } catch (const input_error&) {
            mismatched.push_back(path);
            continue;
        }
        if (actual != digest) mismatched.push_back(path);
    }
    return mismatched;
}

}  // namespace bellctx::io
