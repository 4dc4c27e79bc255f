#include "rlam/io/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace rlam::io {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    if (std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc) == 0)
        throw std::runtime_error("timestamp formatting failed");
    return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["format"] = "rlam-manifest v1";
    doc["subcommand"] = manifest.subcommand;
    doc["build_id"] = manifest.build_id;
    doc["seed"] = manifest.seed;
    doc["config"] = manifest.config_snapshot;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    for (const auto& [name, path] : manifest.inputs) inputs[name] = path;
    doc["inputs"] = inputs;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
    for (const auto& [name, path] : manifest.outputs) outputs[name] = path;
    doc["outputs"] = outputs;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;
    return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << manifest_to_json(manifest);
    if (!out) throw std::runtime_error("manifest write failed: " + path);
}

}  // namespace rlam::io
