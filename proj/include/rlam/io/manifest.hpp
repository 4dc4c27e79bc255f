#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rlam::io {

// Provenance record written once per artifact directory. This is the only
// output file that carries wall-clock timestamps; everything else is a pure
// function of inputs and seed so reruns can be compared byte for byte.
struct RunManifest {
    std::string subcommand;
    std::string build_id;
    std::uint64_t seed = 0;
    std::string config_snapshot;  // resolved config text, "" when not applicable
    std::vector<std::pair<std::string, std::string>> inputs;   // name -> path
    std::vector<std::pair<std::string, std::string>> outputs;  // name -> path
    std::string started_at;
    std::string finished_at;
};

// Current UTC time formatted as an ISO-8601 instant (second resolution).
std::string utc_timestamp();

// Serializes the manifest as pretty-printed JSON with a format marker.
std::string manifest_to_json(const RunManifest& manifest);

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace rlam::io
