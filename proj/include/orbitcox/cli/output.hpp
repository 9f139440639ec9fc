// Result files. CSV files start with "# key: value" comment lines carrying
// the provenance; JSON files hold the same fields at the top level.
#pragma once

#include "orbitcox/constellation.hpp"
#include "orbitcox/curve.hpp"

#include <json.hpp>

#include <string>

namespace orbitcox::cli {

std::string version_string();

/// Provenance block shared by all outputs.
nlohmann::json provenance(const nlohmann::json& resolved_config, const std::string& command);

std::string render_table(const CurveTable& table, const nlohmann::json& prov, const std::string& format);
std::string render_snapshot(const Snapshot& snap, const nlohmann::json& prov, const std::string& format);

/// Writes to `path` through a temporary file and a rename; "-" is stdout.
/// Throws IoError naming the path.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace orbitcox::cli
