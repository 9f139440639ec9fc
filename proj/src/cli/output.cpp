#include "orbitcox/cli/output.hpp"

#include "orbitcox/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace orbitcox::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void csv_header(std::ostringstream& out, const nlohmann::json& prov, const nlohmann::json& metadata) {
  out << "# orbitcox " << prov.at("orbitcox_version").get<std::string>() << '\n';
  out << "# command: " << prov.at("command").get<std::string>() << '\n';
  out << "# seed: " << prov.at("seed").dump() << '\n';
  out << "# config: " << prov.at("config").dump() << '\n';
  if (!metadata.empty()) out << "# metadata: " << metadata.dump() << '\n';
}

}  // namespace

std::string version_string() { return ORBITCOX_VERSION; }

nlohmann::json provenance(const nlohmann::json& resolved_config, const std::string& command) {
  nlohmann::json seed = nullptr;
  if (resolved_config.contains("run") && resolved_config.at("run").contains("seed")) {
    seed = resolved_config.at("run").at("seed");
  }
  return {{"orbitcox_version", version_string()}, {"command", command}, {"seed", seed}, {"config", resolved_config}};
}

std::string render_table(const CurveTable& table, const nlohmann::json& prov, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    nlohmann::json doc = prov;
    doc["metadata"] = table.metadata;
    doc["abscissa"] = table.abscissa_name;
    doc["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
      nlohmann::json row = {{"x", r.abscissa}, {"values", r.values}, {"ok", r.ok}};
      if (!r.ok) row["error"] = r.error;
      rows.push_back(row);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    return out.str();
  }
  csv_header(out, prov, table.metadata);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i].ok) out << "# row " << i << " failed: " << table.rows[i].error << '\n';
  }
  out << table.abscissa_name;
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (const auto& r : table.rows) {
    out << num(r.abscissa);
    for (double v : r.values) out << ',' << num(v);
    out << '\n';
  }
  return out.str();
}

std::string render_snapshot(const Snapshot& snap, const nlohmann::json& prov, const std::string& format) {
  const double nan = std::nan("");
  std::ostringstream out;
  if (format == "json") {
    nlohmann::json doc = prov;
    doc["metadata"] = {{"model", snap.model_tag}, {"snapshot_seed", snap.seed}};
    nlohmann::json orbits = nlohmann::json::array(), sats = nlohmann::json::array();
    for (const auto& o : snap.orbits) {
      orbits.push_back({{"rho_km", o.radius}, {"theta_rad", o.longitude}, {"phi_rad", o.inclination}});
    }
    for (const auto& s : snap.satellites) {
      sats.push_back({{"orbit", s.orbit},
                      {"slot", s.slot},
                      {"x_km", s.position.x()},
                      {"y_km", s.position.y()},
                      {"z_km", s.position.z()},
                      {"omega_rad", s.orbit >= 0 ? s.orbital_angle : nan}});
    }
    doc["orbits"] = orbits;
    doc["satellites"] = sats;
    out << doc.dump(2) << '\n';
    return out.str();
  }
  csv_header(out, prov, {{"model", snap.model_tag}, {"snapshot_seed", snap.seed}});
  out << "orbit,slot,x_km,y_km,z_km,rho_km,theta_rad,phi_rad,omega_rad\n";
  for (const auto& s : snap.satellites) {
    const bool on_orbit = s.orbit >= 0;
    const Orbit o = on_orbit ? snap.orbits[static_cast<std::size_t>(s.orbit)] : Orbit{s.position.norm(), nan, nan};
    out << s.orbit << ',' << s.slot << ',' << num(s.position.x()) << ',' << num(s.position.y()) << ','
        << num(s.position.z()) << ',' << num(o.radius) << ',' << num(o.longitude) << ',' << num(o.inclination)
        << ',' << num(on_orbit ? s.orbital_angle : nan) << '\n';
  }
  return out.str();
}

void write_atomically(const std::string& path, const std::string& contents) {
  if (path == "-") {
    std::cout << contents;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace orbitcox::cli
