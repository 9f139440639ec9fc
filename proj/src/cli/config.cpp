#include "orbitcox/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace orbitcox::cli {
namespace {

using nlohmann::json;

constexpr double kDeg = kPi / 180.0;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + where + "." + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& where, double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::int64_t integer(const json& obj, const std::string& key, const std::string& where) {
  const double v = number(obj, key, where);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError("'" + where + "." + key + "' must be an integer");
  return static_cast<std::int64_t>(v);
}

std::int64_t integer_or(const json& obj, const std::string& key, const std::string& where, std::int64_t fallback) {
  return obj.contains(key) ? integer(obj, key, where) : fallback;
}

bool boolean_or(const json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError("'" + where + "." + key + "' must be true or false");
  return obj.at(key).get<bool>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& where, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError("'" + where + "." + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

// A grid is either an explicit array or {lo, hi, count[, spacing]}.
std::vector<double> grid(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return {};
  const json& g = obj.at(key);
  const std::string path = where + "." + key;
  std::vector<double> out;
  if (g.is_array()) {
    for (const auto& v : g) {
      if (!v.is_number()) throw ConfigError("'" + path + "' entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else {
    check_keys(g, path, {"lo", "hi", "count", "spacing"});
    const double lo = number(g, "lo", path), hi = number(g, "hi", path);
    const auto count = integer(g, "count", path);
    if (count < 1) throw ConfigError("'" + path + ".count' must be >= 1");
    const std::string spacing = string_or(g, "spacing", path, "linear");
    if (spacing == "linear") {
      out = linspace(lo, hi, static_cast<std::size_t>(count));
    } else if (spacing == "log") {
      if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("'" + path + "' log spacing needs positive bounds");
      out = linspace(std::log10(lo), std::log10(hi), static_cast<std::size_t>(count));
      for (double& x : out) x = std::pow(10.0, x);
      out.front() = lo;
      out.back() = hi;
    } else {
      throw ConfigError("'" + path + ".spacing' must be \"linear\" or \"log\"");
    }
  }
  try {
    require_increasing_grid(out);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  return out;
}

AltitudeDistribution parse_altitude(const json& a, const std::string& where) {
  check_keys(a, where, {"atoms", "uniform"});
  std::vector<AltitudeDistribution::Atom> atoms;
  std::vector<AltitudeDistribution::UniformPiece> pieces;
  if (a.contains("atoms")) {
    for (const auto& e : a.at("atoms")) {
      const std::string p = where + ".atoms[]";
      check_keys(e, p, {"radius_km", "mass"});
      atoms.push_back({number(e, "radius_km", p), number_or(e, "mass", p, 1.0)});
    }
  }
  if (a.contains("uniform")) {
    for (const auto& e : a.at("uniform")) {
      const std::string p = where + ".uniform[]";
      check_keys(e, p, {"lo_km", "hi_km", "mass"});
      pieces.push_back({number(e, "lo_km", p), number(e, "hi_km", p), number_or(e, "mass", p, 1.0)});
    }
  }
  return AltitudeDistribution(std::move(atoms), std::move(pieces));
}

Shell parse_shell(const json& s) {
  const std::string p = "constellation.shells[]";
  check_keys(s, p, {"altitude_km", "inclination_deg", "planes", "sats_per_plane", "phasing", "phase_offsets_deg"});
  Shell shell;
  shell.altitude_km = number(s, "altitude_km", p);
  shell.inclination_deg = number(s, "inclination_deg", p);
  shell.plane_count = static_cast<int>(integer(s, "planes", p));
  shell.sats_per_plane = static_cast<int>(integer(s, "sats_per_plane", p));
  shell.phasing = static_cast<int>(integer_or(s, "phasing", p, 0));
  if (s.contains("phase_offsets_deg")) {
    for (const auto& v : s.at("phase_offsets_deg")) {
      if (!v.is_number()) throw ConfigError("'" + p + ".phase_offsets_deg' entries must be numbers");
      shell.phase_offsets.push_back(v.get<double>() * kDeg);
    }
  }
  return shell;
}

FadingLaw parse_fading(const json& f) {
  const std::string p = "channel.fading";
  check_keys(f, p, {"law", "h", "mean", "m", "omega"});
  const std::string law = string_or(f, "law", p, "nakagami");
  if (law == "deterministic") return DeterministicFading{number_or(f, "h", p, 1.0)};
  if (law == "rayleigh") return RayleighFading{number_or(f, "mean", p, 1.0)};
  if (law == "nakagami") return NakagamiFading{number_or(f, "m", p, 3.0), number_or(f, "omega", p, 1.0)};
  throw ConfigError("'" + p + ".law' must be deterministic, rayleigh or nakagami");
}

const json kDefaults = {
    {"channel",
     {{"alpha", 2.0},
      {"fading", {{"law", "nakagami"}, {"m", 3.0}, {"omega", 1.0}}},
      {"serving_gain_db", 0.0},
      {"interferer_gain_db", 0.0},
      {"reuse_factor", 1},
      {"noise_power", 0.0}}},
    {"observer", {{"latitude_deg", 90.0}, {"longitude_deg", 0.0}, {"randomize_longitude", true}}},
    {"run", {{"trials", 10000}, {"seed", 1}, {"exact_snapshots", false}}},
    {"output", {{"format", "csv"}, {"path", "-"}}},
};

}  // namespace

const CoxParams& RunConfig::cox() const {
  const auto* m = std::get_if<CoxModel>(&model);
  if (!m) throw ConfigError("this command needs constellation.model = \"cox\"");
  return m->params;
}

SimSpec RunConfig::sim_spec() const {
  SimSpec spec;
  spec.model = model;
  spec.channel = channel;
  spec.observer = observer;
  spec.trials = trials;
  spec.base_seed = seed;
  spec.thresholds_db = threshold_db_grid;
  spec.frame = frame;
  spec.exact_snapshots = exact_snapshots;
  spec.randomize_longitude = randomize_longitude;
  return spec;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  // CSV output: the config sits on a "# config: " comment line.
  if (!text.empty() && text.front() == '#') {
    std::istringstream lines(text);
    std::string line;
    const std::string tag = "# config: ";
    while (std::getline(lines, line) && !line.empty() && line.front() == '#') {
      if (line.rfind(tag, 0) == 0) {
        try {
          return json::parse(line.substr(tag.size()));
        } catch (const json::parse_error& e) {
          throw ConfigError("'" + path + "': bad embedded config: " + e.what());
        }
      }
    }
    throw ConfigError("'" + path + "' has no embedded config line");
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  if (doc.is_object() && doc.contains("orbitcox_version") && doc.contains("config")) return doc.at("config");
  return doc;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig parse_config(const nlohmann::json& input) {
  check_keys(input, "config", {"constellation", "channel", "observer", "run", "output"});
  json doc = kDefaults;
  doc.merge_patch(input);
  // The fading law is replaced as a whole, not merged with the default law.
  if (input.contains("channel") && input.at("channel").is_object() && input.at("channel").contains("fading")) {
    doc["channel"]["fading"] = input.at("channel").at("fading");
  }
  if (!doc.contains("constellation")) throw ConfigError("missing section 'constellation'");

  RunConfig cfg;
  try {
    // Constellation.
    const json& c = doc.at("constellation");
    check_keys(c, "constellation",
               {"model", "earth_radius_km", "lambda", "mu", "altitude", "moment_match", "n", "radius_km", "shells"});
    cfg.frame.earth_radius = number_or(c, "earth_radius_km", "constellation", kDefaultEarthRadiusKm);
    cfg.frame.validate();
    const std::string model = string_or(c, "model", "constellation", "");
    if (model == "cox") {
      CoxParams p;
      if (!c.contains("altitude")) throw ConfigError("missing key 'constellation.altitude'");
      p.nu = parse_altitude(c.at("altitude"), "constellation.altitude");
      if (c.contains("moment_match")) {
        const json& mm = c.at("moment_match");
        check_keys(mm, "constellation.moment_match", {"total", "lambda"});
        if (c.contains("lambda") || c.contains("mu")) {
          throw ConfigError("constellation.moment_match replaces lambda and mu; give one or the other");
        }
        p = moment_match(number(mm, "total", "constellation.moment_match"), p.nu,
                         number(mm, "lambda", "constellation.moment_match"));
      } else {
        p.lambda = number(c, "lambda", "constellation");
        p.mu = number(c, "mu", "constellation");
      }
      p.validate(cfg.frame);
      cfg.model = CoxModel{p};
    } else if (model == "binomial") {
      cfg.model = BinomialModel{static_cast<int>(integer(c, "n", "constellation")),
                                number(c, "radius_km", "constellation")};
    } else if (model == "deterministic") {
      DeterministicModel m;
      if (!c.contains("shells") || !c.at("shells").is_array()) {
        throw ConfigError("'constellation.shells' must be an array");
      }
      for (const auto& s : c.at("shells")) m.shells.push_back(parse_shell(s));
      cfg.model = m;
    } else {
      throw ConfigError("'constellation.model' must be cox, binomial or deterministic");
    }

    // Channel.
    const json& ch = doc.at("channel");
    check_keys(ch, "channel", {"alpha", "fading", "serving_gain_db", "interferer_gain_db", "reuse_factor",
                               "noise_power", "carrier_ghz", "bandwidth_mhz"});
    cfg.channel.alpha = number(ch, "alpha", "channel");
    cfg.channel.fading = parse_fading(ch.at("fading"));
    cfg.channel.serving_gain_db = number(ch, "serving_gain_db", "channel");
    cfg.channel.interferer_gain_db = number(ch, "interferer_gain_db", "channel");
    cfg.channel.reuse_factor = static_cast<int>(integer(ch, "reuse_factor", "channel"));
    cfg.channel.noise_power = number(ch, "noise_power", "channel");
    cfg.channel.carrier_ghz = number_or(ch, "carrier_ghz", "channel", cfg.channel.carrier_ghz);
    cfg.channel.bandwidth_mhz = number_or(ch, "bandwidth_mhz", "channel", cfg.channel.bandwidth_mhz);

    // Observer.
    const json& ob = doc.at("observer");
    check_keys(ob, "observer", {"latitude_deg", "longitude_deg", "randomize_longitude"});
    const double lat = number(ob, "latitude_deg", "observer");
    if (!(lat >= -90.0 && lat <= 90.0)) throw ConfigError("'observer.latitude_deg' must lie in [-90, 90]");
    cfg.observer = Observer::at(lat * kDeg, number(ob, "longitude_deg", "observer") * kDeg, cfg.frame);
    cfg.randomize_longitude = boolean_or(ob, "randomize_longitude", "observer", true);

    // Run.
    const json& r = doc.at("run");
    check_keys(r, "run", {"trials", "seed", "exact_snapshots", "distance_grid", "threshold_db_grid", "s_grid",
                          "param_grid", "swept", "quadrature", "sweep"});
    cfg.trials = integer(r, "trials", "run");
    const auto seed = integer(r, "seed", "run");
    if (seed < 0) throw ConfigError("'run.seed' must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.exact_snapshots = boolean_or(r, "exact_snapshots", "run", false);
    cfg.distance_grid = grid(r, "distance_grid", "run");
    cfg.threshold_db_grid = grid(r, "threshold_db_grid", "run");
    cfg.s_grid = grid(r, "s_grid", "run");
    cfg.param_grid = grid(r, "param_grid", "run");
    const std::string swept = string_or(r, "swept", "run", "lambda");
    if (swept == "lambda") {
      cfg.swept = SweptParam::lambda;
    } else if (swept == "mu") {
      cfg.swept = SweptParam::mu;
    } else {
      throw ConfigError("'run.swept' must be \"lambda\" or \"mu\"");
    }
    if (r.contains("quadrature")) {
      const json& q = r.at("quadrature");
      check_keys(q, "run.quadrature", {"rel_tol", "abs_tol", "max_subdivisions"});
      cfg.quadrature.rel_tol = number_or(q, "rel_tol", "run.quadrature", cfg.quadrature.rel_tol);
      cfg.quadrature.abs_tol = number_or(q, "abs_tol", "run.quadrature", cfg.quadrature.abs_tol);
      cfg.quadrature.max_subdivisions =
          static_cast<int>(integer_or(q, "max_subdivisions", "run.quadrature", cfg.quadrature.max_subdivisions));
      cfg.quadrature.validate();
    }
    if (r.contains("sweep")) {
      const json& s = r.at("sweep");
      check_keys(s, "run.sweep", {"total", "lambdas", "binomial_radius_km"});
      SweepConfig sw;
      sw.total = number(s, "total", "run.sweep");
      sw.lambdas = grid(s, "lambdas", "run.sweep");
      if (sw.lambdas.empty()) throw ConfigError("'run.sweep.lambdas': empty grid");
      if (s.contains("binomial_radius_km")) sw.binomial_radius_km = number(s, "binomial_radius_km", "run.sweep");
      cfg.sweep = sw;
    }

    // Output.
    const json& o = doc.at("output");
    check_keys(o, "output", {"format", "path"});
    cfg.format = string_or(o, "format", "output", "csv");
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("'output.format' must be csv or json");
    cfg.out_path = string_or(o, "path", "output", "-");

    cfg.channel.validate();
    cfg.sim_spec().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
  cfg.resolved = doc;
  return cfg;
}

}  // namespace orbitcox::cli
