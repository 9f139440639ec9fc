#include "orbitcox/cli/commands.hpp"

#include "orbitcox/cli/output.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

namespace orbitcox::cli {
namespace {

const std::vector<double>& require_grid(const std::vector<double>& grid, const std::string& key) {
  if (grid.empty()) throw ConfigError("empty grid: set run." + key);
  return grid;
}

double& swept_value(CoxParams& p, SweptParam swept) { return swept == SweptParam::lambda ? p.lambda : p.mu; }

// The swept-parameter grid, or the configured value alone.
std::vector<double> param_values(const RunConfig& cfg) {
  if (!cfg.param_grid.empty()) return cfg.param_grid;
  CoxParams p = cfg.cox();
  return {swept_value(p, cfg.swept)};
}

std::string label(const char* prefix, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, v);
  return buf;
}

bool any_failed(const CurveTable& t) {
  return std::any_of(t.rows.begin(), t.rows.end(), [](const CurveRow& r) { return !r.ok; });
}

CurveTable evaluate(const RunConfig& cfg, const std::string& which, const std::string& mode) {
  if (mode == "analytic") return cmd_analytic(cfg, which);
  if (mode == "mc") return cmd_mc(cfg, which);
  throw ConfigError("mode must be analytic or mc, got '" + mode + "'");
}

}  // namespace

Snapshot cmd_sample(const RunConfig& cfg) {
  return std::visit(
      [&](const auto& m) -> Snapshot {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CoxModel>) {
          return sample_cox(m.params, cfg.seed, cfg.frame);
        } else if constexpr (std::is_same_v<M, BinomialModel>) {
          return sample_binomial(m.n, m.radius, cfg.seed, cfg.frame);
        } else {
          return build_deterministic(m.shells, cfg.frame);
        }
      },
      cfg.model);
}

CurveTable cmd_analytic(const RunConfig& cfg, const std::string& which) {
  const CoxParams& p = cfg.cox();
  CurveRequest req;
  std::vector<double> grid;
  if (which == "distance") {
    req.kind = CurveKind::distance_ccdf;
    grid = require_grid(cfg.distance_grid, "distance_grid");
  } else if (which == "outage") {
    req.kind = CurveKind::outage_vs_param;
    req.swept = cfg.swept;
    grid = param_values(cfg);
  } else if (which == "laplace") {
    req.kind = CurveKind::laplace_vs_s;
    req.channel = cfg.channel;
    grid = require_grid(cfg.s_grid, "s_grid");
  } else {
    throw ConfigError("analytic --which must be distance, outage or laplace, got '" + which + "'");
  }
  CurveTable t = tabulate_curve(req, grid, p, cfg.quadrature, cfg.frame);
  t.metadata["source"] = "analytic";
  return t;
}

CurveTable cmd_mc(const RunConfig& cfg, const std::string& which) {
  SimSpec spec = cfg.sim_spec();
  CurveTable t;
  if (which == "distance") {
    t = empirical_distance_ccdf(spec, require_grid(cfg.distance_grid, "distance_grid"));
  } else if (which == "laplace") {
    t = empirical_interference_laplace(spec, require_grid(cfg.s_grid, "s_grid"));
  } else if (which == "coverage") {
    require_grid(cfg.threshold_db_grid, "threshold_db_grid");
    t = coverage_curve(spec).to_table();
  } else if (which == "outage") {
    t.columns = {"outage", "stderr"};
    if (cfg.is_cox()) {
      t.abscissa_name = cfg.swept == SweptParam::lambda ? "lambda" : "mu";
      for (double x : param_values(cfg)) {
        CoxParams p = cfg.cox();
        swept_value(p, cfg.swept) = x;
        spec.model = CoxModel{p};
        const Estimate e = empirical_outage(run_trials(spec));
        t.rows.push_back(CurveRow{x, {e.value, e.stderr_}, true, {}});
      }
    } else {
      if (!cfg.param_grid.empty()) throw ConfigError("run.param_grid needs constellation.model = \"cox\"");
      t.abscissa_name = "row";
      const Estimate e = empirical_outage(run_trials(spec));
      t.rows.push_back(CurveRow{0.0, {e.value, e.stderr_}, true, {}});
    }
  } else {
    throw ConfigError("mc --which must be distance, outage, laplace or coverage, got '" + which + "'");
  }
  t.metadata["source"] = "mc";
  t.metadata["seed"] = cfg.seed;
  t.metadata["trials"] = cfg.trials;
  t.metadata["exact_snapshots"] = cfg.exact_snapshots;
  return t;
}

CurveTable cmd_compare(const RunConfig& a, const RunConfig& b, const std::string& which,
                       const std::string& mode_a, const std::string& mode_b) {
  const CurveTable ta = evaluate(a, which, mode_a);
  const CurveTable tb = evaluate(b, which, mode_b);
  if (ta.abscissae() != tb.abscissae()) throw ConfigError("compare needs both configs to use the same grid");

  CurveTable out;
  out.abscissa_name = ta.abscissa_name;
  out.columns = {"a", "b", "diff"};
  const bool se_a = std::find(ta.columns.begin(), ta.columns.end(), "stderr") != ta.columns.end();
  const bool se_b = std::find(tb.columns.begin(), tb.columns.end(), "stderr") != tb.columns.end();
  if (se_a) out.columns.push_back("a_stderr");
  if (se_b) out.columns.push_back("b_stderr");

  double max_dev = 0.0, at = std::nan("");
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    const auto& ra = ta.rows[i];
    const auto& rb = tb.rows[i];
    const double va = ra.values[0], vb = rb.values[0];
    CurveRow row{ra.abscissa, {va, vb, va - vb}, ra.ok && rb.ok, ra.ok ? rb.error : ra.error};
    if (se_a) row.values.push_back(ra.values[ta.column_index("stderr")]);
    if (se_b) row.values.push_back(rb.values[tb.column_index("stderr")]);
    if (std::abs(va - vb) > max_dev) {
      max_dev = std::abs(va - vb);
      at = ra.abscissa;
    }
    out.rows.push_back(std::move(row));
  }
  out.metadata["which"] = which;
  out.metadata["a"] = {{"mode", mode_a}, {"metadata", ta.metadata}};
  out.metadata["b"] = {{"mode", mode_b}, {"metadata", tb.metadata}, {"config", b.resolved}};
  out.metadata["max_abs_deviation"] = max_dev;
  out.metadata["max_abs_deviation_at"] = at;
  // Both columns are survival functions, so the largest gap is the KS
  // distance restricted to the grid.
  if (which == "distance") out.metadata["ks_statistic"] = max_dev;
  return out;
}

CurveTable cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep needs a run.sweep section");
  const SweepConfig& sw = *cfg.sweep;
  const auto& taus = require_grid(cfg.threshold_db_grid, "threshold_db_grid");
  const CoxParams& base = cfg.cox();

  CurveTable t;
  t.abscissa_name = "tau_db";
  t.columns.clear();
  std::vector<std::vector<double>> curves;
  std::vector<std::vector<double>> stderrs;
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < sw.lambdas.size(); ++k) {
    SimSpec spec = cfg.sim_spec();
    const CoxParams p = moment_match(sw.total, base.nu, sw.lambdas[k]);
    spec.model = CoxModel{p};
    spec.base_seed = split_seed(cfg.seed, k);
    const CoverageResult r = coverage_curve(spec);
    std::vector<double> c, s;
    for (const auto& row : r.rows) {
      c.push_back(row.coverage_unconditional);
      s.push_back(row.stderr_unconditional);
    }
    curves.push_back(c);
    stderrs.push_back(s);
    t.columns.push_back(label("cox_lambda_", p.lambda));
    pairs.push_back({{"lambda", p.lambda}, {"mu", p.mu}, {"seed", spec.base_seed}});
  }
  t.columns.push_back("envelope_min");
  t.columns.push_back("envelope_max");

  std::vector<double> binomial, binomial_se;
  if (sw.binomial_radius_km) {
    SimSpec spec = cfg.sim_spec();
    spec.model = BinomialModel{static_cast<int>(std::lround(sw.total)), *sw.binomial_radius_km};
    spec.base_seed = split_seed(cfg.seed, sw.lambdas.size());
    for (const auto& row : coverage_curve(spec).rows) {
      binomial.push_back(row.coverage_unconditional);
      binomial_se.push_back(row.stderr_unconditional);
    }
    t.columns.push_back(label("binomial_n", std::lround(sw.total)));
    t.columns.push_back("binomial_stderr");
  }

  bool inside = true;
  double worst_excess = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CurveRow row{taus[i], {}, true, {}};
    double lo = 1.0, hi = 0.0;
    for (const auto& c : curves) {
      row.values.push_back(c[i]);
      lo = std::min(lo, c[i]);
      hi = std::max(hi, c[i]);
    }
    row.values.push_back(lo);
    row.values.push_back(hi);
    if (!binomial.empty()) {
      row.values.push_back(binomial[i]);
      row.values.push_back(binomial_se[i]);
      const double excess = std::max(lo - binomial[i], binomial[i] - hi);
      worst_excess = std::max(worst_excess, excess);
      inside = inside && excess <= 0.0;
    }
    t.rows.push_back(std::move(row));
  }
  t.metadata["pairs"] = pairs;
  t.metadata["total"] = sw.total;
  t.metadata["coverage"] = "unconditional";
  t.metadata["seed"] = cfg.seed;
  t.metadata["trials"] = cfg.trials;
  if (!binomial.empty()) {
    t.metadata["binomial_within_envelope"] = inside;
    t.metadata["binomial_max_excess"] = worst_excess;
  }
  return t;
}

int main(int argc, char** argv) {
  CLI::App app{"Cox-process LEO constellation coverage: sampling, closed forms and Monte Carlo"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::vector<std::string> overrides;
    std::int64_t seed = 0;
    std::int64_t trials = 0;
    std::string out;
    std::string format;
    int threads = 0;
  } common;
  std::string which, config_b, mode_a = "mc", mode_b = "mc";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON run configuration")->required();
    sub->add_option("--set", common.overrides, "Override a config key, e.g. run.trials=1000");
    sub->add_option("--seed", common.seed, "Base seed (run.seed)")->check(CLI::NonNegativeNumber);
    sub->add_option("--trials", common.trials, "Monte Carlo trials (run.trials)")->check(CLI::PositiveNumber);
    sub->add_option("--out", common.out, "Output path, - for stdout (output.path)");
    sub->add_option("--format", common.format, "csv or json (output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", common.threads, "OpenMP threads")->check(CLI::PositiveNumber);
  };
  auto* sample = app.add_subcommand("sample", "Write one constellation snapshot");
  auto* analytic = app.add_subcommand("analytic", "Tabulate a closed-form curve");
  auto* mc = app.add_subcommand("mc", "Estimate a curve by simulation");
  auto* compare = app.add_subcommand("compare", "Join two curves and report their deviation");
  auto* sweep = app.add_subcommand("sweep", "Coverage for (lambda, mu) pairs at fixed lambda * mu");
  for (auto* sub : {sample, analytic, mc, compare, sweep}) add_common(sub);
  analytic->add_option("--which", which, "distance | outage | laplace")->required();
  mc->add_option("--which", which, "distance | outage | laplace | coverage")->required();
  compare->add_option("--which", which, "distance | outage | laplace | coverage")->required();
  compare->add_option("--config-b", config_b, "Second configuration")->required();
  compare->add_option("--a-mode", mode_a, "analytic or mc")->check(CLI::IsMember({"analytic", "mc"}));
  compare->add_option("--b-mode", mode_b, "analytic or mc")->check(CLI::IsMember({"analytic", "mc"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (common.threads > 0) omp_set_num_threads(common.threads);
    auto resolve = [&](const std::string& path) {
      nlohmann::json doc = load_config_file(path);
      for (const auto& o : common.overrides) apply_override(doc, o);
      if (sub->count("--seed")) apply_override(doc, "run.seed=" + std::to_string(common.seed));
      if (sub->count("--trials")) apply_override(doc, "run.trials=" + std::to_string(common.trials));
      if (sub->count("--out")) apply_override(doc, "output.path=" + nlohmann::json(common.out).dump());
      if (sub->count("--format")) apply_override(doc, "output.format=" + nlohmann::json(common.format).dump());
      return parse_config(doc);
    };
    const RunConfig cfg = resolve(common.config);
    std::string command = sub->get_name();
    if (!which.empty()) command += " " + which;
    const nlohmann::json prov = provenance(cfg.resolved, command);

    std::string contents;
    bool failed_rows = false;
    if (sub == sample) {
      contents = render_snapshot(cmd_sample(cfg), prov, cfg.format);
    } else {
      CurveTable table;
      if (sub == analytic) {
        table = cmd_analytic(cfg, which);
      } else if (sub == mc) {
        table = cmd_mc(cfg, which);
      } else if (sub == compare) {
        table = cmd_compare(cfg, resolve(config_b), which, mode_a, mode_b);
        std::cerr << "max |a - b| = " << table.metadata["max_abs_deviation"].dump() << " at "
                  << table.abscissa_name << " = " << table.metadata["max_abs_deviation_at"].dump() << '\n';
      } else {
        table = cmd_sweep(cfg);
        if (table.metadata.contains("binomial_within_envelope")) {
          std::cerr << "binomial within envelope: " << table.metadata["binomial_within_envelope"].dump() << '\n';
        }
      }
      failed_rows = any_failed(table);
      contents = render_table(table, prov, cfg.format);
    }
    write_atomically(cfg.out_path, contents);
    if (failed_rows) {
      std::cerr << "orbitcox: some rows did not converge (see the output file)\n";
      return kNonConvergence;
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "orbitcox: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NonConvergence& e) {
    std::cerr << "orbitcox: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const IoError& e) {
    std::cerr << "orbitcox: I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "orbitcox: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "orbitcox: " << e.what() << '\n';
    return kUnexpected;
  }
}

}  // namespace orbitcox::cli
