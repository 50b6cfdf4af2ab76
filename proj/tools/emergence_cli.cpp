// Command-line front end: simulate curves, run temperature sweeps, analyze
// and plot curve CSVs, and scan the analytic peak bound.

#include "emergence/analysis.hpp"
#include "emergence/errors.hpp"
#include "emergence/experiment.hpp"
#include "emergence/theory.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace emergence;
namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path manifest_path_for(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".manifest.json");
  return p;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string manifest;
  std::optional<std::size_t> threads;
};

int run_simulate(SystemKind system, const SimulateArgs& args) {
  nlohmann::json j = read_json(args.config);
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  if (j.contains("system") && j["system"] != to_string(system)) {
    throw ConfigError("config declares system '" + j["system"].dump() + "' but 'simulate " + to_string(system) +
                      "' was requested");
  }
  j["system"] = to_string(system);
  if (args.seed) j["seed"] = *args.seed;
  if (args.threads) j["threads"] = *args.threads;
  const ExperimentConfig config = ExperimentConfig::from_json(j);

  const auto t0 = std::chrono::steady_clock::now();
  const EiCurve curve = run_curve(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (args.output.empty()) {
    std::cout << curve_to_csv(curve);
  } else {
    emit_csv(curve, args.output);
  }
  const fs::path manifest = !args.manifest.empty() ? fs::path(args.manifest)
                            : !args.output.empty() ? manifest_path_for(args.output)
                                                   : fs::path();
  if (!manifest.empty()) write_text(manifest, make_manifest(config, curve, wall).dump(2) + "\n");
  for (const auto& r : curve.records) {
    if (!r.flag.empty()) std::cerr << "warning: b=" << r.block_size << ": " << r.flag << "\n";
  }
  return 0;
}

// Sweep files either list full configs under "configs", or give a "base"
// config plus a list of "temperatures".
std::vector<ExperimentConfig> sweep_configs(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  std::vector<ExperimentConfig> out;
  if (j.contains("configs")) {
    for (const auto& c : j.at("configs")) out.push_back(ExperimentConfig::from_json(c));
  } else if (j.contains("temperatures")) {
    const nlohmann::json base = j.value("base", nlohmann::json::object());
    for (const auto& t : j.at("temperatures")) {
      nlohmann::json c = base;
      c["T"] = t;
      out.push_back(ExperimentConfig::from_json(c));
    }
  } else {
    throw ConfigError("sweep config needs 'configs' or 'temperatures'");
  }
  return out;
}

int run_sweep(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& outdir) {
  const nlohmann::json j = read_json(config_path);
  const auto configs = sweep_configs(j);
  const std::uint64_t master = seed ? *seed : j.value("seed", std::uint64_t{1});
  fs::create_directories(outdir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto entries = robustness_sweep(configs, master);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json summary;
  summary["seed"] = master;
  summary["wall_seconds"] = wall;
  summary["runs"] = nlohmann::json::array();
  bool any_failed = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    nlohmann::json run{{"index", i}, {"config", e.config.to_json()}};
    if (e.curve) {
      const fs::path csv = fs::path(outdir) / ("curve_" + std::to_string(i) + ".csv");
      emit_csv(*e.curve, csv);
      run["csv"] = csv.string();
      try {
        const auto peak = detect_peak(*e.curve);
        run["peak_scale"] = peak.block_size;
        run["boundary_peak"] = peak.boundary;
      } catch (const std::exception& ex) {
        run["peak_error"] = ex.what();
      }
    } else {
      run["error"] = e.error;
      any_failed = true;
    }
    summary["runs"].push_back(std::move(run));
  }
  write_text(fs::path(outdir) / "sweep_manifest.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return any_failed ? 2 : 0;
}

int run_analyze(const std::string& csv, std::size_t bootstrap, std::uint64_t seed) {
  const EiCurve curve = read_csv(csv);
  nlohmann::json out;
  const PeakResult peak = detect_peak(curve);
  out["detected_peak"] = peak.block_size;
  out["boundary_peak"] = peak.boundary;
  if (peak.boundary) std::cerr << "warning: BoundaryPeak at b=" << peak.block_size << " (no interior peak observed)\n";
  out["model_selection"] = select_model(curve, {bootstrap, seed}).to_json();
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct TheoryArgs {
  std::string model = "exp";
  double lambda = 8.0;
  double alpha = 1.0;
  double c = 4.0;
  int d = 2;
  double C = 1.0;
  double lmin = 1.0;
  double lmax = 64.0;
  double step = 1.0;
};

int run_theory(const TheoryArgs& a) {
  ResponseModel model = a.model == "exp"         ? ResponseModel::exponential(a.lambda)
                        : a.model == "power"     ? ResponseModel::power_law(a.alpha)
                        : a.model == "diffusive" ? ResponseModel::diffusive(a.c)
                                                 : throw ConfigError("unknown model '" + a.model + "'");
  const auto grid = scale_grid(a.lmin, a.lmax, a.step);
  const BoundParams params{a.d, a.C};
  params.validate();

  nlohmann::json out;
  out["model"] = model.name();
  out["parameter"] = model.parameter();
  out["d"] = a.d;
  out["C"] = a.C;
  nlohmann::json table = nlohmann::json::array();
  for (double ell : grid) {
    table.push_back({{"ell", ell},
                     {"signal", signal_function(model, a.d, ell)},
                     {"ei_lower_bound_bits", ei_lower_bound(model, params, ell)},
                     {"g", model.peak_discriminant(ell, a.d)}});
  }
  out["table"] = std::move(table);
  try {
    const PeakReport rep = verify_peak(model, a.d, grid);
    out["peak"] = {{"ell_star", rep.ell_star},
                   {"grid_argmax", rep.grid_argmax},
                   {"is_unimodal", rep.is_unimodal},
                   {"derivative_sign_changes", rep.derivative_sign_changes}};
  } catch (const NoInteriorPeak& e) {
    out["peak"] = nullptr;
    out["no_interior_peak"] = e.what();
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_plot(const std::string& csv, const std::string& output, bool with_model, std::uint64_t seed) {
  const EiCurve curve = read_csv(csv);
  std::optional<ModelSelectionReport> report;
  if (with_model && curve.records.size() >= 4) {
    try {
      report = select_model(curve, {200, seed});
    } catch (const InsufficientScales&) {
    }
  }
  emit_svg(curve, report ? &*report : nullptr, output);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective information vs. scale for lattice dynamics"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run an EI-vs-scale experiment and write a curve CSV");
  simulate->require_subcommand(1);
  SimulateArgs sim_args;
  std::uint64_t seed_value = 0;
  auto add_sim_options = [&](CLI::App* sub) {
    sub->add_option("--config", sim_args.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_value, "Master seed (overrides the config)");
    sub->add_option("-o,--output", sim_args.output, "Curve CSV path (default: stdout)");
    sub->add_option("--manifest", sim_args.manifest, "Run manifest path (default: next to the CSV)");
    sub->add_option("--threads", sim_args.threads, "Worker threads (results do not depend on it)");
  };
  auto* sim_ising = simulate->add_subcommand("ising", "2D Ising model with Metropolis dynamics");
  auto* sim_abm = simulate->add_subcommand("abm", "Stigmergy agent-based model");
  add_sim_options(sim_ising);
  add_sim_options(sim_abm);

  auto* sweep = app.add_subcommand("sweep", "Run a list of configs (e.g. a temperature sweep)");
  std::string sweep_config, sweep_outdir = "sweep_out";
  sweep->add_option("--config", sweep_config, "Sweep config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seed", seed_value, "Master seed for the sweep");
  sweep->add_option("--outdir", sweep_outdir, "Output directory");

  auto* analyze = app.add_subcommand("analyze", "Peak detection and model selection for a curve CSV");
  std::string analyze_csv;
  std::size_t bootstrap = 1000;
  analyze->add_option("curve", analyze_csv, "Curve CSV")->required()->check(CLI::ExistingFile);
  analyze->add_option("--bootstrap", bootstrap, "Bootstrap resamples for the peak interval");
  analyze->add_option("--seed", seed_value, "Bootstrap seed");

  auto* theory = app.add_subcommand("theory", "Scan the analytic EI lower bound and its peak");
  TheoryArgs th;
  theory->add_option("--model", th.model, "Response model: exp, power, diffusive")
      ->check(CLI::IsMember({"exp", "power", "diffusive"}));
  theory->add_option("--lambda", th.lambda, "Exponential decay length");
  theory->add_option("--alpha", th.alpha, "Power-law exponent");
  theory->add_option("--c", th.c, "Diffusive coefficient");
  theory->add_option("--d", th.d, "Lattice dimension");
  theory->add_option("--C", th.C, "SNR constant V0/sigma^2");
  theory->add_option("--lmin", th.lmin, "Smallest scale");
  theory->add_option("--lmax", th.lmax, "Largest scale");
  theory->add_option("--step", th.step, "Grid step");

  auto* plot = app.add_subcommand("plot", "Render a curve CSV as SVG");
  std::string plot_csv, plot_out;
  bool no_model = false;
  plot->add_option("curve", plot_csv, "Curve CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", plot_out, "SVG output path")->required();
  plot->add_flag("--no-model", no_model, "Skip model selection annotation");
  plot->add_option("--seed", seed_value, "Bootstrap seed for the annotation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto seed_given = [&](CLI::App* sub) -> std::optional<std::uint64_t> {
      if (sub->count("--seed") > 0) return seed_value;
      return std::nullopt;
    };
    if (sim_ising->parsed() || sim_abm->parsed()) {
      CLI::App* sub = sim_ising->parsed() ? sim_ising : sim_abm;
      sim_args.seed = seed_given(sub);
      return run_simulate(sim_ising->parsed() ? SystemKind::Ising : SystemKind::Abm, sim_args);
    }
    if (sweep->parsed()) return run_sweep(sweep_config, seed_given(sweep), sweep_outdir);
    if (analyze->parsed()) return run_analyze(analyze_csv, bootstrap, seed_given(analyze).value_or(1));
    if (theory->parsed()) return run_theory(th);
    if (plot->parsed()) return run_plot(plot_csv, plot_out, !no_model, seed_given(plot).value_or(1));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
