#include "emergence/experiment.hpp"

#include "emergence/errors.hpp"
#include "emergence/intervention.hpp"
#include "emergence/lattice.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace emergence {

std::string to_string(SystemKind kind) { return kind == SystemKind::Ising ? "ising" : "abm"; }

SystemKind system_from_string(const std::string& name) {
  if (name == "ising") return SystemKind::Ising;
  if (name == "abm") return SystemKind::Abm;
  throw ConfigError("unknown system '" + name + "' (expected ising or abm)");
}

ExperimentConfig ExperimentConfig::ising_default() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::abm_default() {
  ExperimentConfig c;
  c.system = SystemKind::Abm;
  c.targets = {0.0, 5.0, 10.0};
  c.trials_per_scale = 80;
  return c;
}

void ExperimentConfig::validate() const {
  const GridShape shape(L);
  if (scales.empty()) throw ConfigError("at least one scale is required");
  for (auto b : scales) make_partition(shape, b);
  if (targets.empty()) throw ConfigError("at least one intervention target is required");
  intervention_targets();
  if (trials_per_scale < 1) throw ConfigError("trials_per_scale must be >= 1");
  if (replicates < 2) throw ConfigError("replicates must be >= 2 for a standard error");
  if (dt_steps < 1) throw ConfigError("dt_steps must be >= 1");
  if (system == SystemKind::Ising) {
    ising.validate();
    Discretizer::fixed(threshold_lo, threshold_hi);
  } else {
    abm.validate();
  }
}

std::vector<InterventionTarget> ExperimentConfig::intervention_targets() const {
  std::vector<InterventionTarget> out;
  out.reserve(targets.size());
  for (double v : targets) {
    out.push_back(system == SystemKind::Ising ? InterventionTarget::magnetization(v)
                                              : InterventionTarget::pheromone(v));
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    const SystemKind kind = system_from_string(j.value("system", std::string("ising")));
    ExperimentConfig c = kind == SystemKind::Ising ? ising_default() : abm_default();
    c.L = j.value("L", c.L);
    c.scales = j.value("scales", c.scales);
    c.targets = j.value("targets", c.targets);
    c.trials_per_scale = j.value("trials_per_scale", c.trials_per_scale);
    c.replicates = j.value("replicates", c.replicates);
    c.dt_steps = j.value("dt_steps", c.dt_steps);
    c.master_seed = j.value("seed", c.master_seed);
    c.threads = j.value("threads", c.threads);
    c.ising.T = j.value("T", c.ising.T);
    c.ising.J = j.value("J", c.ising.J);
    if (j.contains("thresholds")) {
      const auto t = j.at("thresholds").get<std::vector<double>>();
      if (t.size() != 2) throw ConfigError("thresholds must be [lo, hi]");
      c.threshold_lo = t[0];
      c.threshold_hi = t[1];
    }
    if (j.contains("abm")) {
      const auto& a = j.at("abm");
      c.abm.agents = a.value("agents", c.abm.agents);
      c.abm.kappa = a.value("kappa", c.abm.kappa);
      c.abm.deposit = a.value("deposit", c.abm.deposit);
      c.abm.evap = a.value("evap", c.abm.evap);
      c.abm.diff_sigma = a.value("diff_sigma", c.abm.diff_sigma);
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["system"] = to_string(system);
  j["L"] = L;
  j["scales"] = scales;
  j["targets"] = targets;
  j["trials_per_scale"] = trials_per_scale;
  j["replicates"] = replicates;
  j["dt_steps"] = dt_steps;
  j["seed"] = master_seed;
  if (system == SystemKind::Ising) {
    j["T"] = ising.T;
    j["J"] = ising.J;
    j["thresholds"] = {threshold_lo, threshold_hi};
  } else {
    j["abm"] = {{"agents", abm.agents},
                {"kappa", abm.kappa},
                {"deposit", abm.deposit},
                {"evap", abm.evap},
                {"diff_sigma", abm.diff_sigma}};
  }
  return j;
}

std::string ExperimentConfig::fingerprint() const {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << stable_hash(to_json().dump());
  return os.str();
}

SeedTree replicate_seed(const ExperimentConfig& config, std::size_t block_size, std::size_t replicate) {
  return SeedTree(config.master_seed).child("scale", block_size).child("replicate", replicate);
}

namespace {

JointHistogram run_ising(const ExperimentConfig& config, const BlockPartition& part, const SeedTree& replicate) {
  const auto targets = config.intervention_targets();
  const auto disc = Discretizer::fixed(config.threshold_lo, config.threshold_hi);
  JointHistogram hist;
  for (std::size_t t = 0; t < config.trials_per_scale; ++t) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      auto stream = derive_stream(replicate, "trial", t * targets.size() + k);
      SpinLattice spins = maxent_ising(part, targets[k], stream);
      const auto before = discretize(block_means(spins, part), disc, part.block_size());
      for (std::size_t s = 0; s < config.dt_steps; ++s) metropolis_sweep(spins, config.ising, stream);
      const auto after = discretize(block_means(spins, part), disc, part.block_size());
      hist.accumulate(before, after);
    }
  }
  return hist;
}

// Two passes: collect all block means of the replicate, fit tertiles on the
// pooled pre- and post-step values, then label.
JointHistogram run_abm(const ExperimentConfig& config, const BlockPartition& part, const SeedTree& replicate) {
  const auto targets = config.intervention_targets();
  const std::size_t runs = config.trials_per_scale * targets.size();
  std::vector<std::vector<double>> before(runs), after(runs);
  std::vector<double> pooled;
  pooled.reserve(2 * runs * part.num_blocks());

  for (std::size_t t = 0; t < config.trials_per_scale; ++t) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const std::size_t idx = t * targets.size() + k;
      auto stream = derive_stream(replicate, "trial", idx);
      PheromoneField field = maxent_abm(part, targets[k]);
      AgentSet agents = AgentSet::random(part.shape(), config.abm.agents, stream);
      before[idx] = block_means(field, part);
      for (std::size_t s = 0; s < config.dt_steps; ++s) abm_step(field, agents, config.abm, stream);
      after[idx] = block_means(field, part);
      pooled.insert(pooled.end(), before[idx].begin(), before[idx].end());
      pooled.insert(pooled.end(), after[idx].begin(), after[idx].end());
    }
  }

  const Discretizer disc = fit_tertiles(pooled);
  JointHistogram hist;
  for (std::size_t idx = 0; idx < runs; ++idx) {
    hist.accumulate(discretize(before[idx], disc, part.block_size()), discretize(after[idx], disc, part.block_size()));
  }
  return hist;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

} // namespace

JointHistogram run_trial(const ExperimentConfig& config, std::size_t block_size, const SeedTree& replicate) {
  const BlockPartition part = make_partition(GridShape(config.L), block_size);
  return config.system == SystemKind::Ising ? run_ising(config, part, replicate) : run_abm(config, part, replicate);
}

EiCurve run_curve(const ExperimentConfig& config) {
  config.validate();
  const std::size_t nscales = config.scales.size();
  const std::size_t R = config.replicates;

  struct Outcome {
    std::optional<MiEstimate> estimate;
    std::string error;
  };
  std::vector<Outcome> outcomes(nscales * R);

  parallel_for(outcomes.size(), config.threads, [&](std::size_t task) {
    const std::size_t b = config.scales[task / R];
    const std::size_t r = task % R;
    try {
      outcomes[task].estimate = panzeri_treves_correct(run_trial(config, b, replicate_seed(config, b, r)));
    } catch (const DegenerateSample& e) {
      outcomes[task].error = e.what();
    }
  });

  EiCurve curve;
  curve.system = config.system;
  curve.fingerprint = config.fingerprint();
  curve.seed = config.master_seed;
  for (std::size_t s = 0; s < nscales; ++s) {
    EiRecord rec;
    rec.block_size = config.scales[s];
    std::vector<double> corrected, plugin;
    std::size_t failures = 0;
    std::string first_error;
    for (std::size_t r = 0; r < R; ++r) {
      const auto& o = outcomes[s * R + r];
      if (o.estimate) {
        corrected.push_back(o.estimate->corrected_bits);
        plugin.push_back(o.estimate->plugin_bits);
      } else {
        if (first_error.empty()) first_error = o.error;
        ++failures;
      }
    }
    if (corrected.size() >= 2) {
      double mean = 0.0, pmean = 0.0;
      for (std::size_t i = 0; i < corrected.size(); ++i) {
        mean += corrected[i];
        pmean += plugin[i];
      }
      const auto n = static_cast<double>(corrected.size());
      mean /= n;
      pmean /= n;
      double ss = 0.0;
      for (double v : corrected) ss += (v - mean) * (v - mean);
      rec.ei_mean_bits = mean;
      rec.plugin_mean_bits = pmean;
      rec.ei_sem_bits = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      rec.replicates = corrected.size();
    } else {
      rec.ei_mean_bits = std::nan("");
      rec.ei_sem_bits = std::nan("");
      rec.plugin_mean_bits = std::nan("");
      rec.replicates = 0;
    }
    if (failures > 0) {
      rec.flag = "DegenerateSample in " + std::to_string(failures) + "/" + std::to_string(R) +
                 " replicates: " + first_error;
    }
    curve.records.push_back(std::move(rec));
  }
  return curve;
}

std::vector<SweepEntry> robustness_sweep(const std::vector<ExperimentConfig>& configs, std::uint64_t master_seed) {
  std::vector<SweepEntry> out;
  out.reserve(configs.size());
  const SeedTree root(master_seed);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    SweepEntry entry{configs[i], std::nullopt, {}};
    entry.config.master_seed = root.child("config", i).key();
    try {
      entry.curve = run_curve(entry.config);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

nlohmann::json make_manifest(const ExperimentConfig& config, const EiCurve& curve, double wall_seconds) {
  nlohmann::json m;
  m["tool"] = "emergence_cli";
  m["version"] = kToolVersion;
  m["config"] = config.to_json();
  m["fingerprint"] = curve.fingerprint;
  m["seed"] = curve.seed;
  m["wall_seconds"] = wall_seconds;
  nlohmann::json scales = nlohmann::json::array();
  for (const auto& r : curve.records) {
    nlohmann::json s{{"block_size", r.block_size}, {"replicates", r.replicates}};
    if (r.valid()) {
      s["ei_mean_bits"] = r.ei_mean_bits;
      s["ei_sem_bits"] = r.ei_sem_bits;
      s["plugin_mean_bits"] = r.plugin_mean_bits;
    }
    if (!r.flag.empty()) s["flag"] = r.flag;
    scales.push_back(std::move(s));
  }
  m["scales"] = std::move(scales);
  return m;
}

} // namespace emergence
