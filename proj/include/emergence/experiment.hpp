#pragma once

#include "emergence/abm.hpp"
#include "emergence/infotheory.hpp"
#include "emergence/ising.hpp"
#include "emergence/random.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emergence {

enum class SystemKind { Ising, Abm };

std::string to_string(SystemKind kind);
SystemKind system_from_string(const std::string& name);

struct ExperimentConfig {
  SystemKind system = SystemKind::Ising;
  std::size_t L = 64;
  std::vector<std::size_t> scales{1, 2, 4, 8, 16, 32};
  IsingParams ising{};
  AbmParams abm{};
  std::vector<double> targets{-0.8, 0.0, 0.8};
  std::size_t trials_per_scale = 60;
  std::size_t replicates = 10;
  std::size_t dt_steps = 1;
  std::uint64_t master_seed = 1;
  double threshold_lo = -0.33; // Ising readout thresholds
  double threshold_hi = 0.33;
  std::size_t threads = 0; // 0: hardware concurrency; results do not depend on it

  /// Full-size defaults for each system.
  static ExperimentConfig ising_default();
  static ExperimentConfig abm_default();

  void validate() const;
  std::vector<InterventionTarget> intervention_targets() const;

  /// Missing keys take the defaults of the named system.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  /// Canonical echo; `threads` is excluded because it cannot change results.
  nlohmann::json to_json() const;
  std::string fingerprint() const;
};

struct EiRecord {
  std::size_t block_size = 0;
  double ei_mean_bits = 0.0;
  double ei_sem_bits = 0.0;
  std::size_t replicates = 0;
  double plugin_mean_bits = 0.0;
  std::string flag; // empty when every replicate succeeded

  bool valid() const noexcept { return replicates > 0; }
};

struct EiCurve {
  SystemKind system = SystemKind::Ising;
  std::vector<EiRecord> records;
  std::string fingerprint;
  std::uint64_t seed = 0;
};

/// One replicate at scale b: trials_per_scale x |targets| interventions,
/// counts pooled over all blocks. The tree must be the replicate node.
JointHistogram run_trial(const ExperimentConfig& config, std::size_t block_size, const SeedTree& replicate);

/// Seed node of replicate r at scale b for a given config.
SeedTree replicate_seed(const ExperimentConfig& config, std::size_t block_size, std::size_t replicate);

/// Full EI-vs-scale curve: per scale, the Panzeri-Treves corrected MI of
/// each replicate is averaged and its s.e.m. taken across replicates.
/// Scales whose replicates are degenerate are flagged, not fatal.
EiCurve run_curve(const ExperimentConfig& config);

struct SweepEntry {
  ExperimentConfig config;
  std::optional<EiCurve> curve;
  std::string error;
};

/// Runs each config with a seed derived from `master_seed` and its position.
std::vector<SweepEntry> robustness_sweep(const std::vector<ExperimentConfig>& configs, std::uint64_t master_seed);

/// Run manifest: config echo, seed, tool version, wall time, per-scale flags.
nlohmann::json make_manifest(const ExperimentConfig& config, const EiCurve& curve, double wall_seconds);

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace emergence
