#include "emergence/intervention.hpp"

#include "emergence/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace emergence {

InterventionTarget InterventionTarget::magnetization(double m) {
  if (!(m >= -1.0 && m <= 1.0)) throw ConfigError("magnetization target must lie in [-1, 1], got " + std::to_string(m));
  return {TargetKind::IsingMagnetization, m};
}

InterventionTarget InterventionTarget::pheromone(double level) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw ConfigError("pheromone target must be finite and >= 0");
  return {TargetKind::AbmPheromone, level};
}

Discretizer::Discretizer(Kind kind, double lo, double hi, bool fitted)
    : kind_(kind), lo_(lo), hi_(hi), fitted_(fitted) {}

Discretizer Discretizer::fixed(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("discretizer thresholds require lo < hi");
  return {Kind::FixedThresholds, lo, hi, true};
}

Discretizer Discretizer::unfitted_tertiles() { return {Kind::GlobalTertiles, 0.0, 0.0, false}; }

Discretizer Discretizer::tertiles(double q1, double q2) {
  if (!(q1 < q2)) throw DegenerateSample("tertile cut points coincide");
  return {Kind::GlobalTertiles, q1, q2, true};
}

Label Discretizer::label(double x) const {
  if (!fitted_) throw UnfittedDiscretizer("tertile discretizer used before fitting");
  if (x < lo_) return -1;
  if (x > hi_) return 1;
  return 0;
}

SpinLattice maxent_ising(const BlockPartition& partition, const InterventionTarget& target, RandomStream& stream) {
  if (target.kind != TargetKind::IsingMagnetization) throw ConfigError("maxent_ising needs a magnetization target");
  const double p_up = 0.5 * (1.0 + target.value);
  const GridShape& shape = partition.shape();
  std::vector<std::int8_t> spins(shape.sites());
  for (auto& s : spins) s = stream.uniform() < p_up ? 1 : -1;
  return SpinLattice(shape, std::move(spins));
}

PheromoneField maxent_abm(const BlockPartition& partition, const InterventionTarget& target) {
  if (target.kind != TargetKind::AbmPheromone) throw ConfigError("maxent_abm needs a pheromone target");
  return PheromoneField(partition.shape(), target.value);
}

std::vector<double> block_means(std::span<const double> state, const BlockPartition& partition) {
  if (state.size() != partition.shape().sites()) throw ConfigError("state shape does not match partition");
  std::vector<double> means(partition.num_blocks());
  const auto n = static_cast<double>(partition.sites_per_block());
  for (std::size_t k = 0; k < means.size(); ++k) {
    double sum = 0.0;
    for (auto site : partition.block_sites(k)) sum += state[site];
    means[k] = sum / n;
  }
  return means;
}

std::vector<double> block_means(const SpinLattice& lattice, const BlockPartition& partition) {
  if (!(lattice.shape() == partition.shape())) throw ConfigError("lattice shape does not match partition");
  std::vector<double> means(partition.num_blocks());
  const auto n = static_cast<double>(partition.sites_per_block());
  for (std::size_t k = 0; k < means.size(); ++k) {
    long sum = 0;
    for (auto site : partition.block_sites(k)) sum += lattice[site];
    means[k] = static_cast<double>(sum) / n;
  }
  return means;
}

std::vector<double> block_means(const PheromoneField& field, const BlockPartition& partition) {
  return block_means(field.levels(), partition);
}

MacroLabelField discretize(std::span<const double> means, const Discretizer& disc, std::size_t block_size) {
  MacroLabelField out;
  out.block_size = block_size;
  out.labels.reserve(means.size());
  for (double x : means) out.labels.push_back(disc.label(x));
  return out;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ConfigError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Discretizer fit_tertiles(std::span<const double> samples) {
  if (samples.size() < 3) throw ConfigError("tertile fit needs at least 3 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted_quantile(sorted, 1.0 / 3.0);
  const double q2 = sorted_quantile(sorted, 2.0 / 3.0);
  if (!(q1 < q2)) {
    throw DegenerateSample("tertiles coincide at " + std::to_string(q1) + " (sample is concentrated on one value)");
  }
  return Discretizer::tertiles(q1, q2);
}

} // namespace emergence
