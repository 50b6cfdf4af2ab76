#pragma once

#include "emergence/abm.hpp"
#include "emergence/ising.hpp"
#include "emergence/lattice.hpp"
#include "emergence/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace emergence {

enum class TargetKind { IsingMagnetization, AbmPheromone };

/// Macrostate an intervention imposes: a block magnetization m in [-1, 1]
/// or a pheromone level P >= 0.
struct InterventionTarget {
  TargetKind kind;
  double value;

  static InterventionTarget magnetization(double m);
  static InterventionTarget pheromone(double level);
};

using Label = std::int8_t; // -1, 0, +1

struct MacroLabelField {
  std::size_t block_size = 0;
  std::vector<Label> labels; // one per block, block order of the partition
};

/// Three-way binning of block means. Values strictly below `lo` map to -1,
/// strictly above `hi` to +1, everything else (boundaries included) to 0.
class Discretizer {
public:
  enum class Kind { FixedThresholds, GlobalTertiles };

  static Discretizer fixed(double lo, double hi);
  /// A tertile discretizer awaiting fit_tertiles.
  static Discretizer unfitted_tertiles();
  static Discretizer tertiles(double q1, double q2);

  Kind kind() const noexcept { return kind_; }
  bool fitted() const noexcept { return fitted_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  Label label(double x) const;

private:
  Discretizer(Kind kind, double lo, double hi, bool fitted);
  Kind kind_;
  double lo_;
  double hi_;
  bool fitted_;
};

/// MaxEnt Ising intervention: every site independently +1 with probability
/// (1 + m) / 2. One uniform is drawn per site, in site order. All blocks
/// share the same target.
SpinLattice maxent_ising(const BlockPartition& partition, const InterventionTarget& target, RandomStream& stream);

/// MaxEnt pheromone intervention: constant field equal to the target level.
PheromoneField maxent_abm(const BlockPartition& partition, const InterventionTarget& target);

std::vector<double> block_means(std::span<const double> state, const BlockPartition& partition);
std::vector<double> block_means(const SpinLattice& lattice, const BlockPartition& partition);
std::vector<double> block_means(const PheromoneField& field, const BlockPartition& partition);

MacroLabelField discretize(std::span<const double> means, const Discretizer& disc, std::size_t block_size = 0);

/// Linear-interpolation (type 7) quantile of an already sorted sample.
double sorted_quantile(std::span<const double> sorted, double p);

/// Fits q1, q2 as the 1/3 and 2/3 quantiles of the pooled sample.
/// Throws ConfigError for fewer than 3 samples and DegenerateSample if q1 == q2.
Discretizer fit_tertiles(std::span<const double> samples);

} // namespace emergence
