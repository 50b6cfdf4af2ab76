#pragma once

#include "emergence/lattice.hpp"
#include "emergence/random.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace emergence {

struct AbmParams {
  std::size_t agents = 400;
  double kappa = 2.0;      // move bias per pheromone unit
  double deposit = 0.5;    // pheromone added per agent per step
  double evap = 0.95;      // retention factor applied once per step
  double diff_sigma = 1.0; // Gaussian diffusion width, in cells

  void validate() const;
};

class PheromoneField {
public:
  explicit PheromoneField(GridShape shape, double fill = 0.0);
  PheromoneField(GridShape shape, std::vector<double> levels);

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const double> levels() const noexcept { return levels_; }
  std::span<double> levels() noexcept { return levels_; }
  double operator[](std::size_t site) const noexcept { return levels_[site]; }
  double& operator[](std::size_t site) noexcept { return levels_[site]; }

  double total_mass() const noexcept;

private:
  GridShape shape_;
  std::vector<double> levels_;
};

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Agent positions; several agents may share a cell.
struct AgentSet {
  std::vector<Cell> positions;

  static AgentSet random(const GridShape& shape, std::size_t count, RandomStream& stream);
};

/// Neighbour order used throughout: up (row-1), down (row+1), left (col-1), right (col+1).
inline constexpr std::array<std::array<int, 2>, 4> kNeighbourOffsets{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

/// Softmax of kappa * levels, evaluated with max-subtraction.
std::array<double, 4> move_probabilities(const std::array<double, 4>& neighbour_levels, double kappa);
std::array<double, 4> move_probabilities(const PheromoneField& field, Cell pos, const AbmParams& params);

/// Truncated (radius ceil(3 sigma)) discrete Gaussian normalized to sum 1.
std::vector<double> gaussian_kernel_1d(double sigma);

/// Periodic separable Gaussian blur; preserves total mass up to rounding.
void diffuse(PheromoneField& field, double sigma);

/// One synchronous step: all agents move against the pre-step field, each
/// deposits at its new cell, the field is scaled by `evap` and then diffused.
/// Per agent, in agent order, exactly one uniform is drawn for the move.
void abm_step(PheromoneField& field, AgentSet& agents, const AbmParams& params, RandomStream& stream);

} // namespace emergence
