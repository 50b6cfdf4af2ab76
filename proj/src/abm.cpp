#include "emergence/abm.hpp"

#include "emergence/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emergence {

void AbmParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be >= 0");
  if (!(deposit >= 0.0) || !std::isfinite(deposit)) throw ConfigError("deposit must be >= 0");
  if (!(evap > 0.0 && evap <= 1.0)) throw ConfigError("evap must lie in (0, 1]");
  if (!(diff_sigma > 0.0) || !std::isfinite(diff_sigma)) throw ConfigError("diff_sigma must be > 0");
}

PheromoneField::PheromoneField(GridShape shape, double fill) : shape_(shape), levels_(shape.sites(), fill) {
  if (!(fill >= 0.0) || !std::isfinite(fill)) throw ConfigError("pheromone levels must be finite and >= 0");
}

PheromoneField::PheromoneField(GridShape shape, std::vector<double> levels)
    : shape_(shape), levels_(std::move(levels)) {
  if (levels_.size() != shape_.sites()) throw ConfigError("pheromone array size does not match grid");
  for (double v : levels_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("pheromone levels must be finite and >= 0");
  }
}

double PheromoneField::total_mass() const noexcept {
  return std::accumulate(levels_.begin(), levels_.end(), 0.0);
}

AgentSet AgentSet::random(const GridShape& shape, std::size_t count, RandomStream& stream) {
  AgentSet set;
  set.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto row = static_cast<std::size_t>(stream.below(shape.L));
    const auto col = static_cast<std::size_t>(stream.below(shape.L));
    set.positions.push_back({row, col});
  }
  return set;
}

std::array<double, 4> move_probabilities(const std::array<double, 4>& neighbour_levels, double kappa) {
  std::array<double, 4> logits{};
  for (std::size_t i = 0; i < 4; ++i) logits[i] = kappa * neighbour_levels[i];
  const double top = *std::max_element(logits.begin(), logits.end());
  std::array<double, 4> p{};
  double z = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    p[i] = std::exp(logits[i] - top);
    z += p[i];
  }
  for (auto& v : p) v /= z;
  return p;
}

namespace {

Cell neighbour(const GridShape& shape, Cell pos, std::size_t dir) {
  const auto [dr, dc] = kNeighbourOffsets[dir];
  return {shape.wrap(static_cast<std::ptrdiff_t>(pos.row) + dr), shape.wrap(static_cast<std::ptrdiff_t>(pos.col) + dc)};
}

} // namespace

std::array<double, 4> move_probabilities(const PheromoneField& field, Cell pos, const AbmParams& params) {
  const auto& shape = field.shape();
  std::array<double, 4> levels{};
  for (std::size_t k = 0; k < 4; ++k) {
    const Cell n = neighbour(shape, pos, k);
    levels[k] = field[shape.index(n.row, n.col)];
  }
  return move_probabilities(levels, params.kappa);
}

std::vector<double> gaussian_kernel_1d(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("diffusion sigma must be > 0");
  const auto radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int x = -radius; x <= radius; ++x) {
    const double v = std::exp(-0.5 * x * x / (sigma * sigma));
    w[static_cast<std::size_t>(x + radius)] = v;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  return w;
}

void diffuse(PheromoneField& field, double sigma) {
  const auto kernel = gaussian_kernel_1d(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const GridShape& shape = field.shape();
  const std::size_t L = shape.L;
  auto levels = field.levels();
  std::vector<double> tmp(levels.size(), 0.0);

  // Horizontal pass into tmp, vertical pass back into the field.
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               levels[r * L + shape.wrap(static_cast<std::ptrdiff_t>(c) + k)];
      }
      tmp[r * L + c] = acc;
    }
  }
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               tmp[shape.wrap(static_cast<std::ptrdiff_t>(r) + k) * L + c];
      }
      levels[r * L + c] = acc;
    }
  }
}

void abm_step(PheromoneField& field, AgentSet& agents, const AbmParams& params, RandomStream& stream) {
  params.validate();
  const GridShape& shape = field.shape();

  // (1) synchronous moves against the pre-step field
  for (auto& pos : agents.positions) {
    const auto p = move_probabilities(field, pos, params);
    const double u = stream.uniform();
    std::size_t dir = 0;
    double cumulative = p[0];
    while (dir < 3 && u >= cumulative) {
      ++dir;
      cumulative += p[dir];
    }
    pos = neighbour(shape, pos, dir);
  }
  // (2) deposit
  for (const auto& pos : agents.positions) {
    field[shape.index(pos.row, pos.col)] += params.deposit;
  }
  // (3) evaporation
  for (auto& v : field.levels()) v *= params.evap;
  // (4) diffusion
  diffuse(field, params.diff_sigma);
}

} // namespace emergence
