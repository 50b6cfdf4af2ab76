#include "emergence/ising.hpp"

#include "emergence/errors.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace emergence {

void IsingParams::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ConfigError("Ising temperature must be positive and finite, got " + std::to_string(T));
  }
  if (!std::isfinite(J)) {
    throw ConfigError("Ising coupling must be finite");
  }
}

SpinLattice::SpinLattice(GridShape shape, std::int8_t fill) : shape_(shape), spins_(shape.sites(), fill) {
  if (fill != 1 && fill != -1) {
    throw ConfigError("spin values must be -1 or +1");
  }
}

SpinLattice::SpinLattice(GridShape shape, std::vector<std::int8_t> spins)
    : shape_(shape), spins_(std::move(spins)) {
  if (spins_.size() != shape_.sites()) {
    throw ConfigError("spin array size does not match grid");
  }
  for (auto s : spins_) {
    if (s != 1 && s != -1) {
      throw ConfigError("spin values must be -1 or +1");
    }
  }
}

void SpinLattice::set(std::size_t site, std::int8_t value) {
  if (value != 1 && value != -1) {
    throw ConfigError("spin values must be -1 or +1");
  }
  spins_[site] = value;
}

int SpinLattice::neighbour_sum(std::size_t site) const noexcept {
  const std::size_t L = shape_.L;
  const std::size_t row = site / L;
  const std::size_t col = site % L;
  const std::size_t up = (row == 0 ? L - 1 : row - 1) * L + col;
  const std::size_t down = (row + 1 == L ? 0 : row + 1) * L + col;
  const std::size_t left = row * L + (col == 0 ? L - 1 : col - 1);
  const std::size_t right = row * L + (col + 1 == L ? 0 : col + 1);
  return spins_[up] + spins_[down] + spins_[left] + spins_[right];
}

double SpinLattice::magnetization() const noexcept {
  const long total = std::accumulate(spins_.begin(), spins_.end(), 0L);
  return static_cast<double>(total) / static_cast<double>(spins_.size());
}

double SpinLattice::energy(double J) const noexcept {
  const std::size_t L = shape_.L;
  long bonds = 0;
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      const std::size_t i = r * L + c;
      bonds += spins_[i] * spins_[r * L + (c + 1) % L];
      bonds += spins_[i] * spins_[((r + 1) % L) * L + c];
    }
  }
  return -J * static_cast<double>(bonds);
}

std::vector<double> SpinLattice::as_reals() const { return {spins_.begin(), spins_.end()}; }

double local_energy_delta(const SpinLattice& lattice, std::size_t site, const IsingParams& params) {
  return 2.0 * params.J * lattice[site] * lattice.neighbour_sum(site);
}

SweepStats metropolis_sweep(SpinLattice& lattice, const IsingParams& params, RandomStream& stream) {
  params.validate();
  // s_i * neighbour_sum takes values in {-4,-2,0,2,4}; tabulate acceptance.
  std::array<double, 9> accept{};
  for (int k = -4; k <= 4; ++k) {
    const double dE = 2.0 * params.J * k;
    accept[static_cast<std::size_t>(k + 4)] = dE <= 0.0 ? 1.0 : std::exp(-dE / params.T);
  }

  const std::size_t n = lattice.shape().sites();
  SweepStats stats;
  stats.proposals = n;
  for (std::size_t p = 0; p < n; ++p) {
    const auto site = static_cast<std::size_t>(stream.below(n));
    const double u = stream.uniform();
    const int k = lattice[site] * lattice.neighbour_sum(site);
    if (u < accept[static_cast<std::size_t>(k + 4)]) {
      lattice.flip(site);
      ++stats.accepted;
    }
  }
  return stats;
}

} // namespace emergence
