#pragma once

#include "emergence/lattice.hpp"
#include "emergence/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace emergence {

struct IsingParams {
  double J = 1.0;
  double T = 2.2;

  void validate() const;
};

/// L x L lattice of +-1 spins with periodic boundaries.
class SpinLattice {
public:
  explicit SpinLattice(GridShape shape, std::int8_t fill = 1);
  SpinLattice(GridShape shape, std::vector<std::int8_t> spins);

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const std::int8_t> spins() const noexcept { return spins_; }

  std::int8_t operator[](std::size_t site) const noexcept { return spins_[site]; }
  void set(std::size_t site, std::int8_t value);
  void flip(std::size_t site) noexcept { spins_[site] = static_cast<std::int8_t>(-spins_[site]); }

  /// Sum of the four periodic von Neumann neighbours of `site`.
  int neighbour_sum(std::size_t site) const noexcept;

  double magnetization() const noexcept;
  /// H = -J sum over nearest-neighbour bonds (each bond counted once).
  double energy(double J = 1.0) const noexcept;
  std::vector<double> as_reals() const;

  friend bool operator==(const SpinLattice&, const SpinLattice&) = default;

private:
  GridShape shape_;
  std::vector<std::int8_t> spins_;
};

/// Energy change of flipping `site`: 2 J s_i sum_{j~i} s_j.
double local_energy_delta(const SpinLattice& lattice, std::size_t site, const IsingParams& params);

struct SweepStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double acceptance_rate() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// One Metropolis sweep: L^2 single-spin-flip proposals at uniformly random
/// sites (with replacement). Each proposal consumes exactly two draws from
/// `stream`, in order: the site (`below(L^2)`) and one uniform; the flip is
/// accepted iff uniform < min(1, exp(-dE/T)).
SweepStats metropolis_sweep(SpinLattice& lattice, const IsingParams& params, RandomStream& stream);

} // namespace emergence
