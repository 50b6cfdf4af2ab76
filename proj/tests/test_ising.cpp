#include "emergence/errors.hpp"
#include "emergence/ising.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace emergence;

namespace {

SpinLattice checkerboard(std::size_t L) {
  std::vector<std::int8_t> s(L * L);
  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t c = 0; c < L; ++c) s[r * L + c] = (r + c) % 2 == 0 ? 1 : -1;
  return SpinLattice(GridShape(L), s);
}

SpinLattice random_lattice(std::size_t L, std::uint64_t seed) {
  auto s = derive_stream(SeedTree(seed), "init", 0);
  std::vector<std::int8_t> v(L * L);
  for (auto& x : v) x = s.uniform() < 0.5 ? 1 : -1;
  return SpinLattice(GridShape(L), v);
}

} // namespace

TEST_CASE("local energy delta") {
  const IsingParams p{1.0, 2.2};
  const SpinLattice up(GridShape(8));
  for (std::size_t site : {0, 7, 27, 63}) CHECK(local_energy_delta(up, site, p) == 8.0);
  const auto cb = checkerboard(8);
  for (std::size_t site : {0, 9, 63}) CHECK(local_energy_delta(cb, site, p) == -8.0);

  // site 5 = (1,1): neighbours 1, 9 up; 4, 6 down
  SpinLattice mixed(GridShape(4));
  mixed.set(4, -1);
  mixed.set(6, -1);
  CHECK(local_energy_delta(mixed, 5, p) == 0.0);
}

TEST_CASE("energy and flip consistency") {
  const IsingParams p{1.0, 2.0};
  auto lat = random_lattice(6, 3);
  for (std::size_t site = 0; site < 36; ++site) {
    const double before = lat.energy();
    const double dE = local_energy_delta(lat, site, p);
    lat.flip(site);
    CHECK(lat.energy() - before == doctest::Approx(dE));
  }
}

TEST_CASE("infinite temperature accepts everything") {
  auto lat = random_lattice(64, 1);
  auto s = derive_stream(SeedTree(9), "sweep", 0);
  const auto stats = metropolis_sweep(lat, {1.0, 1e9}, s);
  CHECK(stats.proposals == 4096);
  CHECK(stats.acceptance_rate() >= 1.0 - 1e-6);
}

TEST_CASE("low temperature freezes the all-up state") {
  SpinLattice lat(GridShape(64));
  auto s = derive_stream(SeedTree(9), "sweep", 1);
  const auto stats = metropolis_sweep(lat, {1.0, 0.1}, s);
  CHECK(stats.accepted == 0);
  CHECK(lat.magnetization() == 1.0);
}

TEST_CASE("sweeps are deterministic and keep spins valid") {
  auto a = random_lattice(32, 11);
  auto b = a;
  auto sa = derive_stream(SeedTree(1), "sweep", 0);
  auto sb = derive_stream(SeedTree(1), "sweep", 0);
  for (int i = 0; i < 20; ++i) {
    metropolis_sweep(a, {1.0, 2.2}, sa);
    metropolis_sweep(b, {1.0, 2.2}, sb);
  }
  CHECK(a == b);
  for (auto v : a.spins()) REQUIRE((v == 1 || v == -1));
}

TEST_CASE("invalid parameters are rejected") {
  SpinLattice lat(GridShape(4));
  auto s = derive_stream(SeedTree(1), "x", 0);
  CHECK_THROWS_AS(metropolis_sweep(lat, {1.0, 0.0}, s), ConfigError);
  CHECK_THROWS_AS(metropolis_sweep(lat, {1.0, -1.0}, s), ConfigError);
  CHECK_THROWS_AS(lat.set(0, 0), ConfigError);
}

TEST_CASE("mean |m| at T=2.2 agrees with an independent Metropolis") {
  constexpr std::size_t L = 16;
  constexpr int burn = 1000, sweeps = 10000;
  auto lat = random_lattice(L, 77);
  auto s = derive_stream(SeedTree(77), "sweep", 0);
  oracle::ReferenceIsing ref(L, 2.2, 77);
  std::vector<double> ours, theirs;
  for (int i = 0; i < burn + sweeps; ++i) {
    metropolis_sweep(lat, {1.0, 2.2}, s);
    ref.sweep();
    if (i >= burn) {
      ours.push_back(std::abs(lat.magnetization()));
      theirs.push_back(ref.abs_magnetization());
    }
  }
  const auto [m1, e1] = oracle::batch_mean_error(ours);
  const auto [m2, e2] = oracle::batch_mean_error(theirs);
  MESSAGE("library <|m|> = " << m1 << " +- " << e1 << ", reference = " << m2 << " +- " << e2);
  CHECK(std::abs(m1 - m2) < 4.0 * std::hypot(e1, e2));
}

TEST_CASE("4x4 energy histogram matches Boltzmann enumeration (short run)") {
  const double T = 5.0;
  const auto exact = oracle::ising_energy_distribution(4, T);
  auto lat = random_lattice(4, 5);
  auto s = derive_stream(SeedTree(5), "sweep", 0);
  std::map<int, double> counts;
  constexpr int samples = 20000, thin = 10;
  for (int i = 0; i < 100; ++i) metropolis_sweep(lat, {1.0, T}, s);
  for (int i = 0; i < samples; ++i) {
    for (int k = 0; k < thin; ++k) metropolis_sweep(lat, {1.0, T}, s);
    counts[static_cast<int>(lat.energy())] += 1.0;
  }
  std::vector<double> observed, expected;
  for (const auto& [E, p] : exact) {
    observed.push_back(counts[E]);
    expected.push_back(p * samples);
  }
  CHECK(oracle::goodness_of_fit_p(observed, expected) > 0.001);
}
