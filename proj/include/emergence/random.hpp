#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emergence {

class RandomStream;

/// Hierarchical seed derivation. A node is identified by the master seed and
/// the (purpose, index) path leading to it; its key is a hash of that path,
/// so streams do not depend on the order in which they are created.
class SeedTree {
public:
  explicit SeedTree(std::uint64_t master_seed);

  SeedTree child(std::string_view purpose, std::uint64_t index) const;
  RandomStream stream() const;

  std::uint64_t master_seed() const noexcept { return master_; }
  std::uint64_t key() const noexcept { return key_; }
  const std::vector<std::pair<std::string, std::uint64_t>>& path() const noexcept { return path_; }

private:
  std::uint64_t master_;
  std::uint64_t key_;
  std::vector<std::pair<std::string, std::uint64_t>> path_;
};

/// Deterministic random source. Draw methods are defined bit-for-bit on top
/// of mt19937_64 output (no implementation-defined distributions), so a
/// stream yields identical values on every conforming platform.
class RandomStream {
public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0, unbiased by rejection.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view bytes);

/// Stream for `tree / (purpose, index)`.
RandomStream derive_stream(const SeedTree& tree, std::string_view purpose, std::uint64_t index);

} // namespace emergence
