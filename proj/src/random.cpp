#include "emergence/random.hpp"

#include <array>

namespace emergence {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

SeedTree::SeedTree(std::uint64_t master_seed) : master_(master_seed), key_(splitmix64(master_seed)) {}

SeedTree SeedTree::child(std::string_view purpose, std::uint64_t index) const {
  SeedTree next = *this;
  next.key_ = splitmix64(splitmix64(key_ ^ stable_hash(purpose)) + index);
  next.path_.emplace_back(std::string(purpose), index);
  return next;
}

RandomStream SeedTree::stream() const { return RandomStream(key_); }

RandomStream::RandomStream(std::uint64_t key) {
  const std::uint64_t a = splitmix64(key);
  const std::uint64_t b = splitmix64(a);
  std::array<std::uint32_t, 4> words{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                                     static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  // Reject the incomplete top bucket so every residue is equally likely.
  const std::uint64_t limit = max() - (max() % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream derive_stream(const SeedTree& tree, std::string_view purpose, std::uint64_t index) {
  return tree.child(purpose, index).stream();
}

} // namespace emergence
