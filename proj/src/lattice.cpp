#include "emergence/lattice.hpp"

#include "emergence/errors.hpp"

#include <string>

namespace emergence {

GridShape::GridShape(std::size_t linear_size) : L(linear_size) {
  if (L < 2) {
    throw ConfigError("grid linear size must be at least 2, got " + std::to_string(L));
  }
}

std::size_t GridShape::wrap(std::ptrdiff_t coord) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(L);
  auto r = coord % n;
  return static_cast<std::size_t>(r < 0 ? r + n : r);
}

BlockPartition::BlockPartition(GridShape shape, std::size_t block_size)
    : shape_(shape), b_(block_size) {
  if (b_ == 0 || shape_.L % b_ != 0) {
    throw NonDividingBlock("block size " + std::to_string(b_) + " does not divide L=" +
                           std::to_string(shape_.L));
  }
  const std::size_t per_side = blocks_per_side();
  sites_.reserve(shape_.sites());
  for (std::size_t br = 0; br < per_side; ++br) {
    for (std::size_t bc = 0; bc < per_side; ++bc) {
      for (std::size_t r = 0; r < b_; ++r) {
        for (std::size_t c = 0; c < b_; ++c) {
          sites_.push_back(shape_.index(br * b_ + r, bc * b_ + c));
        }
      }
    }
  }
}

std::span<const std::size_t> BlockPartition::block_sites(std::size_t block) const {
  const std::size_t n = sites_per_block();
  return std::span<const std::size_t>(sites_).subspan(block * n, n);
}

std::size_t BlockPartition::block_of(std::size_t site) const noexcept {
  const std::size_t row = site / shape_.L;
  const std::size_t col = site % shape_.L;
  return (row / b_) * blocks_per_side() + col / b_;
}

BlockPartition make_partition(GridShape shape, std::size_t block_size) {
  return BlockPartition(shape, block_size);
}

} // namespace emergence
