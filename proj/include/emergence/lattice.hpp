#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emergence {

/// Periodic square grid of L x L sites. Only d = 2 is supported.
struct GridShape {
  std::size_t L = 0;
  static constexpr int d = 2;

  explicit GridShape(std::size_t linear_size);
  GridShape() = default;

  std::size_t sites() const noexcept { return L * L; }
  std::size_t index(std::size_t row, std::size_t col) const noexcept { return row * L + col; }
  std::size_t wrap(std::ptrdiff_t coord) const noexcept;

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Tiling of a grid into (L/b)^2 disjoint square blocks of b x b sites.
///
/// Blocks are numbered row-major over the block grid; the sites of each
/// block are listed row-major inside the block.
class BlockPartition {
public:
  BlockPartition(GridShape shape, std::size_t block_size);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t block_size() const noexcept { return b_; }
  std::size_t blocks_per_side() const noexcept { return shape_.L / b_; }
  std::size_t num_blocks() const noexcept { return blocks_per_side() * blocks_per_side(); }
  std::size_t sites_per_block() const noexcept { return b_ * b_; }

  std::span<const std::size_t> block_sites(std::size_t block) const;
  std::size_t block_of(std::size_t site) const noexcept;

private:
  GridShape shape_;
  std::size_t b_;
  std::vector<std::size_t> sites_; // num_blocks * b^2, grouped by block
};

/// Throws NonDividingBlock if b does not divide L (or b == 0).
BlockPartition make_partition(GridShape shape, std::size_t block_size);

} // namespace emergence
