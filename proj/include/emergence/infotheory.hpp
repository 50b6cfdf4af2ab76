#pragma once

#include "emergence/intervention.hpp"

#include <array>
#include <cstdint>

namespace emergence {

/// 3x3 count table; rows index the intervened label, columns the outcome
/// label, both mapped -1,0,+1 -> 0,1,2.
struct JointHistogram {
  std::array<std::array<std::uint64_t, 3>, 3> counts{};

  static std::size_t slot(Label label) noexcept { return static_cast<std::size_t>(label + 1); }

  void add(Label before, Label after, std::uint64_t n = 1) noexcept { counts[slot(before)][slot(after)] += n; }
  /// Adds one count per block pair; both fields must have the same length.
  void accumulate(const MacroLabelField& before, const MacroLabelField& after);
  std::uint64_t total() const noexcept;

  friend bool operator==(const JointHistogram&, const JointHistogram&) = default;
};

JointHistogram merge(const JointHistogram& a, const JointHistogram& b) noexcept;

struct MiEstimate {
  double plugin_bits = 0.0;
  double corrected_bits = 0.0;
  double bias_bits = 0.0; // unclamped first-order bias estimate
  std::uint64_t n_samples = 0;
};

/// Plug-in mutual information in bits, with 0 log 0 = 0. Requires N >= 1.
double plugin_mi(const JointHistogram& h);

/// Panzeri-Treves first-order bias subtraction, using naive occupied-bin counts:
///   bias = [sum_rows (R_row - 1) - (R - 1)] / (2 N ln 2)
/// where the sum runs over occupied rows. The corrected value is clamped to
/// [0, plugin].
MiEstimate panzeri_treves_correct(const JointHistogram& h);

/// Capacity of a linear Gaussian channel, 0.5 log2(1 + snr).
double gaussian_capacity(double snr);

} // namespace emergence
