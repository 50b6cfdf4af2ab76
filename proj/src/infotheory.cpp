#include "emergence/infotheory.hpp"

#include "emergence/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace emergence {

void JointHistogram::accumulate(const MacroLabelField& before, const MacroLabelField& after) {
  if (before.labels.size() != after.labels.size()) throw ConfigError("label fields differ in block count");
  for (std::size_t j = 0; j < before.labels.size(); ++j) add(before.labels[j], after.labels[j]);
}

std::uint64_t JointHistogram::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : counts)
    for (auto c : row) n += c;
  return n;
}

JointHistogram merge(const JointHistogram& a, const JointHistogram& b) noexcept {
  JointHistogram out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out.counts[i][j] = a.counts[i][j] + b.counts[i][j];
  return out;
}

double plugin_mi(const JointHistogram& h) {
  const std::uint64_t total = h.total();
  if (total == 0) throw ConfigError("mutual information of an empty histogram");
  const auto n = static_cast<double>(total);

  std::array<double, 3> row{}, col{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      row[i] += static_cast<double>(h.counts[i][j]);
      col[j] += static_cast<double>(h.counts[i][j]);
    }
  }
  // p_ij log(p_ij / (p_i p_j)) = (c/N) log(c N / (r_i c_j))
  double mi = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto c = static_cast<double>(h.counts[i][j]);
      if (c == 0.0) continue;
      mi += c * std::log2(c * n / (row[i] * col[j]));
    }
  }
  return std::max(0.0, mi / n);
}

MiEstimate panzeri_treves_correct(const JointHistogram& h) {
  MiEstimate est;
  est.n_samples = h.total();
  est.plugin_bits = plugin_mi(h);

  int row_terms = 0;
  std::array<bool, 3> col_occupied{};
  for (std::size_t i = 0; i < 3; ++i) {
    int occupied = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (h.counts[i][j] > 0) {
        ++occupied;
        col_occupied[j] = true;
      }
    }
    if (occupied > 0) row_terms += occupied - 1;
  }
  const auto cols = static_cast<int>(std::count(col_occupied.begin(), col_occupied.end(), true));
  est.bias_bits = static_cast<double>(row_terms - (cols - 1)) /
                  (2.0 * static_cast<double>(est.n_samples) * std::numbers::ln2);
  est.corrected_bits = std::clamp(est.plugin_bits - est.bias_bits, 0.0, est.plugin_bits);
  return est;
}

double gaussian_capacity(double snr) {
  if (!(snr >= 0.0)) throw NegativeSnr("signal-to-noise ratio must be >= 0");
  return 0.5 * std::log2(1.0 + snr);
}

} // namespace emergence
