#pragma once

#include "emergence/experiment.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emergence {

struct PeakResult {
  std::size_t block_size = 0;
  bool boundary = false; // argmax at the first or last scale: no interior peak observed
};

/// Scale with the largest ei_mean (ties toward the smaller block). Records
/// without a valid estimate are ignored. Needs at least 3 valid scales.
PeakResult detect_peak(const EiCurve& curve);

enum class CurveModel { MonotoneIncreasing, MonotoneDecreasing, Unimodal };
std::string to_string(CurveModel model);

struct PeakInterval {
  double lo = 0.0;
  double hi = 0.0;
  double support = 0.0; // fraction of bootstrap resamples with an interior peak
};

struct ModelSelectionReport {
  CurveModel best_model = CurveModel::MonotoneIncreasing;
  std::map<CurveModel, double> aic_per_model; // only models with an admissible fit
  std::map<CurveModel, std::vector<double>> fitted;
  std::string unimodal_variant; // "isotonic" or "quadratic"
  std::optional<std::size_t> peak_scale;
  std::optional<PeakInterval> peak_ci;
  double delta_aic = 0.0; // gap to the runner-up
  bool inconclusive = false; // delta_aic < 2
  double sem_floor = 0.0;
  std::vector<std::size_t> floored_scales;

  nlohmann::json to_json() const;
};

struct SelectionOptions {
  std::size_t bootstrap_n = 1000;
  std::uint64_t seed = 1;
  double sem_floor = 1e-4; // bits; zero-variance scales are weighted as if sem were this
};

/// Weighted least squares over x = log2 b with weights 1/sem^2, compared by
/// AIC = chi^2 + 2k:
///   MonotoneIncreasing / MonotoneDecreasing: weighted isotonic regression,
///     k = number of fitted levels.
///   Unimodal: best admissible fit with an interior maximum, either isotonic
///     up-then-down (k = levels + 1 for the mode) or a concave quadratic with
///     its vertex inside the scale range (k = 3).
/// The peak interval comes from a parametric bootstrap that redraws every
/// scale from Gaussian(mean, sem) and refits the unimodal family.
ModelSelectionReport select_model(const EiCurve& curve, const SelectionOptions& options = {});

/// Weighted pool-adjacent-violators fit, non-decreasing.
std::vector<double> isotonic_increasing(const std::vector<double>& y, const std::vector<double>& w);

/// CSV with header `system,block_size,ei_mean_bits,ei_sem_bits,replicates,seed`.
/// Numbers are written in shortest round-trip form.
std::string curve_to_csv(const EiCurve& curve);
EiCurve curve_from_csv(const std::string& text);

void emit_csv(const EiCurve& curve, const std::filesystem::path& path);
EiCurve read_csv(const std::filesystem::path& path);

/// Self-contained SVG: EI vs log2 b with +-1 s.e.m. bars and the peak marked.
std::string curve_to_svg(const EiCurve& curve, const ModelSelectionReport* report = nullptr);
void emit_svg(const EiCurve& curve, const ModelSelectionReport* report, const std::filesystem::path& path);

} // namespace emergence
