#include "emergence/theory.hpp"

#include "emergence/errors.hpp"
#include "emergence/infotheory.hpp"

#include <algorithm>
#include <cmath>

namespace emergence {

ResponseModel ResponseModel::exponential(double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("exponential response needs lambda > 0");
  return {Kind::Exponential, lambda};
}

ResponseModel ResponseModel::power_law(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("power-law response needs alpha > 0");
  return {Kind::PowerLaw, alpha};
}

ResponseModel ResponseModel::diffusive(double c) {
  if (!(c > 0.0)) throw ConfigError("diffusive response needs c > 0");
  return {Kind::Diffusive, c};
}

std::string ResponseModel::name() const {
  switch (kind_) {
  case Kind::Exponential: return "exp";
  case Kind::PowerLaw: return "power";
  case Kind::Diffusive: return "diffusive";
  }
  return "unknown";
}

double ResponseModel::response(double ell) const {
  if (!(ell > 0.0)) throw ConfigError("scale must be positive");
  switch (kind_) {
  case Kind::Exponential: return std::exp(-ell / param_);
  case Kind::PowerLaw: return std::pow(ell, -param_);
  case Kind::Diffusive: return std::max(0.0, 1.0 - param_ / (ell * ell));
  }
  return 0.0;
}

double ResponseModel::derivative(double ell) const {
  if (!(ell > 0.0)) throw ConfigError("scale must be positive");
  switch (kind_) {
  case Kind::Exponential: return -std::exp(-ell / param_) / param_;
  case Kind::PowerLaw: return -param_ * std::pow(ell, -param_ - 1.0);
  case Kind::Diffusive: return ell * ell > param_ ? 2.0 * param_ / (ell * ell * ell) : 0.0;
  }
  return 0.0;
}

double ResponseModel::peak_discriminant(double ell, int d) const {
  const double s = response(ell);
  // Factored forms keep the sign exact where the terms cancel analytically.
  switch (kind_) {
  case Kind::Exponential: return s * (d - 2.0 * ell / param_);
  case Kind::PowerLaw: return s * (d - 2.0 * param_);
  case Kind::Diffusive: return 2.0 * ell * derivative(ell) + d * s;
  }
  return 0.0;
}

BoundParams BoundParams::from_variances(int d, double intervention_variance, double noise_variance) {
  if (!(noise_variance > 0.0)) throw ConfigError("noise variance must be > 0");
  BoundParams p{d, intervention_variance / noise_variance};
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (d < 1) throw ConfigError("dimension must be >= 1");
  if (!(C > 0.0)) throw ConfigError("SNR constant C must be > 0");
}

double signal_function(const ResponseModel& model, int d, double ell) {
  const double s = model.response(ell);
  return s * s * std::pow(ell, d);
}

double ei_lower_bound(const ResponseModel& model, const BoundParams& params, double ell) {
  params.validate();
  return gaussian_capacity(params.C * signal_function(model, params.d, ell));
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

PeakReport verify_peak(const ResponseModel& model, int d, std::span<const double> grid) {
  if (grid.size() < 3) throw ConfigError("peak scan needs at least 3 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("peak scan grid must be strictly increasing");
  }
  if (!(grid.front() > 0.0)) throw ConfigError("peak scan grid must be positive");

  PeakReport report;
  report.discriminant.reserve(grid.size());
  for (double ell : grid) report.discriminant.push_back(model.peak_discriminant(ell, d));

  // Sign changes between consecutive non-zero values of g; zeros are skipped.
  std::optional<std::size_t> last_nonzero;
  std::optional<std::pair<std::size_t, std::size_t>> down_crossing;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int s = sign_of(report.discriminant[i]);
    if (s == 0) continue;
    if (last_nonzero && sign_of(report.discriminant[*last_nonzero]) != s) {
      ++report.derivative_sign_changes;
      if (s < 0 && !down_crossing) down_crossing = {{*last_nonzero, i}};
    }
    last_nonzero = i;
  }

  if (!down_crossing) {
    throw NoInteriorPeak("g(l) never changes sign from + to - on [" + std::to_string(grid.front()) + ", " +
                         std::to_string(grid.back()) + "] for " + model.name() + " response");
  }
  report.is_unimodal = report.derivative_sign_changes == 1;

  auto [lo_i, hi_i] = *down_crossing;
  double a = grid[lo_i];
  double b = grid[hi_i];
  for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
    const double mid = 0.5 * (a + b);
    const double g = model.peak_discriminant(mid, d);
    if (g > 0.0) {
      a = mid;
    } else if (g < 0.0) {
      b = mid;
    } else {
      a = b = mid;
    }
  }
  report.ell_star = 0.5 * (a + b);

  std::size_t best = 0;
  double best_f = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = signal_function(model, d, grid[i]);
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  report.grid_argmax = grid[best];
  return report;
}

std::vector<double> scale_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("invalid scale grid");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

} // namespace emergence
