#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emergence {

/// One-step macro-response gain s(l) as a function of block scale l.
///   Exponential(lambda): s = exp(-l / lambda)
///   PowerLaw(alpha):     s = l^-alpha
///   Diffusive(c):        s = max(0, 1 - c / l^2)   (small-step expansion only)
class ResponseModel {
public:
  enum class Kind { Exponential, PowerLaw, Diffusive };

  static ResponseModel exponential(double lambda);
  static ResponseModel power_law(double alpha);
  static ResponseModel diffusive(double c);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string name() const;

  double response(double ell) const;
  double derivative(double ell) const;
  /// g(l) = 2 l s'(l) + d s(l); sign(g) = sign(df/dl) for f = s^2 l^d.
  double peak_discriminant(double ell, int d) const;

private:
  ResponseModel(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

/// Gaussian-channel bound parameters. The SNR constant is C = V0 / sigma^2.
struct BoundParams {
  int d = 2;
  double C = 1.0;

  static BoundParams from_variances(int d, double intervention_variance, double noise_variance);
  void validate() const;
};

/// f(l) = s(l)^2 l^d.
double signal_function(const ResponseModel& model, int d, double ell);

/// 0.5 log2(1 + C f(l)), in bits.
double ei_lower_bound(const ResponseModel& model, const BoundParams& params, double ell);

struct PeakReport {
  double ell_star = 0.0;      // root of g between the bracketing grid points (bisection)
  double grid_argmax = 0.0;   // grid point with largest f
  bool is_unimodal = false;   // exactly one sign change, from + to -
  int derivative_sign_changes = 0;
  std::vector<double> discriminant; // g on the grid
};

/// Scans g(l) over a strictly increasing grid of >= 3 scales.
/// Throws NoInteriorPeak if g never goes from positive to negative.
PeakReport verify_peak(const ResponseModel& model, int d, std::span<const double> grid);

/// Evenly spaced grid [lo, hi] with the given step (hi included when it lands on the grid).
std::vector<double> scale_grid(double lo, double hi, double step);

} // namespace emergence
