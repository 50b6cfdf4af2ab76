#include "emergence/errors.hpp"
#include "emergence/theory.hpp"

#include <doctest.h>

#include <cmath>

using namespace emergence;

TEST_CASE("signal function") {
  const auto exp8 = ResponseModel::exponential(8.0);
  // brute-force argmax on a fine grid vs the closed form d*lambda/2
  double best = 0.0, best_f = -1.0;
  for (double ell = 0.01; ell < 64.0; ell += 0.01) {
    const double f = signal_function(exp8, 2, ell);
    if (f > best_f) {
      best_f = f;
      best = ell;
    }
  }
  CHECK(best == doctest::Approx(8.0).epsilon(0.002));

  const auto flat = ResponseModel::power_law(1.0);
  for (double ell : {1.0, 3.0, 17.5, 100.0}) CHECK(signal_function(flat, 2, ell) == doctest::Approx(1.0));

  const auto steep = ResponseModel::power_law(1.5);
  double prev = signal_function(steep, 2, 1.0);
  for (double ell = 1.5; ell < 50; ell += 0.5) {
    const double f = signal_function(steep, 2, ell);
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (const auto& m : {ResponseModel::exponential(5.0), ResponseModel::power_law(0.7), ResponseModel::diffusive(4.0)}) {
    for (double ell : {2.5, 4.0, 9.0, 30.0}) {
      const double h = 1e-6 * ell;
      const double fd = (m.response(ell + h) - m.response(ell - h)) / (2 * h);
      CHECK(m.derivative(ell) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("EI lower bound") {
  const auto exp8 = ResponseModel::exponential(8.0);
  const BoundParams p{2, 1.0};
  // s(8) = e^-1, so f(8) = 64 e^-2
  CHECK(ei_lower_bound(exp8, p, 8.0) == doctest::Approx(0.5 * std::log2(1.0 + 64.0 * std::exp(-2.0))).epsilon(1e-14));
  CHECK(ei_lower_bound(exp8, p, 8.0) == doctest::Approx(1.63612).epsilon(1e-5));

  // C f = 3 -> 1 bit
  const double f8 = signal_function(exp8, 2, 8.0);
  CHECK(ei_lower_bound(exp8, BoundParams{2, 3.0 / f8}, 8.0) == doctest::Approx(1.0).epsilon(1e-14));

  const auto bp = BoundParams::from_variances(2, 0.5, 0.25);
  CHECK(bp.C == 2.0);
  CHECK_THROWS_AS(BoundParams::from_variances(2, 0.5, 0.0), ConfigError);
}

TEST_CASE("bound and signal share their argmax") {
  for (const auto& m : {ResponseModel::exponential(3.0), ResponseModel::exponential(11.0)}) {
    for (double C : {0.1, 1.0, 50.0}) {
      std::size_t arg_f = 0, arg_ei = 0;
      double best_f = -1, best_ei = -1;
      const auto grid = scale_grid(1.0, 60.0, 0.5);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = signal_function(m, 2, grid[i]);
        const double ei = ei_lower_bound(m, {2, C}, grid[i]);
        if (f > best_f) best_f = f, arg_f = i;
        if (ei > best_ei) best_ei = ei, arg_ei = i;
      }
      CHECK(arg_f == arg_ei);
    }
  }
}

TEST_CASE("verify_peak on the exponential family") {
  const auto grid = scale_grid(1.0, 64.0, 1.0);
  const auto rep = verify_peak(ResponseModel::exponential(8.0), 2, grid);
  CHECK(rep.ell_star == 8.0);
  CHECK(rep.grid_argmax == 8.0);
  CHECK(rep.is_unimodal);
  CHECK(rep.derivative_sign_changes == 1);
  CHECK(rep.discriminant.front() > 0.0);
  CHECK(rep.discriminant.back() < 0.0);

  // off-grid root
  const auto rep2 = verify_peak(ResponseModel::exponential(5.3), 2, grid);
  CHECK(rep2.ell_star == doctest::Approx(5.3).epsilon(1e-12));
  CHECK(std::abs(rep2.grid_argmax - 5.3) <= 1.0);
}

TEST_CASE("verify_peak rejects models without decay") {
  const auto grid = scale_grid(1.0, 64.0, 1.0);
  CHECK_THROWS_AS(verify_peak(ResponseModel::power_law(0.5), 2, grid), NoInteriorPeak);
  CHECK_THROWS_AS(verify_peak(ResponseModel::power_law(1.0), 2, grid), NoInteriorPeak);
  // alpha > d/2: decreasing everywhere, no + to - change either
  CHECK_THROWS_AS(verify_peak(ResponseModel::power_law(2.0), 2, grid), NoInteriorPeak);
  // grid that misses the peak
  CHECK_THROWS_AS(verify_peak(ResponseModel::exponential(8.0), 2, scale_grid(1.0, 5.0, 1.0)), NoInteriorPeak);
}

TEST_CASE("diffusive response stays in the growing regime") {
  // s = 1 - c/l^2 gives g = d + (4 - d) c / l^2 > 0: the small-step
  // expansion alone never produces the decline.
  const auto m = ResponseModel::diffusive(4.0);
  for (double ell = 3.0; ell <= 100.0; ell += 1.0) {
    const double g = m.peak_discriminant(ell, 2);
    CHECK(g == doctest::Approx(2.0 + 2.0 * 4.0 / (ell * ell)).epsilon(1e-12));
  }
  CHECK(m.peak_discriminant(100.0, 2) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(verify_peak(m, 2, scale_grid(3.0, 100.0, 1.0)), NoInteriorPeak);
  CHECK(m.response(1.0) == 0.0);
}

TEST_CASE("g is close to d just above the interaction range") {
  for (int d : {1, 2, 3}) {
    const auto m = ResponseModel::exponential(1000.0);
    CHECK(m.peak_discriminant(1.0, d) == doctest::Approx(d).epsilon(0.01));
  }
}

TEST_CASE("grid validation") {
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(verify_peak(ResponseModel::exponential(8.0), 2, two), ConfigError);
  const std::vector<double> unsorted{1.0, 3.0, 2.0};
  CHECK_THROWS_AS(verify_peak(ResponseModel::exponential(8.0), 2, unsorted), ConfigError);
  CHECK_THROWS_AS(ResponseModel::exponential(0.0), ConfigError);
}
