#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hqsim/common.hpp"

namespace hqsim {

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  long max_steps = 20'000'000;
  double max_step = 0.0;  // 0 = unlimited
};

struct IntegratorStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evaluations = 0;
};

/// Adaptive Dormand-Prince 5(4) over complex vectors. Output values fall
/// exactly on the requested times: steps are clamped so the solver never
/// crosses the next output point. `times` must be strictly increasing.
///
/// `on_output(i, y)` is called once per output time, in order.
inline IntegratorStats integrate_adaptive(
    const std::function<void(double, const Vector&, Vector&)>& rhs,
    const Vector& y0, const std::vector<double>& times,
    const IntegratorOptions& opt,
    const std::function<void(std::size_t, const Vector&)>& on_output) {
  if (times.empty()) throw InvalidArgument("empty output time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw InvalidArgument("output times must be strictly increasing");

  // Dormand-Prince coefficients.
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 4th-order embedded weights.
  static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                      e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                      e6 = 187.0 / 2100, e7 = 1.0 / 40;

  IntegratorStats stats;
  const long n = y0.size();
  double t = times.front();
  Vector y = y0;

  std::size_t out_idx = 0;
  on_output(0, y);
  out_idx = 1;
  if (out_idx >= times.size()) return stats;

  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n),
      yerr(n);
  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  auto weighted_err = [&](const Vector& a, const Vector& b) {
    double s = 0.0;
    for (long i = 0; i < n; ++i) {
      const double sc =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(a(i)), std::abs(b(i)));
      const double e = std::abs(yerr(i)) / sc;
      s += e * e;
    }
    return std::sqrt(s / double(n));
  };

  const double t_end = times.back();
  double h = (t_end - t) / 100.0;
  {
    const double ynorm = y.norm();
    const double fnorm = k1.norm();
    if (fnorm > 1e-300) h = std::min(h, 0.01 * std::max(ynorm, 1.0) / fnorm);
  }
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  h = std::max(h, 1e-300);

  while (out_idx < times.size()) {
    if (stats.steps_accepted + stats.steps_rejected > opt.max_steps)
      throw IntegrationError(
          "integration exceeded step budget (" + std::to_string(opt.max_steps) +
              ") at t=" + std::to_string(t),
          t, stats.steps_accepted, h);

    const double t_target = times[out_idx];
    const bool clamped = t + h >= t_target;
    const double h_try = clamped ? t_target - t : h;
    if (h_try <= std::abs(t) * 1e-16 + 1e-300)
      throw IntegrationError("step size underflow at t=" + std::to_string(t),
                             t, stats.steps_accepted, h_try);

    ytmp = y + h_try * (a21 * k1);
    rhs(t + c2 * h_try, ytmp, k2);
    ytmp = y + h_try * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h_try, ytmp, k3);
    ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h_try, ytmp, k4);
    ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h_try, ytmp, k5);
    ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h_try, ytmp, k6);
    ynew = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h_try, ynew, k7);
    stats.rhs_evaluations += 6;

    yerr = ynew - (y + h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                                e6 * k6 + e7 * k7));
    const double err = weighted_err(y, ynew);

    if (err <= 1.0) {
      t = clamped ? t_target : t + h_try;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      ++stats.steps_accepted;
      if (clamped) {
        on_output(out_idx, y);
        ++out_idx;
        // keep the natural step for the stretch to the next output
      } else {
        double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h = h_try * std::clamp(factor, 0.2, 5.0);
        if (opt.max_step > 0) h = std::min(h, opt.max_step);
      }
    } else {
      ++stats.steps_rejected;
      double factor = 0.9 * std::pow(err, -0.2);
      h = h_try * std::clamp(factor, 0.1, 0.9);
    }
  }
  return stats;
}

}  // namespace hqsim
