#pragma once

#include <cstddef>
#include <functional>

namespace entropy_lab::numerics {

struct QuadSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  std::size_t max_subdivisions = 2000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t subdivisions = 0;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [lo, hi].
/// Throws NumericError (with the achieved error in the message) when the
/// tolerance is not met within spec.max_subdivisions.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadSpec& spec = {});

/// Integral over [lo, +inf) via x = lo + t / (1 - t).
QuadResult integrate_to_infinity(const Integrand& f, double lo, const QuadSpec& spec = {});

/// Integral over (-inf, +inf), split at `center`.
QuadResult integrate_real_line(const Integrand& f, double center = 0.0, const QuadSpec& spec = {});

/// J_k(a, y) = ∫_0^y t^{-1/2} (2 + t)^{-a} [ln(2 + t)]^k dt for k in {0, 1}.
///
/// The t^{-1/2} endpoint singularity is removed exactly with t = u², so the
/// quadrature sees 2 (2 + u²)^{-a} [ln(2 + u²)]^k on [0, √y]. Passing
/// y = +inf is allowed when a > 1/2.
double integrate_J(double a, double y, int log_power, const QuadSpec& spec = {});

}  // namespace entropy_lab::numerics
