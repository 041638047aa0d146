#pragma once

#include <functional>

namespace entropy_lab::numerics {

/// Brent's method on a bracketing interval.
///
/// Requires f(lo) and f(hi) of opposite sign (or one of them zero); throws
/// BracketError otherwise. Terminates once the bracket is narrower than
/// `tol` (plus a few ulps of the iterate) or f hits zero exactly. Each step
/// falls back to bisection when interpolation would not shrink the bracket
/// fast enough, so convergence is guaranteed.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
                 int max_iter = 300);

/// Expands [lo, hi] geometrically (hi upward) until f changes sign, then
/// solves. Intended for increasing f with a root above lo.
double find_root_expanding(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-12);

}  // namespace entropy_lab::numerics
