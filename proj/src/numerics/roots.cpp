#include "entropy_lab/numerics/roots.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "entropy_lab/errors.hpp"

namespace entropy_lab::numerics {

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << fa << ", " << fb
        << ")";
    throw BracketError(msg.str());
  }

  // Brent (1973), zeroin.
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw NumericError("find_root: iteration limit reached");
}

double find_root_expanding(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
  const double flo = f(lo);
  double width = hi - lo;
  for (int i = 0; i < 200; ++i) {
    const double fhi = f(hi);
    if ((flo > 0.0) != (fhi > 0.0) || fhi == 0.0) return find_root(f, lo, hi, tol);
    width *= 2.0;
    hi = lo + width;
  }
  throw BracketError("find_root_expanding: no sign change found");
}

}  // namespace entropy_lab::numerics
