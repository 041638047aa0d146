#include "entropy_lab/model/model.hpp"

#include <cmath>
#include <sstream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/quadrature.hpp"
#include "entropy_lab/numerics/roots.hpp"
#include "entropy_lab/numerics/special.hpp"

namespace entropy_lab::model {

namespace nm = entropy_lab::numerics;

double SuffStats::ln_s() const { return std::log(s); }

SuffStats suff_stats(const TwoSampleData& data) {
  const std::size_t n = data.sample1.size();
  if (data.sample2.size() != n) {
    throw InputError("samples must have equal length (got " + std::to_string(n) + " and " +
                     std::to_string(data.sample2.size()) + ")");
  }
  if (n < 2) throw InputError("each sample needs at least 2 observations");
  auto mean_of = [](const std::vector<double>& x) {
    double sum = 0.0;
    for (double v : x) {
      if (!std::isfinite(v)) throw InputError("non-finite observation");
      sum += v;
    }
    return sum / static_cast<double>(x.size());
  };
  const double m1 = mean_of(data.sample1);
  const double m2 = mean_of(data.sample2);
  double ss = 0.0;
  for (double v : data.sample1) ss += (v - m1) * (v - m1);
  for (double v : data.sample2) ss += (v - m2) * (v - m2);
  if (!(ss > 0.0)) throw DegenerateDataError("pooled sum of squares is zero");
  return make_suff_stats(static_cast<int>(n), m1, m2, ss);
}

SuffStats make_suff_stats(int n, double mean1, double mean2, double s2) {
  if (n < 2) throw InputError("n must be at least 2");
  if (!(s2 > 0.0) || !std::isfinite(s2)) throw DegenerateDataError("s2 must be positive");
  SuffStats st;
  st.n = n;
  st.mean1 = mean1;
  st.mean2 = mean2;
  st.s2 = s2;
  st.s = std::sqrt(s2);
  st.w = (mean2 - mean1) / st.s;
  return st;
}

Loss Loss::linex(double a1) {
  if (a1 == 0.0 || !std::isfinite(a1)) throw DomainError("linex a1 must be finite and nonzero");
  return {Kind::Linex, a1};
}

std::string Loss::label() const {
  if (kind == Kind::SquaredError) return "l1";
  std::ostringstream out;
  out << "linex(" << a1 << ")";
  return out.str();
}

bool operator==(const Loss& a, const Loss& b) {
  return a.kind == b.kind && (a.kind == Loss::Kind::SquaredError || a.a1 == b.a1);
}

double loss_eval(const Loss& loss, double t) {
  if (loss.kind == Loss::Kind::SquaredError) return t * t;
  const double at = loss.a1 * t;
  return std::expm1(at) - at;
}

double loss_deriv(const Loss& loss, double t) {
  if (loss.kind == Loss::Kind::SquaredError) return 2.0 * t;
  return loss.a1 * std::expm1(loss.a1 * t);
}

double Params::eta(int n) const { return std::sqrt(static_cast<double>(n)) * (mu2 - mu1) / sigma; }

double equivariant_constant(const std::function<double(double)>& lprime, double shape, double tol) {
  if (!(shape > 0.0)) throw DomainError("equivariant_constant: shape must be positive");
  // Z = ln √U has log-density ln 2 + 2 k z − e^{2z}/2 − ln Γ(k) − k ln 2.
  const double log_norm = nm::kLn2 - nm::ln_gamma(shape) - shape * nm::kLn2;
  const double mode = 0.5 * std::log(2.0 * shape);
  auto log_density = [=](double z) { return log_norm + 2.0 * shape * z - 0.5 * std::exp(2.0 * z); };
  nm::QuadSpec spec{1e-14, 1e-12, 4000};
  auto moment = [&](double c) {
    auto integrand = [&](double z) {
      const double ld = log_density(z);
      if (ld < -745.0) return 0.0;
      return lprime(z + c) * std::exp(ld);
    };
    return nm::integrate_real_line(integrand, mode, spec).value;
  };
  double lo = -mode - 1.0;
  double hi = -mode + 1.0;
  for (int i = 0; i < 60 && moment(lo) > 0.0; ++i) lo -= 2.0 * (i + 1);
  for (int i = 0; i < 60 && moment(hi) < 0.0; ++i) hi += 2.0 * (i + 1);
  return nm::find_root(moment, lo, hi, tol);
}

namespace {

void require_gamma_args(const Loss& loss, double shape) {
  if (loss.kind == Loss::Kind::Linex && !(shape + 0.5 * loss.a1 > 0.0)) {
    std::ostringstream msg;
    msg << "linex constant undefined: shape + a1/2 = " << shape + 0.5 * loss.a1 << " <= 0";
    throw DomainError(msg.str());
  }
}

double closed_form_constant(const Loss& loss, double shape) {
  require_gamma_args(loss, shape);
  if (loss.kind == Loss::Kind::SquaredError) return -0.5 * (nm::kLn2 + nm::digamma(shape));
  const double a = loss.a1;
  return -(0.5 * a * nm::kLn2 + nm::ln_gamma(shape + 0.5 * a) - nm::ln_gamma(shape)) / a;
}

double generic_constant(const Loss& loss, double shape) {
  require_gamma_args(loss, shape);
  return equivariant_constant([&loss](double t) { return loss_deriv(loss, t); }, shape);
}

double d0_shape(int n) {
  if (n < 2) throw DomainError("n must be at least 2");
  return n - 1.0;
}

double m0_shape(int n) {
  if (n < 2) throw DomainError("n must be at least 2");
  return (2.0 * n - 1.0) / 2.0;
}

}  // namespace

double d0(const Loss& loss, int n) { return closed_form_constant(loss, d0_shape(n)); }
double d0_generic(const Loss& loss, int n) { return generic_constant(loss, d0_shape(n)); }
double m0(const Loss& loss, int n) { return closed_form_constant(loss, m0_shape(n)); }
double m0_generic(const Loss& loss, int n) { return generic_constant(loss, m0_shape(n)); }

TwoSampleData boeing_data() {
  // Boeing 720 planes 7907 and 7916, hours between air-conditioning failures.
  return {{194, 5, 41, 29, 33, 181}, {50, 254, 5, 283, 35, 12}};
}

}  // namespace entropy_lab::model
