#include "entropy_lab/estimators/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/quadrature.hpp"
#include "entropy_lab/numerics/roots.hpp"
#include "entropy_lab/numerics/special.hpp"

namespace entropy_lab::estimators {

namespace nm = entropy_lab::numerics;
using model::d0;
using model::m0;

namespace {

const nm::QuadSpec kJSpec{1e-300, 1e-13, 4000};

double half_log_1p_nw2(int n, double w) { return 0.5 * std::log1p(0.5 * n * w * w); }

double stein_term(const Loss& loss, int n, double w) { return m0(loss, n) + half_log_1p_nw2(n, w); }

double half_log_gamma_median(int n) {
  return 0.5 * std::log(nm::gamma_quantile((2.0 * n - 1.0) / 2.0, 2.0, 0.5));
}

// Piecewise rules shared by the free functions and Evaluator.
double stein_phi(double w, double d0v, double term) {
  if (w > 0.0) return std::min(d0v, term);
  if (w < 0.0) return std::max(d0v, term);
  return d0v;
}

double imle_phi(double w, double mle_c, double term) {
  if (w > 0.0) return std::min(mle_c, term);
  if (w < 0.0) return std::max(mle_c, term);
  return mle_c;
}

double irmle_phi(int n, double w, double mle_c, double term) {
  if (w < 0.0) return std::max(mle_c + 0.5 * std::log1p(0.5 * n * w * w), term);
  if (w > 0.0) return std::min(mle_c, term);
  return mle_c;
}

double rmle_phi(int n, double w, double mle_c) {
  return w < 0.0 ? mle_c + 0.5 * std::log1p(0.5 * n * w * w) : mle_c;
}

double clip_phi(double w, double phi, double bound) {
  if (w > 0.0) return std::min(phi, bound);
  if (w < 0.0) return std::max(phi, bound);
  return phi;
}

// Grid variable for the r0 table.
double t_of_y(double y) { return -std::expm1(-0.25 * std::log1p(y)); }
double y_of_t(double t) { return std::pow(1.0 - t, -4.0) - 1.0; }

}  // namespace

void PhiTable::validate() const {
  if (w.empty() || w.size() != phi.size()) throw InputError("phi table: grid and values differ in size");
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!(w[i] > w[i - 1])) throw InputError("phi table: grid must be strictly increasing");
  }
}

double PhiTable::operator()(double x) const {
  if (x <= w.front()) return phi.front();
  if (x >= w.back()) return phi.back();
  const auto it = std::upper_bound(w.begin(), w.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - w.begin());
  const double f = (x - w[i - 1]) / (w[i] - w[i - 1]);
  return phi[i - 1] + f * (phi[i] - phi[i - 1]);
}

EstimatorKind EstimatorKind::custom(PhiTable table) {
  table.validate();
  EstimatorKind k(Kind::Custom);
  k.phi = std::make_shared<const PhiTable>(std::move(table));
  return k;
}

std::string EstimatorKind::name() const {
  switch (tag) {
    case Kind::BAEE: return "baee";
    case Kind::UMVUE: return "umvue";
    case Kind::MLE: return "mle";
    case Kind::RMLE: return "rmle";
    case Kind::Stein: return "stein";
    case Kind::ImprovedMLE: return "imle";
    case Kind::ImprovedRMLE: return "irmle";
    case Kind::BrewsterZidek: return "bz";
    case Kind::PitmanClipped: return "pitman";
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

EstimatorKind parse_kind(const std::string& name) {
  for (Kind k : all_kinds()) {
    if (EstimatorKind(k).name() == name) return k;
  }
  throw InputError("unknown estimator '" + name + "'");
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> kinds = {Kind::BAEE,        Kind::UMVUE,         Kind::MLE,
                                          Kind::RMLE,        Kind::Stein,         Kind::ImprovedMLE,
                                          Kind::ImprovedRMLE, Kind::BrewsterZidek, Kind::PitmanClipped};
  return kinds;
}

double baee(const SuffStats& st, const Loss& loss) { return st.ln_s() + d0(loss, st.n); }

double umvue(const SuffStats& st) { return st.ln_s() + d0(Loss::squared_error(), st.n); }

double mle(const SuffStats& st) { return st.ln_s() - 0.5 * std::log(2.0 * st.n); }

double rmle(const SuffStats& st) {
  return st.ln_s() + rmle_phi(st.n, st.w, -0.5 * std::log(2.0 * st.n));
}

double stein(const SuffStats& st, const Loss& loss) {
  return st.ln_s() + stein_phi(st.w, d0(loss, st.n), stein_term(loss, st.n, st.w));
}

double improved_mle(const SuffStats& st, const Loss& loss) {
  return st.ln_s() + imle_phi(st.w, -0.5 * std::log(2.0 * st.n), stein_term(loss, st.n, st.w));
}

double improved_rmle(const SuffStats& st, const Loss& loss) {
  return st.ln_s() +
         irmle_phi(st.n, st.w, -0.5 * std::log(2.0 * st.n), stein_term(loss, st.n, st.w));
}

double brewster_zidek(const SuffStats& st, const Loss& loss) {
  return st.ln_s() + bz_r0(std::fabs(st.w), st.n, loss);
}

double bz_r0(double absw, int n, const Loss& loss) {
  if (std::isnan(absw) || absw < 0.0) throw DomainError("bz_r0: |w| must be >= 0");
  if (n < 2) throw DomainError("bz_r0: n must be at least 2");
  const double m0v = m0(loss, n);
  if (absw == 0.0) return m0v;
  const double a = n - 0.5;
  const double y = n * absw * absw;
  if (std::isinf(y)) return d0(loss, n);
  if (loss.kind == Loss::Kind::SquaredError) {
    const double j0 = nm::integrate_J(a, y, 0, kJSpec);
    const double j1 = nm::integrate_J(a, y, 1, kJSpec);
    return -0.5 * (nm::digamma(a) + 2.0 * nm::kLn2 - j1 / j0);
  }
  const double a1 = loss.a1;
  const double b = a + 0.5 * a1;
  if (!(b > 0.5)) throw DomainError("bz_r0: linex r0 requires n - 1 + a1/2 > 0");
  const double log_ratio = nm::ln_gamma(a) + std::log(nm::integrate_J(a, y, 0, kJSpec)) -
                           a1 * nm::kLn2 - nm::ln_gamma(b) -
                           std::log(nm::integrate_J(b, y, 0, kJSpec));
  return log_ratio / a1;
}

double bz_r0_generic(double absw, int n, const std::function<double(double)>& lprime) {
  if (std::isnan(absw) || absw < 0.0) throw DomainError("bz_r0_generic: |w| must be >= 0");
  if (n < 2) throw DomainError("bz_r0_generic: n must be at least 2");
  if (absw == 0.0) return model::equivariant_constant(lprime, (2.0 * n - 1.0) / 2.0);
  if (std::isinf(absw)) return model::equivariant_constant(lprime, n - 1.0);

  // Density of z = ln S given |W| <= α at η = 0, up to a constant:
  // exp((2n − 2) z − e^{2z}/2) · erf(c e^z) / c with c = √n α / 2.
  const double c = 0.5 * std::sqrt(static_cast<double>(n)) * absw;
  const double mode = 0.5 * std::log(2.0 * n - 1.5);
  const double log_peak = (2.0 * n - 2.0) * mode - 0.5 * std::exp(2.0 * mode);
  auto weight = [=](double z) {
    const double ez = std::exp(z);
    const double ld = (2.0 * n - 2.0) * z - 0.5 * ez * ez - log_peak;
    if (ld < -745.0) return 0.0;
    const double e = c < 1e-150 ? 2.0 * ez / std::sqrt(nm::kPi) : std::erf(c * ez) / c;
    return std::exp(ld) * e;
  };
  const nm::QuadSpec spec{1e-300, 1e-12, 4000};
  auto moment = [&](double r) {
    auto integrand = [&](double z) {
      const double wz = weight(z);
      return wz == 0.0 ? 0.0 : lprime(z + r) * wz;
    };
    return nm::integrate_real_line(integrand, mode, spec).value;
  };
  double lo = -mode - 1.0;
  double hi = -mode + 1.0;
  for (int i = 0; i < 60 && moment(lo) > 0.0; ++i) lo -= 2.0 * (i + 1);
  for (int i = 0; i < 60 && moment(hi) < 0.0; ++i) hi += 2.0 * (i + 1);
  return nm::find_root(moment, lo, hi, 1e-12);
}

R0Table::R0Table(const Loss& loss, int n, std::size_t intervals)
    : loss_(loss), n_(n), d0_(d0(loss, n)), m0_(m0(loss, n)) {
  if (intervals < 8) throw InputError("R0Table: need at least 8 intervals");
  const std::size_t size = intervals + 1;
  t_.resize(size);
  r_.resize(size);
  slope_.resize(size);
  const double h = 1.0 / static_cast<double>(intervals);
  for (std::size_t i = 0; i < size; ++i) {
    t_[i] = static_cast<double>(i) * h;
    if (i == 0) {
      r_[i] = m0_;
    } else if (i == intervals) {
      r_[i] = d0_;
    } else {
      const double y = y_of_t(t_[i]);
      r_[i] = bz_r0(std::sqrt(y / n), n, loss);
    }
  }
  // Fourth-order differences: centered inside, one-sided near the ends.
  const std::size_t last = intervals;
  for (std::size_t i = 0; i <= last; ++i) {
    if (i >= 2 && i + 2 <= last) {
      slope_[i] = (r_[i - 2] - 8.0 * r_[i - 1] + 8.0 * r_[i + 1] - r_[i + 2]) / (12.0 * h);
    } else if (i < 2) {
      slope_[i] = (-25.0 * r_[i] + 48.0 * r_[i + 1] - 36.0 * r_[i + 2] + 16.0 * r_[i + 3] -
                   3.0 * r_[i + 4]) / (12.0 * h);
    } else {
      slope_[i] = (25.0 * r_[i] - 48.0 * r_[i - 1] + 36.0 * r_[i - 2] - 16.0 * r_[i - 3] +
                   3.0 * r_[i - 4]) / (12.0 * h);
    }
  }
  // Fritsch–Carlson limiting keeps the interpolant monotone.
  for (std::size_t i = 0; i < intervals; ++i) {
    const double secant = (r_[i + 1] - r_[i]) / h;
    if (secant == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double alpha = slope_[i] / secant;
    const double beta = slope_[i + 1] / secant;
    if (alpha < 0.0) slope_[i] = 0.0;
    if (beta < 0.0) slope_[i + 1] = 0.0;
    const double norm = alpha * alpha + beta * beta;
    if (norm > 9.0) {
      const double tau = 3.0 / std::sqrt(norm);
      slope_[i] = tau * alpha * secant;
      slope_[i + 1] = tau * beta * secant;
    }
  }
}

double R0Table::operator()(double absw) const {
  if (absw == 0.0) return m0_;
  const double t = t_of_y(n_ * absw * absw);
  if (!(t < 1.0)) return d0_;
  const std::size_t intervals = t_.size() - 1;
  const double h = 1.0 / static_cast<double>(intervals);
  std::size_t i = static_cast<std::size_t>(t / h);
  if (i >= intervals) i = intervals - 1;
  const double u = (t - t_[i]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * r_[i] + (u3 - 2.0 * u2 + u) * h * slope_[i] +
         (-2.0 * u3 + 3.0 * u2) * r_[i + 1] + (u3 - u2) * h * slope_[i + 1];
}

void R0Table::write_csv(std::ostream& out) const {
  out << "absw,r0\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 1; i + 1 < t_.size(); ++i) {
    out << std::sqrt(y_of_t(t_[i]) / n_) << ',' << r_[i] << '\n';
  }
  out.precision(old_precision);
}

std::shared_ptr<const R0Table> r0_table(const Loss& loss, int n) {
  using Key = std::tuple<int, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const R0Table>> cache;
  const Key key{static_cast<int>(loss.kind), loss.kind == Loss::Kind::Linex ? loss.a1 : 0.0, n};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const R0Table>(loss, n);
  cache.emplace(key, table);
  return table;
}

double conditional_median(double w, double eta, int n) {
  if (n < 2) throw DomainError("conditional_median: n must be at least 2");
  if (std::isnan(eta) || eta < 0.0) throw DomainError("conditional_median: eta must be >= 0");
  if (!std::isfinite(w)) throw DomainError("conditional_median: w must be finite");
  const double shape = (2.0 * n - 1.0) / 2.0;
  if (eta == 0.0) {
    return std::log(nm::gamma_quantile(shape, 2.0, 0.5)) - std::log1p(0.5 * n * w * w);
  }
  // Density of z = ln √V given W = w, up to a constant.
  const double rn = std::sqrt(static_cast<double>(n));
  auto log_f = [=](double z) {
    const double ez = std::exp(z);
    const double q = rn * ez * w - eta;
    return (2.0 * n - 1.0) * z - 0.5 * (ez * ez + 0.5 * q * q);
  };
  // Locate the mode by maximizing log_f (its derivative is decreasing).
  auto dlog_f = [=](double z) {
    const double ez = std::exp(z);
    return (2.0 * n - 1.0) - ez * ez - 0.5 * (rn * ez * w - eta) * rn * ez * w;
  };
  const double mode = nm::find_root(dlog_f, -50.0, 10.0, 1e-13);
  const double log_peak = log_f(mode);
  auto f = [&](double z) {
    const double ld = log_f(z) - log_peak;
    return ld < -745.0 ? 0.0 : std::exp(ld);
  };
  const nm::QuadSpec spec{1e-300, 1e-12, 4000};
  const double lower = nm::integrate_to_infinity([&](double x) { return f(2.0 * mode - x); }, mode, spec).value;
  const double upper = nm::integrate_to_infinity(f, mode, spec).value;
  const double total = lower + upper;
  // Mass below z, measured from the mode to keep the integrals short.
  auto excess = [&](double z) {
    const double part = nm::integrate(f, mode, z, spec).value;
    return (lower + part) / total - 0.5;
  };
  double lo = mode - 0.5;
  double hi = mode + 0.5;
  while (excess(lo) > 0.0) lo -= 0.5;
  while (excess(hi) < 0.0) hi += 0.5;
  const double z_med = nm::find_root(excess, lo, hi, 1e-13);
  return 2.0 * z_med;
}

double pitman_clipped(const SuffStats& st, const std::function<double(double)>& base_phi,
                      const std::function<double(double)>& bound) {
  const double phi = base_phi(st.w);
  if (st.w == 0.0) return st.ln_s() + phi;
  const double b = bound ? bound(st.w) : -0.5 * conditional_median(st.w, 0.0, st.n);
  return st.ln_s() + clip_phi(st.w, phi, b);
}

double pitman_clipped(const SuffStats& st, const Loss& loss) {
  const double d0v = d0(loss, st.n);
  return pitman_clipped(st, [d0v](double) { return d0v; });
}

double custom(const SuffStats& st, const PhiTable& table) { return st.ln_s() + table(st.w); }

double estimate(const EstimatorKind& kind, const SuffStats& st, const Loss& loss) {
  switch (kind.tag) {
    case Kind::BAEE: return baee(st, loss);
    case Kind::UMVUE: return umvue(st);
    case Kind::MLE: return mle(st);
    case Kind::RMLE: return rmle(st);
    case Kind::Stein: return stein(st, loss);
    case Kind::ImprovedMLE: return improved_mle(st, loss);
    case Kind::ImprovedRMLE: return improved_rmle(st, loss);
    case Kind::BrewsterZidek: return brewster_zidek(st, loss);
    case Kind::PitmanClipped: return pitman_clipped(st, loss);
    case Kind::Custom:
      if (!kind.phi) throw InputError("custom estimator without a phi table");
      return custom(st, *kind.phi);
  }
  throw InputError("unknown estimator kind");
}

double entropy_from_log_sigma(double tau) { return 1.0 + std::log(2.0 * nm::kPi) + 2.0 * tau; }

EstimateReport report(const EstimatorKind& kind, const SuffStats& st, const Loss& loss) {
  EstimateReport r;
  r.kind = kind;
  r.loss = loss;
  r.value = estimate(kind, st, loss);
  r.entropy_value = entropy_from_log_sigma(r.value);
  return r;
}

Evaluator::Evaluator(const Loss& loss, int n, bool bz_table)
    : loss_(loss),
      n_(n),
      d0_(model::d0(loss, n)),
      m0_(model::m0(loss, n)),
      half_log_2n_(0.5 * std::log(2.0 * n)),
      half_log_median_(half_log_gamma_median(n)),
      table_(bz_table ? r0_table(loss, n) : nullptr) {}

double Evaluator::operator()(const EstimatorKind& kind, const SuffStats& st) const {
  if (st.n != n_) throw InputError("Evaluator: sample size mismatch");
  const double w = st.w;
  const double mle_c = -half_log_2n_;
  double phi = 0.0;
  switch (kind.tag) {
    case Kind::BAEE: phi = d0_; break;
    case Kind::UMVUE: phi = model::d0(Loss::squared_error(), n_); break;
    case Kind::MLE: phi = mle_c; break;
    case Kind::RMLE: phi = rmle_phi(n_, w, mle_c); break;
    case Kind::Stein: phi = stein_phi(w, d0_, m0_ + half_log_1p_nw2(n_, w)); break;
    case Kind::ImprovedMLE: phi = imle_phi(w, mle_c, m0_ + half_log_1p_nw2(n_, w)); break;
    case Kind::ImprovedRMLE: phi = irmle_phi(n_, w, mle_c, m0_ + half_log_1p_nw2(n_, w)); break;
    case Kind::BrewsterZidek:
      if (!table_) throw InputError("Evaluator built without the bz table");
      phi = (*table_)(std::fabs(w));
      break;
    case Kind::PitmanClipped:
      phi = clip_phi(w, d0_, half_log_1p_nw2(n_, w) - half_log_median_);
      break;
    case Kind::Custom:
      if (!kind.phi) throw InputError("custom estimator without a phi table");
      phi = (*kind.phi)(w);
      break;
  }
  return st.ln_s() + phi;
}

IerdReport ierd_check(const std::vector<double>& y_grid, const std::vector<double>& phi,
                      const Loss& loss, int n) {
  if (y_grid.empty() || y_grid.size() != phi.size()) {
    throw InputError("ierd_check: grid and values differ in size");
  }
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > 0.0)) throw InputError("ierd_check: grid must lie in (0, inf)");
    if (i > 0 && !(y_grid[i] > y_grid[i - 1])) throw InputError("ierd_check: grid must be sorted");
  }
  constexpr double kSlack = 1e-10;
  IerdReport rep;
  rep.monotone = true;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    if (phi[i] < phi[i - 1] - kSlack) rep.monotone = false;
  }
  rep.limit_ok = std::fabs(phi.back() - d0(loss, n)) <= 1e-4;
  rep.dominates = true;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] < bz_r0(std::sqrt(y_grid[i]), n, loss) - kSlack) rep.dominates = false;
  }
  return rep;
}

double lemma_integral(double x, int n, double eta, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("lemma_integral: alpha must be positive");
  const double k = std::sqrt(static_cast<double>(n)) * std::exp(x);
  auto f = [=](double w) {
    const double q = k * w - eta;
    return std::exp(-0.25 * q * q);
  };
  const nm::QuadSpec spec{1e-300, 1e-12, 4000};
  // Split at the peak w = η/k so a narrow bump is never straddled.
  const double peak = eta / k;
  if (peak > -alpha && peak < alpha) {
    return nm::integrate(f, -alpha, peak, spec).value + nm::integrate(f, peak, alpha, spec).value;
  }
  return nm::integrate(f, -alpha, alpha, spec).value;
}

double lemma_integral_closed(double x, int n, double eta, double alpha) {
  const double k = std::sqrt(static_cast<double>(n)) * std::exp(x);
  const double r2 = std::sqrt(2.0);
  return 2.0 * std::sqrt(nm::kPi) *
         (nm::std_normal_cdf((k * alpha - eta) / r2) - nm::std_normal_cdf((-k * alpha - eta) / r2)) / k;
}

double lemma_ratio(double y, int n, double eta, double alpha, double d1, double d2) {
  return lemma_integral(y - d2, n, eta, alpha) / lemma_integral(y - d1, n, eta, alpha);
}

}  // namespace entropy_lab::estimators
