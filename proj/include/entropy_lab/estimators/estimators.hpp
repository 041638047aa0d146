#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "entropy_lab/model/model.hpp"

namespace entropy_lab::estimators {

using model::Loss;
using model::SuffStats;

/// Tabulated additive term φ(w), linear between nodes, flat outside.
struct PhiTable {
  std::vector<double> w;
  std::vector<double> phi;

  /// Throws InputError unless w is strictly increasing and sizes match.
  void validate() const;
  double operator()(double w_value) const;
};

enum class Kind {
  BAEE,
  UMVUE,
  MLE,
  RMLE,
  Stein,
  ImprovedMLE,
  ImprovedRMLE,
  BrewsterZidek,
  PitmanClipped,
  Custom
};

struct EstimatorKind {
  Kind tag = Kind::BAEE;
  std::shared_ptr<const PhiTable> phi;  // Custom only

  EstimatorKind() = default;
  EstimatorKind(Kind k) : tag(k) {}  // NOLINT: implicit by design
  static EstimatorKind custom(PhiTable table);

  std::string name() const;
};

/// Names as printed by name(): baee, umvue, mle, rmle, stein, imle, irmle,
/// bz, pitman. Throws InputError otherwise.
EstimatorKind parse_kind(const std::string& name);

/// Every non-custom kind, in reporting order.
const std::vector<Kind>& all_kinds();

// Point estimators of ln σ. Piecewise rules take the BAEE-type branch at w = 0.
double baee(const SuffStats& st, const Loss& loss);
double umvue(const SuffStats& st);
double mle(const SuffStats& st);
double rmle(const SuffStats& st);
double stein(const SuffStats& st, const Loss& loss);
double improved_mle(const SuffStats& st, const Loss& loss);
double improved_rmle(const SuffStats& st, const Loss& loss);
double brewster_zidek(const SuffStats& st, const Loss& loss);

/// Additive term of the smooth Brewster–Zidek rule, r0(|w|), for the L1 and
/// linex families (closed form via integrate_J). absw = 0 gives m0.
double bz_r0(double absw, int n, const Loss& loss);

/// Same quantity from its defining equation: the root r of
/// ∫ L'(z + r) f(z) dz = 0, where f is the density of ln S given |W| ≤ absw
/// at η = 0. Works for any increasing derivative.
double bz_r0_generic(double absw, int n, const std::function<double(double)>& loss_deriv);

/// Monotone cubic interpolant of r0 on t = 1 − (1 + n w²)^{-1/4} ∈ [0, 1].
class R0Table {
 public:
  R0Table(const Loss& loss, int n, std::size_t intervals = 1024);

  double operator()(double absw) const;
  int n() const { return n_; }
  const Loss& loss() const { return loss_; }

  /// Rows (absw, r0) at the interior nodes, header "absw,r0".
  void write_csv(std::ostream& out) const;

 private:
  Loss loss_;
  int n_;
  double d0_;
  double m0_;
  std::vector<double> t_;
  std::vector<double> r_;
  std::vector<double> slope_;
};

/// Shared table for (loss, n); built once, then read concurrently.
std::shared_ptr<const R0Table> r0_table(const Loss& loss, int n);

/// Median of ln V given W = w when η = √n(μ2 − μ1)/σ (σ = 1 scale, V = S²).
/// Closed form at η = 0, quadrature plus root-solve otherwise.
double conditional_median(double w, double eta, int n);

/// ln S + φ*(w), where φ* clips base_phi(w) at −½ m_0(w): from above for
/// w > 0, from below for w < 0, untouched at w = 0. The optional bound
/// replaces −½ m_0(w).
double pitman_clipped(const SuffStats& st, const std::function<double(double)>& base_phi,
                      const std::function<double(double)>& bound = {});

/// pitman_clipped with base φ ≡ d0(loss, n).
double pitman_clipped(const SuffStats& st, const Loss& loss);

double custom(const SuffStats& st, const PhiTable& table);

double estimate(const EstimatorKind& kind, const SuffStats& st, const Loss& loss);

/// Entropy of N(·, σ²) at ln σ = tau.
double entropy_from_log_sigma(double tau);

struct EstimateReport {
  EstimatorKind kind;
  Loss loss;
  double value = 0.0;
  double entropy_value = 0.0;
};

EstimateReport report(const EstimatorKind& kind, const SuffStats& st, const Loss& loss);

/// Precomputed constants for repeated evaluation at one (loss, n); the
/// Brewster–Zidek term comes from the shared interpolation table, which is
/// skipped when `bz_table` is false (evaluating bz then throws InputError).
class Evaluator {
 public:
  Evaluator(const Loss& loss, int n, bool bz_table = true);

  double operator()(const EstimatorKind& kind, const SuffStats& st) const;

  double d0() const { return d0_; }
  double m0() const { return m0_; }

 private:
  Loss loss_;
  int n_;
  double d0_;
  double m0_;
  double half_log_2n_;
  double half_log_median_;  // ½ ln median of Gamma((2n−1)/2, 2)
  std::shared_ptr<const R0Table> table_;
};

struct IerdReport {
  bool monotone = false;
  bool limit_ok = false;
  bool dominates = false;
};

/// Checks the three dominance conditions for φ tabulated on y = w²:
/// φ nondecreasing, φ(y_max) within 1e-4 of d0, and φ ≥ φ* with
/// φ*(y) = bz_r0(√y, n, loss). Throws InputError for an unsorted grid.
IerdReport ierd_check(const std::vector<double>& y_grid, const std::vector<double>& phi,
                      const Loss& loss, int n);

/// I(x) = ∫_{−α}^{α} exp(−¼(√n e^{x} w − η)²) dw by quadrature.
double lemma_integral(double x, int n, double eta, double alpha);

/// Same integral through the normal CDF.
double lemma_integral_closed(double x, int n, double eta, double alpha);

/// R(y) = I(y − d2) / I(y − d1).
double lemma_ratio(double y, int n, double eta, double alpha, double d1, double d2);

}  // namespace entropy_lab::estimators
