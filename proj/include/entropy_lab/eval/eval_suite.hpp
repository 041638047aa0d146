#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entropy_lab/intervals/intervals.hpp"

namespace entropy_lab::eval {

using intervals::Method;

struct CoverageConfig {
  std::vector<int> n_grid{10};
  double sigma = 1.0;
  std::size_t outer_reps = 5000;
  std::vector<Method> methods{Method::ACI, Method::BootP, Method::BootT, Method::GCI, Method::HPD};
  double level = 0.95;
  std::uint64_t master_seed = 1;
  std::size_t boot_K = 1000;
  std::size_t gci_draws = 1000;
  std::size_t mcmc_draws = 1000;  // post-burn-in iterations
  std::size_t mcmc_burnin = 500;
  int threads = 0;

  /// Outer 30,000; bootstrap 3,000; pivot 10,000; MCMC 10,000 after 1,000 burn-in.
  static CoverageConfig paper_scale();
};

struct CoverageRow {
  Method method = Method::ACI;
  int n = 0;
  double level = 0.95;
  double cp = 0.0;
  double cp_stderr = 0.0;
  double al = 0.0;
  double pcd = 0.0;  // cp / al
  std::size_t outer_reps = 0;  // successful replications
  std::size_t inner_reps = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
};

struct CoverageResult {
  std::vector<CoverageRow> rows;  // n-major, methods in config order

  /// Throws InputError when absent.
  const CoverageRow& at(Method m, int n) const;
};

/// Outer replication r at sample size n draws both samples from
/// N(0, σ²) on stream (master_seed, r) split by n; each method gets its own
/// child stream, so adding a method leaves the others unchanged. A method
/// failing in more than 0.1% of replications raises ReplicationError.
CoverageResult coverage_study(const CoverageConfig& cfg);

/// Header: method,n,level,cp,cp_stderr,al,pcd,outer_reps,inner_reps,seed
void write_coverage_csv(std::ostream& out, const CoverageResult& result);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

enum class KsDistribution { Exact, Asymptotic };

/// One-sample KS test against the fully specified N(mean, sd²).
TestResult ks_test_normal(const std::vector<double>& sample, double mean, double sd,
                          KsDistribution dist = KsDistribution::Exact);

/// One-sample KS distance to N(x̄, s²), s with divisor n − 1. The p-value
/// treats the fitted normal as fully specified.
TestResult ks_normality(const std::vector<double>& sample,
                        KsDistribution dist = KsDistribution::Exact);

/// F = s1² / s2² with a two-sided p-value.
TestResult f_test_equal_var(const std::vector<double>& s1, const std::vector<double>& s2);

/// Pooled t = (x̄1 − x̄2) / (sp √(1/n1 + 1/n2)) and p = P(T ≥ t): small p is
/// evidence against μ1 ≤ μ2.
TestResult t_test_ordered_means(const std::vector<double>& s1, const std::vector<double>& s2);

}  // namespace entropy_lab::eval
