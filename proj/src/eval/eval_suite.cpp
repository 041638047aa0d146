#include "entropy_lab/eval/eval_suite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/parallel.hpp"
#include "entropy_lab/numerics/running_stats.hpp"
#include "entropy_lab/numerics/special.hpp"

namespace entropy_lab::eval {

namespace nm = entropy_lab::numerics;
using intervals::IntervalResult;
using model::SuffStats;

namespace {

constexpr std::size_t kBlock = 64;

struct MethodTally {
  nm::RunningStats covered;
  nm::RunningStats length;
  std::size_t failures = 0;
  std::size_t first_failure = std::numeric_limits<std::size_t>::max();
  std::string first_message;
};

std::size_t inner_reps(const CoverageConfig& cfg, Method m) {
  switch (m) {
    case Method::ACI: return 0;
    case Method::BootP:
    case Method::BootT: return cfg.boot_K;
    case Method::GCI: return cfg.gci_draws;
    case Method::HPD: return cfg.mcmc_draws;
  }
  return 0;
}

void validate(const CoverageConfig& cfg) {
  if (cfg.n_grid.empty()) throw InputError("coverage: empty n grid");
  for (int n : cfg.n_grid) {
    if (n < 2) throw InputError("coverage: n must be at least 2");
  }
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) throw InputError("coverage: sigma must be positive");
  if (cfg.outer_reps < 2) throw InputError("coverage: need at least 2 outer replications");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw InputError("coverage: level must lie in (0, 1)");
  if (cfg.methods.empty()) throw InputError("coverage: no methods requested");
}

double sample_mean(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  return m / static_cast<double>(x.size());
}

double sample_var(const std::vector<double>& x) {
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

void check_sample(const std::vector<double>& x, std::size_t min_n, const char* what) {
  if (x.size() < min_n) throw InputError(std::string(what) + ": sample too small");
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + ": non-finite value");
  }
}

}  // namespace

CoverageConfig CoverageConfig::paper_scale() {
  CoverageConfig cfg;
  cfg.outer_reps = 30000;
  cfg.boot_K = 3000;
  cfg.gci_draws = 10000;
  cfg.mcmc_draws = 10000;
  cfg.mcmc_burnin = 1000;
  return cfg;
}

const CoverageRow& CoverageResult::at(Method m, int n) const {
  for (const CoverageRow& r : rows) {
    if (r.method == m && r.n == n) return r;
  }
  throw InputError("no coverage row for " + intervals::method_name(m));
}

CoverageResult coverage_study(const CoverageConfig& cfg) {
  validate(cfg);
  const std::size_t n_methods = cfg.methods.size();
  const double target = std::log(cfg.sigma);
  const int threads = nm::resolve_threads(cfg.threads);
  CoverageResult result;

  for (int n : cfg.n_grid) {
    const std::size_t n_blocks = (cfg.outer_reps + kBlock - 1) / kBlock;
    std::vector<std::vector<MethodTally>> partial(n_blocks);
    intervals::McmcConfig mcmc;
    mcmc.N0 = cfg.mcmc_burnin;
    mcmc.N = cfg.mcmc_burnin + cfg.mcmc_draws;

    nm::parallel_blocks(n_blocks, threads, [&](std::size_t block) {
      std::vector<MethodTally> tally(n_methods);
      model::TwoSampleData data;
      data.sample1.resize(n);
      data.sample2.resize(n);
      const std::size_t begin = block * kBlock;
      const std::size_t end = std::min(cfg.outer_reps, begin + kBlock);
      for (std::size_t rep = begin; rep < end; ++rep) {
        nm::RngStream base = nm::RngStream(cfg.master_seed, rep).child(static_cast<std::uint64_t>(n));
        for (double& v : data.sample1) v = cfg.sigma * base.std_normal();
        for (double& v : data.sample2) v = cfg.sigma * base.std_normal();
        SuffStats st;
        try {
          st = model::suff_stats(data);
        } catch (const std::exception& ex) {
          throw ReplicationError(rep, ex.what());
        }
        // Bootstrap draws are shared by the two bootstrap intervals.
        bool have_boot = false;
        intervals::BootDraws boot;
        for (std::size_t k = 0; k < n_methods; ++k) {
          const Method m = cfg.methods[k];
          MethodTally& t = tally[k];
          try {
            IntervalResult r;
            switch (m) {
              case Method::ACI: r = intervals::aci(st, cfg.level); break;
              case Method::GCI: {
                nm::RngStream rng = base.child(101);
                r = intervals::gci_umvue(st, cfg.level, cfg.gci_draws, rng);
                break;
              }
              case Method::BootP:
              case Method::BootT: {
                if (!have_boot) {
                  nm::RngStream rng = base.child(102);
                  boot = intervals::bootstrap_draws(st, cfg.boot_K, rng);
                  have_boot = true;
                }
                r = m == Method::BootP ? intervals::boot_p(boot, cfg.level)
                                       : intervals::boot_t(boot, cfg.level, n);
                break;
              }
              case Method::HPD: {
                nm::RngStream rng = base.child(103);
                r = intervals::hpd_mcmc(st, cfg.level, mcmc, rng);
                break;
              }
            }
            t.covered.push(r.lower <= target && target <= r.upper ? 1.0 : 0.0);
            t.length.push(r.length);
          } catch (const std::exception& ex) {
            ++t.failures;
            if (rep < t.first_failure) {
              t.first_failure = rep;
              t.first_message = ex.what();
            }
          }
        }
      }
      partial[block] = std::move(tally);
    });

    for (std::size_t k = 0; k < n_methods; ++k) {
      MethodTally total;
      for (const auto& block : partial) {
        const MethodTally& t = block[k];
        total.covered.merge(t.covered);
        total.length.merge(t.length);
        total.failures += t.failures;
        if (t.first_failure < total.first_failure) {
          total.first_failure = t.first_failure;
          total.first_message = t.first_message;
        }
      }
      if (static_cast<double>(total.failures) > 1e-3 * static_cast<double>(cfg.outer_reps)) {
        throw ReplicationError(total.first_failure,
                               intervals::method_name(cfg.methods[k]) + ": " + total.first_message);
      }
      CoverageRow row;
      row.method = cfg.methods[k];
      row.n = n;
      row.level = cfg.level;
      row.cp = total.covered.mean;
      row.cp_stderr = std::sqrt(row.cp * (1.0 - row.cp) / static_cast<double>(total.covered.count));
      row.al = total.length.mean;
      row.pcd = row.cp / row.al;
      row.outer_reps = total.covered.count;
      row.inner_reps = inner_reps(cfg, row.method);
      row.seed = cfg.master_seed;
      row.failures = total.failures;
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_coverage_csv(std::ostream& out, const CoverageResult& result) {
  const auto old_precision = out.precision(10);
  out << "method,n,level,cp,cp_stderr,al,pcd,outer_reps,inner_reps,seed\n";
  for (const CoverageRow& r : result.rows) {
    out << intervals::method_name(r.method) << ',' << r.n << ',' << r.level << ',' << r.cp << ','
        << r.cp_stderr << ',' << r.al << ',' << r.pcd << ',' << r.outer_reps << ',' << r.inner_reps
        << ',' << r.seed << '\n';
  }
  out.precision(old_precision);
}

TestResult ks_test_normal(const std::vector<double>& sample, double mean, double sd, KsDistribution dist) {
  check_sample(sample, 1, "ks_test");
  if (!(sd > 0.0) || !std::isfinite(mean)) throw InputError("ks_test: invalid null parameters");
  std::vector<double> x = sample;
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = nm::std_normal_cdf((x[i] - mean) / sd);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  TestResult r;
  r.statistic = d;
  r.df1 = n;
  r.p_value = dist == KsDistribution::Exact ? nm::kolmogorov_sf_exact(n, d)
                                            : nm::kolmogorov_survival(std::sqrt(static_cast<double>(n)) * d);
  return r;
}

TestResult ks_normality(const std::vector<double>& sample, KsDistribution dist) {
  check_sample(sample, 3, "ks_normality");
  const double sd = std::sqrt(sample_var(sample));
  if (!(sd > 0.0)) throw DegenerateDataError("ks_normality: constant sample");
  return ks_test_normal(sample, sample_mean(sample), sd, dist);
}

TestResult f_test_equal_var(const std::vector<double>& s1, const std::vector<double>& s2) {
  check_sample(s1, 2, "f_test");
  check_sample(s2, 2, "f_test");
  const double v1 = sample_var(s1);
  const double v2 = sample_var(s2);
  if (!(v1 > 0.0) || !(v2 > 0.0)) throw DegenerateDataError("f_test: zero variance");
  TestResult r;
  r.statistic = v1 / v2;
  r.df1 = static_cast<double>(s1.size() - 1);
  r.df2 = static_cast<double>(s2.size() - 1);
  const double lower = nm::f_cdf(r.df1, r.df2, r.statistic);
  r.p_value = std::min(1.0, 2.0 * std::min(lower, 1.0 - lower));
  return r;
}

TestResult t_test_ordered_means(const std::vector<double>& s1, const std::vector<double>& s2) {
  check_sample(s1, 2, "t_test");
  check_sample(s2, 2, "t_test");
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  const double df = n1 + n2 - 2.0;
  const double sp2 = ((n1 - 1.0) * sample_var(s1) + (n2 - 1.0) * sample_var(s2)) / df;
  if (!(sp2 > 0.0)) throw DegenerateDataError("t_test: zero pooled variance");
  TestResult r;
  r.statistic = (sample_mean(s1) - sample_mean(s2)) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
  r.df1 = df;
  r.p_value = 1.0 - nm::student_t_cdf(df, r.statistic);
  return r;
}

}  // namespace entropy_lab::eval
