#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entropy_lab/model/model.hpp"
#include "entropy_lab/numerics/rng.hpp"

namespace entropy_lab::intervals {

using model::SuffStats;
using model::TwoSampleData;
using numerics::RngStream;

enum class Method { ACI, BootP, BootT, GCI, HPD };

/// "aci", "boot-p", "boot-t", "gci", "hpd".
std::string method_name(Method m);
Method parse_method(const std::string& name);

struct Diagnostics {
  std::optional<double> acceptance_rate;
  std::optional<double> ess;
  std::optional<double> proposal_sd;
  std::size_t draws = 0;
  std::size_t redraws = 0;  // degenerate bootstrap resamples replaced
  std::vector<std::string> warnings;
};

struct IntervalResult {
  Method method = Method::ACI;
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
  double length = 0.0;
  Diagnostics diagnostics;
};

/// {method, level, lower, upper, length, diagnostics{...}} on one line.
std::string to_json(const IntervalResult& r);

struct BootConfig {
  std::size_t K = 3000;
  std::uint64_t seed = 1;
};

struct McmcConfig {
  std::size_t N = 11000;  // total iterations
  std::size_t N0 = 1000;  // burn-in
  double proposal_sd = 0.0;  // 0: 2.4 (SS/2) / ((n − 1) √n) at the data
  std::uint64_t seed = 1;
  std::size_t thin = 1;
  bool adapt = true;  // tune proposal_sd during burn-in only
};

/// ln σ̂ ± z / (2√n), σ̂² = S²/(2n).
IntervalResult aci(const SuffStats& st, double level);
IntervalResult aci(const TwoSampleData& data, double level);

/// Quantiles of T = ln s − ½ ln V, V ~ χ²_{2(n−1)}.
IntervalResult gci_umvue(const SuffStats& st, double level, std::size_t draws, RngStream& rng);
IntervalResult gci_umvue(const SuffStats& st, double level, std::size_t draws, std::uint64_t seed);

/// Parametric bootstrap draws η*_k = ln σ̂*_k at the fitted MLEs.
struct BootDraws {
  double eta_hat = 0.0;
  std::vector<double> eta_star;  // sorted
  std::size_t redraws = 0;
};
BootDraws bootstrap_draws(const SuffStats& st, std::size_t K, RngStream& rng);

/// Percentile interval of η*.
IntervalResult boot_p(const BootDraws& draws, double level);
/// Studentized with the constant variance 1/(4n): T_k = (η*_k − η̂)·2√n, and
/// the interval η̂ − [T_(1−α/2), T_(α/2)] / (2√n). Same length as boot_p.
IntervalResult boot_t(const BootDraws& draws, double level, int n);

IntervalResult boot_p(const TwoSampleData& data, double level, const BootConfig& cfg);
IntervalResult boot_t(const TwoSampleData& data, double level, const BootConfig& cfg);

/// Draws of β = σ² from the random-walk Metropolis step with (μ1, μ2) held
/// fixed; the stationary law is inverse-gamma(n, SS/2).
struct BetaChain {
  std::vector<double> beta;
  double acceptance_rate = 0.0;
  double proposal_sd = 0.0;
};
BetaChain beta_chain_fixed_means(const SuffStats& st, double mu1, double mu2, const McmcConfig& cfg);

struct PosteriorDraws {
  std::vector<double> theta;  // ½ ln β after burn-in and thinning
  double acceptance_rate = 0.0;
  double proposal_sd = 0.0;
};
/// Gibbs for (μ1, μ2) with Metropolis for β.
PosteriorDraws posterior_draws(const SuffStats& st, const McmcConfig& cfg, RngStream& rng);

IntervalResult hpd_mcmc(const SuffStats& st, double level, const McmcConfig& cfg, RngStream& rng);
IntervalResult hpd_mcmc(const TwoSampleData& data, double level, const McmcConfig& cfg);

/// Shortest window holding ⌊level·M⌋ + 1 order statistics; ties keep the
/// first. Expects ascending draws.
std::pair<double, double> chen_shao_hpd(const std::vector<double>& sorted_draws, double level);

/// Effective sample size from the initial positive sequence of
/// autocorrelation pairs.
double effective_sample_size(const std::vector<double>& chain);

/// Linear-interpolation quantile of ascending data.
double empirical_quantile(const std::vector<double>& sorted, double p);

}  // namespace entropy_lab::intervals
