#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"

#include "entropy_lab/errors.hpp"
#include "entropy_lab/intervals/intervals.hpp"
#include "entropy_lab/numerics/special.hpp"

using namespace entropy_lab;
using namespace entropy_lab::intervals;
namespace nm = entropy_lab::numerics;

namespace {

const double kBoeingEtaHat = 4.586479316769286;

TwoSampleData transform(const TwoSampleData& d, double scale, double shift1, double shift2) {
  TwoSampleData out = d;
  for (double& v : out.sample1) v = scale * v + shift1;
  for (double& v : out.sample2) v = scale * v + shift2;
  return out;
}

TwoSampleData normal_data(int n, std::uint64_t seed) {
  RngStream rng(seed, 3);
  TwoSampleData d;
  for (int j = 0; j < n; ++j) d.sample1.push_back(rng.std_normal());
  for (int j = 0; j < n; ++j) d.sample2.push_back(rng.std_normal());
  return d;
}

double ks_distance_inverse_gamma(std::vector<double> draws, double shape, double scale) {
  std::sort(draws.begin(), draws.end());
  const double m = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = nm::gamma_q(shape, scale / draws[i]);
    d = std::max({d, std::fabs(f - i / m), std::fabs(f - (i + 1) / m)});
  }
  return d;
}

}  // namespace

TEST_CASE("asymptotic interval on Boeing") {
  const IntervalResult r = aci(model::boeing_data(), 0.95);
  CHECK(std::fabs(r.lower - 4.186403343739678) < 1e-12);
  CHECK(std::fabs(r.upper - 4.986555289798896) < 1e-12);
  CHECK(r.length == doctest::Approx(r.upper - r.lower));
  const IntervalResult tiny = aci(model::boeing_data(), 1e-9);
  CHECK(std::fabs(tiny.lower - kBoeingEtaHat) < 1e-8);
  CHECK_THROWS_AS(aci(model::boeing_data(), 1.0), DomainError);
}

TEST_CASE("generalized pivot interval on Boeing") {
  const SuffStats st = model::suff_stats(model::boeing_data());
  const IntervalResult r = gci_umvue(st, 0.95, 400000, std::uint64_t{7});
  CHECK(std::fabs(r.lower - 4.319130675553236) < 0.005);
  CHECK(std::fabs(r.upper - 5.240071086645472) < 0.005);
  CHECK(r.diagnostics.draws == 400000);
  CHECK_THROWS_AS(gci_umvue(st, 0.95, 999, std::uint64_t{7}), InputError);
}

TEST_CASE("bootstrap limits on Boeing") {
  const TwoSampleData d = model::boeing_data();
  const BootConfig cfg{200000, 11};
  const IntervalResult p = boot_p(d, 0.95, cfg);
  const IntervalResult t = boot_t(d, 0.95, cfg);
  // η* = η̂ + ½ ln(χ²₁₀ / 12) in distribution.
  CHECK(std::fabs(p.lower - 3.932887546893101) < 0.006);
  CHECK(std::fabs(p.upper - 4.853827957985336) < 0.006);
  // The studentized form inverts the same law: it matches the pivot limits.
  CHECK(std::fabs(t.lower - 4.319130675553236) < 0.006);
  CHECK(std::fabs(t.upper - 5.240071086645472) < 0.006);
  CHECK(t.lower < kBoeingEtaHat);
  CHECK(t.upper > kBoeingEtaHat);
  CHECK(std::fabs(t.length - p.length) < 1e-12);
}

TEST_CASE("bootstrap pair shares resamples") {
  const SuffStats st = model::suff_stats(normal_data(10, 5));
  RngStream rng(4, 0);
  const BootDraws draws = bootstrap_draws(st, 1000, rng);
  CHECK(std::is_sorted(draws.eta_star.begin(), draws.eta_star.end()));
  const IntervalResult p = boot_p(draws, 0.9);
  const IntervalResult t = boot_t(draws, 0.9, st.n);
  CHECK(std::fabs(p.length - t.length) < 1e-12);
  CHECK(std::fabs((p.lower + t.upper) - 2.0 * draws.eta_hat) < 1e-12);
  CHECK(draws.redraws == 0);
  RngStream rng2(4, 0);
  CHECK_THROWS_AS(bootstrap_draws(st, 1, rng2), InputError);
}

TEST_CASE("bootstrap centre for unit fitted scale") {
  // s² = 2n gives σ̂ = 1, so the percentile endpoints are quantiles of ½ ln(χ²_{2n−2}/2n).
  const SuffStats st = model::make_suff_stats(10, 0.0, 0.0, 20.0);
  RngStream rng(21, 0);
  const IntervalResult p = boot_p(bootstrap_draws(st, 200000, rng), 0.95);
  CHECK(std::fabs(0.5 * (p.lower + p.upper) - -0.10819081566867596) < 0.003);
}

TEST_CASE("equivariance of every method") {
  const TwoSampleData d = normal_data(8, 9);
  const TwoSampleData shifted = transform(d, 1.0, 3.0, -7.0);
  const TwoSampleData scaled = transform(d, 2.5, 0.0, 0.0);
  const double la = std::log(2.5);
  auto check_pair = [&](const IntervalResult& a, const IntervalResult& b, double off, double tol) {
    CHECK(std::fabs(b.lower - a.lower - off) < tol);
    CHECK(std::fabs(b.upper - a.upper - off) < tol);
  };
  check_pair(aci(d, 0.95), aci(shifted, 0.95), 0.0, 1e-12);
  check_pair(aci(d, 0.95), aci(scaled, 0.95), la, 1e-12);
  const BootConfig bc{500, 3};
  check_pair(boot_p(d, 0.95, bc), boot_p(shifted, 0.95, bc), 0.0, 1e-9);
  check_pair(boot_t(d, 0.95, bc), boot_t(scaled, 0.95, bc), la, 1e-9);
  const SuffStats st = model::suff_stats(d);
  check_pair(gci_umvue(st, 0.9, 2000, std::uint64_t{3}),
             gci_umvue(model::suff_stats(scaled), 0.9, 2000, std::uint64_t{3}), la, 1e-12);
  McmcConfig mc;
  mc.N = 3000;
  mc.N0 = 500;
  mc.seed = 8;
  check_pair(hpd_mcmc(d, 0.95, mc), hpd_mcmc(shifted, 0.95, mc), 0.0, 1e-9);
  check_pair(hpd_mcmc(d, 0.95, mc), hpd_mcmc(scaled, 0.95, mc), la, 1e-9);
}

TEST_CASE("Chen-Shao window") {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(i / 100.0);
  const auto [lo, hi] = chen_shao_hpd(grid, 0.9);
  CHECK(lo == 0.01);
  CHECK(hi == 0.91);

  RngStream rng(2, 0);
  std::vector<double> z(100000);
  for (double& v : z) v = rng.std_normal();
  std::sort(z.begin(), z.end());
  const auto [zl, zh] = chen_shao_hpd(z, 0.95);
  CHECK(std::fabs(zl + 1.96) < 0.03);
  CHECK(std::fabs(zh - 1.96) < 0.03);

  std::vector<double> skew(50000);
  for (double& v : skew) v = std::log(rng.chi_square(3.0));
  std::sort(skew.begin(), skew.end());
  const auto [sl, sh] = chen_shao_hpd(skew, 0.9);
  const double et = empirical_quantile(skew, 0.95) - empirical_quantile(skew, 0.05);
  CHECK(sh - sl < et);

  CHECK_THROWS_AS(chen_shao_hpd(grid, 0.0), DomainError);
  CHECK_THROWS_AS(chen_shao_hpd(std::vector<double>(50, 1.0), 0.9), InputError);
}

TEST_CASE("Metropolis chain for beta matches inverse gamma") {
  const SuffStats st = model::suff_stats(normal_data(10, 17));
  const double mu1 = st.mean1 + 0.3;
  const double mu2 = st.mean2 - 0.2;
  McmcConfig cfg;
  cfg.N0 = 2000;
  cfg.thin = 10;
  cfg.N = cfg.N0 + 10000 * cfg.thin;
  cfg.seed = 5;
  const BetaChain chain = beta_chain_fixed_means(st, mu1, mu2, cfg);
  REQUIRE(chain.beta.size() == 10000);
  const double ss = st.s2 + st.n * (0.09 + 0.04);
  CHECK(ks_distance_inverse_gamma(chain.beta, st.n, 0.5 * ss) < 0.02);
  CHECK(chain.acceptance_rate > 0.3);
  CHECK(chain.acceptance_rate < 0.6);
}

TEST_CASE("HPD on Boeing") {
  McmcConfig cfg;
  cfg.N = 12000;
  cfg.N0 = 2000;
  cfg.seed = 1;
  const IntervalResult r = hpd_mcmc(model::boeing_data(), 0.95, cfg);
  CHECK(r.lower < kBoeingEtaHat);
  CHECK(r.upper > kBoeingEtaHat);
  CHECK(r.length > 0.5);
  REQUIRE(r.diagnostics.acceptance_rate.has_value());
  CHECK(*r.diagnostics.acceptance_rate > 0.05);
  CHECK(*r.diagnostics.acceptance_rate < 0.7);
  CHECK(r.diagnostics.warnings.empty());
  REQUIRE(r.diagnostics.ess.has_value());
  CHECK(*r.diagnostics.ess > 500.0);
  CHECK(r.diagnostics.draws == 10000);
}

TEST_CASE("HPD concentrates at the Fisher scale") {
  const TwoSampleData d = normal_data(1000, 23);
  McmcConfig cfg;
  cfg.N = 21000;
  cfg.N0 = 1000;
  cfg.seed = 2;
  const IntervalResult r = hpd_mcmc(d, 0.95, cfg);
  const double expected = 2.0 * 1.959963984540054 / (2.0 * std::sqrt(1000.0));
  CHECK(std::fabs(r.length / expected - 1.0) < 0.05);
}

TEST_CASE("HPD is stable under longer burn-in") {
  const TwoSampleData d = normal_data(10, 31);
  McmcConfig a;
  a.N = 21000;
  a.N0 = 1000;
  McmcConfig b = a;
  b.N0 = 2000;
  b.N = 22000;
  double diff_lo = 0.0;
  double diff_hi = 0.0;
  double sd_lo = 0.0;
  double sd_hi = 0.0;
  const int chains = 8;
  std::vector<double> lo_a;
  std::vector<double> hi_a;
  for (int c = 0; c < chains; ++c) {
    a.seed = b.seed = 100 + c;
    const IntervalResult ra = hpd_mcmc(d, 0.95, a);
    const IntervalResult rb = hpd_mcmc(d, 0.95, b);
    diff_lo += (rb.lower - ra.lower) / chains;
    diff_hi += (rb.upper - ra.upper) / chains;
    lo_a.push_back(ra.lower);
    hi_a.push_back(ra.upper);
  }
  auto sd = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x / v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
  };
  sd_lo = sd(lo_a);
  sd_hi = sd(hi_a);
  // Mean difference over independent chains versus the per-chain spread.
  CHECK(std::fabs(diff_lo) < 2.0 * sd_lo * std::sqrt(2.0 / chains));
  CHECK(std::fabs(diff_hi) < 2.0 * sd_hi * std::sqrt(2.0 / chains));
}

TEST_CASE("effective sample size") {
  RngStream rng(6, 0);
  std::vector<double> iid(20000);
  for (double& v : iid) v = rng.std_normal();
  CHECK(effective_sample_size(iid) == doctest::Approx(20000).epsilon(0.1));
  std::vector<double> ar(20000);
  double x = 0.0;
  for (double& v : ar) v = x = 0.8 * x + rng.std_normal();
  // (1 − ρ)/(1 + ρ) = 1/9.
  CHECK(effective_sample_size(ar) == doctest::Approx(20000.0 / 9.0).epsilon(0.2));
}

TEST_CASE("JSON form") {
  McmcConfig cfg;
  cfg.N = 2000;
  cfg.N0 = 500;
  const IntervalResult r = hpd_mcmc(model::boeing_data(), 0.9, cfg);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["method"] == "hpd");
  CHECK(j["level"] == 0.9);
  CHECK(j["lower"].get<double>() == r.lower);
  CHECK(j["length"].get<double>() == r.length);
  CHECK(j["diagnostics"]["draws"] == 1500);
  CHECK(j["diagnostics"].contains("acceptance_rate"));
  CHECK(j["diagnostics"].contains("ess"));
  const auto ja = nlohmann::json::parse(to_json(aci(model::boeing_data(), 0.95)));
  CHECK(!ja["diagnostics"].contains("ess"));
  CHECK(parse_method("boot-t") == Method::BootT);
  CHECK_THROWS_AS(parse_method("bca"), InputError);
}

TEST_CASE("MCMC configuration errors") {
  McmcConfig cfg;
  cfg.N = 1500;
  cfg.N0 = 1000;
  CHECK_THROWS_AS(hpd_mcmc(model::boeing_data(), 0.95, cfg), InputError);
  cfg.N = 1000;
  CHECK_THROWS_AS(hpd_mcmc(model::boeing_data(), 0.95, cfg), InputError);
  cfg.N = 5000;
  cfg.thin = 0;
  CHECK_THROWS_AS(hpd_mcmc(model::boeing_data(), 0.95, cfg), InputError);
}
