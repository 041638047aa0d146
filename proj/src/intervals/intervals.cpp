#include "entropy_lab/intervals/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/special.hpp"

namespace entropy_lab::intervals {

namespace nm = entropy_lab::numerics;

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
}

IntervalResult make_result(Method m, double level, double lower, double upper) {
  IntervalResult r;
  r.method = m;
  r.level = level;
  r.lower = lower;
  r.upper = upper;
  r.length = upper - lower;
  return r;
}

double ln_sigma_mle(const SuffStats& st) { return st.ln_s() - 0.5 * std::log(2.0 * st.n); }

double pooled_ss(const std::vector<double>& x1, const std::vector<double>& x2) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < x1.size(); ++j) {
    m1 += x1[j];
    m2 += x2[j];
  }
  m1 /= static_cast<double>(x1.size());
  m2 /= static_cast<double>(x2.size());
  double ss = 0.0;
  for (std::size_t j = 0; j < x1.size(); ++j) ss += (x1[j] - m1) * (x1[j] - m1) + (x2[j] - m2) * (x2[j] - m2);
  return ss;
}

double log_target(double beta, double half_ss, int n) {
  return -(n + 1.0) * std::log(beta) - half_ss / beta;
}

double default_proposal_sd(const SuffStats& st) {
  const int n = st.n;
  return 2.4 * (0.5 * st.s2) / ((n - 1.0) * std::sqrt(static_cast<double>(n)));
}

void check_mcmc(const McmcConfig& cfg) {
  if (!(cfg.N > cfg.N0)) throw InputError("mcmc: total iterations must exceed burn-in");
  if (cfg.thin == 0) throw InputError("mcmc: thin must be positive");
  if (cfg.proposal_sd < 0.0 || !std::isfinite(cfg.proposal_sd)) {
    throw InputError("mcmc: proposal sd must be positive");
  }
}

// One Metropolis update of β; returns true on acceptance.
bool mh_step(double& beta, double sd, double half_ss, int n, RngStream& rng) {
  const double prop = beta + sd * rng.std_normal();
  const double u = rng.uniform01();
  if (!(prop > 0.0)) return false;
  if (std::log(u) < log_target(prop, half_ss, n) - log_target(beta, half_ss, n)) {
    beta = prop;
    return true;
  }
  return false;
}

// Burn-in tuning toward a 0.44 acceptance rate, in batches of 50.
class Tuner {
 public:
  explicit Tuner(double sd) : log_sd_(std::log(sd)) {}
  double sd() const { return std::exp(log_sd_); }
  void record(bool accepted) {
    accepted_ += accepted ? 1 : 0;
    if (++count_ < kBatch) return;
    ++batch_;
    const double step = std::min(0.1, 1.0 / std::sqrt(static_cast<double>(batch_)));
    log_sd_ += static_cast<double>(accepted_) / kBatch > 0.44 ? step : -step;
    count_ = 0;
    accepted_ = 0;
  }

 private:
  static constexpr int kBatch = 50;
  double log_sd_;
  int count_ = 0;
  int accepted_ = 0;
  int batch_ = 0;
};

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::ACI: return "aci";
    case Method::BootP: return "boot-p";
    case Method::BootT: return "boot-t";
    case Method::GCI: return "gci";
    case Method::HPD: return "hpd";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::ACI, Method::BootP, Method::BootT, Method::GCI, Method::HPD}) {
    if (method_name(m) == name) return m;
  }
  throw InputError("unknown interval method '" + name + "'");
}

std::string to_json(const IntervalResult& r) {
  nlohmann::ordered_json diag;
  if (r.diagnostics.acceptance_rate) diag["acceptance_rate"] = *r.diagnostics.acceptance_rate;
  if (r.diagnostics.ess) diag["ess"] = *r.diagnostics.ess;
  if (r.diagnostics.proposal_sd) diag["proposal_sd"] = *r.diagnostics.proposal_sd;
  diag["draws"] = r.diagnostics.draws;
  if (r.diagnostics.redraws > 0) diag["redraws"] = r.diagnostics.redraws;
  if (!r.diagnostics.warnings.empty()) diag["warnings"] = r.diagnostics.warnings;
  nlohmann::ordered_json j;
  j["method"] = method_name(r.method);
  j["level"] = r.level;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["length"] = r.length;
  j["diagnostics"] = diag;
  return j.dump();
}

double empirical_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

IntervalResult aci(const SuffStats& st, double level) {
  check_level(level);
  const double z = nm::std_normal_quantile(0.5 + 0.5 * level);
  const double center = ln_sigma_mle(st);
  const double half = z / (2.0 * std::sqrt(static_cast<double>(st.n)));
  IntervalResult r = make_result(Method::ACI, level, center - half, center + half);
  return r;
}

IntervalResult aci(const TwoSampleData& data, double level) { return aci(model::suff_stats(data), level); }

IntervalResult gci_umvue(const SuffStats& st, double level, std::size_t draws, RngStream& rng) {
  check_level(level);
  if (draws < 1000) throw InputError("gci: need at least 1000 draws");
  const double df = 2.0 * (st.n - 1.0);
  std::vector<double> t(draws);
  for (double& v : t) v = st.ln_s() - 0.5 * std::log(rng.chi_square(df));
  std::sort(t.begin(), t.end());
  const double a = 0.5 * (1.0 - level);
  IntervalResult r =
      make_result(Method::GCI, level, empirical_quantile(t, a), empirical_quantile(t, 1.0 - a));
  r.diagnostics.draws = draws;
  return r;
}

IntervalResult gci_umvue(const SuffStats& st, double level, std::size_t draws, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return gci_umvue(st, level, draws, rng);
}

BootDraws bootstrap_draws(const SuffStats& st, std::size_t K, RngStream& rng) {
  if (K < 100) throw InputError("bootstrap: insufficient resamples for quantiles (K >= 100)");
  constexpr int kMaxRedraws = 10;
  const int n = st.n;
  const double sigma_hat = std::exp(ln_sigma_mle(st));
  BootDraws out;
  out.eta_hat = ln_sigma_mle(st);
  out.eta_star.reserve(K);
  std::vector<double> x1(n);
  std::vector<double> x2(n);
  for (std::size_t k = 0; k < K; ++k) {
    double ss = 0.0;
    for (int attempt = 0;; ++attempt) {
      for (double& v : x1) v = st.mean1 + sigma_hat * rng.std_normal();
      for (double& v : x2) v = st.mean2 + sigma_hat * rng.std_normal();
      ss = pooled_ss(x1, x2);
      if (ss > 0.0 && std::isfinite(ss)) break;
      if (attempt == kMaxRedraws) throw DegenerateDataError("bootstrap: resample degenerate after 10 redraws");
      ++out.redraws;
    }
    out.eta_star.push_back(0.5 * std::log(ss / (2.0 * n)));
  }
  std::sort(out.eta_star.begin(), out.eta_star.end());
  return out;
}

IntervalResult boot_p(const BootDraws& draws, double level) {
  check_level(level);
  const double a = 0.5 * (1.0 - level);
  IntervalResult r = make_result(Method::BootP, level, empirical_quantile(draws.eta_star, a),
                                 empirical_quantile(draws.eta_star, 1.0 - a));
  r.diagnostics.draws = draws.eta_star.size();
  r.diagnostics.redraws = draws.redraws;
  return r;
}

IntervalResult boot_t(const BootDraws& draws, double level, int n) {
  check_level(level);
  const double a = 0.5 * (1.0 - level);
  const double sd = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  const double t_lo = (empirical_quantile(draws.eta_star, a) - draws.eta_hat) / sd;
  const double t_hi = (empirical_quantile(draws.eta_star, 1.0 - a) - draws.eta_hat) / sd;
  IntervalResult r = make_result(Method::BootT, level, draws.eta_hat - t_hi * sd, draws.eta_hat - t_lo * sd);
  r.diagnostics.draws = draws.eta_star.size();
  r.diagnostics.redraws = draws.redraws;
  return r;
}

IntervalResult boot_p(const TwoSampleData& data, double level, const BootConfig& cfg) {
  RngStream rng(cfg.seed, 0);
  return boot_p(bootstrap_draws(model::suff_stats(data), cfg.K, rng), level);
}

IntervalResult boot_t(const TwoSampleData& data, double level, const BootConfig& cfg) {
  const SuffStats st = model::suff_stats(data);
  RngStream rng(cfg.seed, 0);
  return boot_t(bootstrap_draws(st, cfg.K, rng), level, st.n);
}

BetaChain beta_chain_fixed_means(const SuffStats& st, double mu1, double mu2, const McmcConfig& cfg) {
  check_mcmc(cfg);
  const int n = st.n;
  const double ss = st.s2 + n * ((st.mean1 - mu1) * (st.mean1 - mu1) + (st.mean2 - mu2) * (st.mean2 - mu2));
  const double half_ss = 0.5 * ss;
  RngStream rng(cfg.seed, 0);
  double beta = st.s2 / (2.0 * (n - 1.0));
  Tuner tuner(cfg.proposal_sd > 0.0 ? cfg.proposal_sd : default_proposal_sd(st));
  std::size_t accepted = 0;
  BetaChain out;
  for (std::size_t it = 0; it < cfg.N; ++it) {
    const bool burn = it < cfg.N0;
    const bool acc = mh_step(beta, tuner.sd(), half_ss, n, rng);
    if (burn) {
      if (cfg.adapt) tuner.record(acc);
      continue;
    }
    accepted += acc ? 1 : 0;
    if ((it - cfg.N0) % cfg.thin == 0) out.beta.push_back(beta);
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.N - cfg.N0);
  out.proposal_sd = tuner.sd();
  return out;
}

PosteriorDraws posterior_draws(const SuffStats& st, const McmcConfig& cfg, RngStream& rng) {
  check_mcmc(cfg);
  const int n = st.n;
  const double rn = std::sqrt(static_cast<double>(n));
  double beta = st.s2 / (2.0 * (n - 1.0));
  Tuner tuner(cfg.proposal_sd > 0.0 ? cfg.proposal_sd : default_proposal_sd(st));
  std::size_t accepted = 0;
  PosteriorDraws out;
  out.theta.reserve((cfg.N - cfg.N0) / cfg.thin + 1);
  for (std::size_t it = 0; it < cfg.N; ++it) {
    const double sd_mu = std::sqrt(beta) / rn;
    const double mu1 = st.mean1 + sd_mu * rng.std_normal();
    const double mu2 = st.mean2 + sd_mu * rng.std_normal();
    const double d1 = st.mean1 - mu1;
    const double d2 = st.mean2 - mu2;
    const double half_ss = 0.5 * (st.s2 + n * (d1 * d1 + d2 * d2));
    const bool acc = mh_step(beta, tuner.sd(), half_ss, n, rng);
    if (it < cfg.N0) {
      if (cfg.adapt) tuner.record(acc);
      continue;
    }
    accepted += acc ? 1 : 0;
    if ((it - cfg.N0) % cfg.thin == 0) out.theta.push_back(0.5 * std::log(beta));
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.N - cfg.N0);
  out.proposal_sd = tuner.sd();
  return out;
}

IntervalResult hpd_mcmc(const SuffStats& st, double level, const McmcConfig& cfg, RngStream& rng) {
  check_level(level);
  check_mcmc(cfg);
  if (cfg.N - cfg.N0 < 1000) throw InputError("hpd: need at least 1000 post-burn-in iterations");
  PosteriorDraws post = posterior_draws(st, cfg, rng);
  Diagnostics diag;
  diag.acceptance_rate = post.acceptance_rate;
  diag.proposal_sd = post.proposal_sd;
  diag.ess = effective_sample_size(post.theta);
  diag.draws = post.theta.size();
  if (post.acceptance_rate < 0.05 || post.acceptance_rate > 0.7) {
    diag.warnings.push_back("acceptance rate outside [0.05, 0.7]");
  }
  std::sort(post.theta.begin(), post.theta.end());
  const auto [lo, hi] = chen_shao_hpd(post.theta, level);
  IntervalResult r = make_result(Method::HPD, level, lo, hi);
  r.diagnostics = std::move(diag);
  return r;
}

IntervalResult hpd_mcmc(const TwoSampleData& data, double level, const McmcConfig& cfg) {
  RngStream rng(cfg.seed, 0);
  return hpd_mcmc(model::suff_stats(data), level, cfg, rng);
}

std::pair<double, double> chen_shao_hpd(const std::vector<double>& sorted_draws, double level) {
  check_level(level);
  const std::size_t m = sorted_draws.size();
  if (m < 100) throw InputError("hpd: need at least 100 draws");
  const std::size_t k = static_cast<std::size_t>(std::floor(level * static_cast<double>(m)));
  if (k >= m) throw DomainError("hpd: level too close to 1 for the draw count");
  const double scale = sorted_draws.back() - sorted_draws.front();
  const double slack = 1e-12 * (scale > 0.0 ? scale : 1.0);
  std::size_t best = 0;
  double best_len = sorted_draws[k] - sorted_draws[0];
  for (std::size_t i = 1; i + k < m; ++i) {
    const double len = sorted_draws[i + k] - sorted_draws[i];
    if (len < best_len - slack) {
      best_len = len;
      best = i;
    }
  }
  return {sorted_draws[best], sorted_draws[best + k]};
}

double effective_sample_size(const std::vector<double>& chain) {
  const std::size_t m = chain.size();
  if (m < 4) return static_cast<double>(m);
  double mean = 0.0;
  for (double v : chain) mean += v;
  mean /= static_cast<double>(m);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < m; ++i) s += (chain[i] - mean) * (chain[i + lag] - mean);
    return s / static_cast<double>(m);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return static_cast<double>(m);
  double tau = -1.0;  // Σ over pairs counts lag 0 twice
  for (std::size_t lag = 0; lag + 1 < m; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (!(pair > 0.0)) break;
    tau += 2.0 * pair;
  }
  return static_cast<double>(m) / std::max(tau, 1.0 / static_cast<double>(m));
}

}  // namespace entropy_lab::intervals
