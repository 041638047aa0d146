#include "entropy_lab/risk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/numerics/parallel.hpp"
#include "entropy_lab/numerics/rng.hpp"
#include "entropy_lab/numerics/running_stats.hpp"
#include "entropy_lab/numerics/special.hpp"

namespace entropy_lab::risk {

namespace nm = entropy_lab::numerics;
using estimators::Evaluator;
using estimators::Kind;
using model::SuffStats;

namespace {

struct CellAccumulator {
  nm::RunningStats error;         // δ − ln σ
  nm::PairedStats loss_vs_base;  // (L(δ), L(δ_baseline))
};

void validate(const SimConfig& cfg) {
  if (cfg.n < 2) throw InputError("simulation: n must be at least 2");
  if (cfg.eta_grid.empty()) throw InputError("simulation: empty eta grid");
  for (double eta : cfg.eta_grid) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InputError("simulation: eta must be finite and >= 0");
  }
  if (cfg.replications < 2) throw InputError("simulation: need at least 2 replications");
  if (cfg.block_size == 0) throw InputError("simulation: block size must be positive");
  if (cfg.estimators.empty()) throw InputError("simulation: no estimators requested");
}

// Sufficient statistics of one replication with sample 2 shifted by `shift`.
SuffStats replicate(const std::vector<double>& z1, const std::vector<double>& z2, int n, double shift) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (int j = 0; j < n; ++j) {
    m1 += z1[j];
    m2 += z2[j];
  }
  m1 /= n;
  m2 /= n;
  double ss = 0.0;
  for (int j = 0; j < n; ++j) {
    ss += (z1[j] - m1) * (z1[j] - m1);
    ss += (z2[j] - m2) * (z2[j] - m2);
  }
  return model::make_suff_stats(n, m1, m2 + shift, ss);
}

void draw_normals(nm::RngStream& rng, std::vector<double>& z1, std::vector<double>& z2) {
  for (double& v : z1) v = rng.std_normal();
  for (double& v : z2) v = rng.std_normal();
}

}  // namespace

const CellResult& SimResult::at(const std::string& estimator, double eta) const {
  for (const CellResult& c : cells) {
    if (c.estimator == estimator && c.eta == eta) return c;
  }
  throw InputError("no simulation cell for " + estimator);
}

SimResult simulate_risk(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t n_est = cfg.estimators.size();
  const std::size_t n_eta = cfg.eta_grid.size();
  bool need_bz = cfg.baseline.tag == Kind::BrewsterZidek;
  for (const EstimatorKind& k : cfg.estimators) need_bz |= k.tag == Kind::BrewsterZidek;
  const Evaluator eval(cfg.loss, cfg.n, need_bz);
  const std::size_t n_blocks = (cfg.replications + cfg.block_size - 1) / cfg.block_size;
  std::vector<std::vector<CellAccumulator>> partial(n_blocks);
  const double shift_per_eta =
      cfg.eta_axis == EtaAxis::Raw ? 1.0 : 1.0 / std::sqrt(static_cast<double>(cfg.n));

  nm::parallel_blocks(n_blocks, nm::resolve_threads(cfg.threads), [&](std::size_t block) {
    std::vector<CellAccumulator> cells(n_est * n_eta);
    std::vector<double> z1(cfg.n);
    std::vector<double> z2(cfg.n);
    const std::size_t begin = block * cfg.block_size;
    const std::size_t end = std::min(cfg.replications, begin + cfg.block_size);
    for (std::size_t rep = begin; rep < end; ++rep) {
      try {
        nm::RngStream rng(cfg.master_seed, rep);
        draw_normals(rng, z1, z2);
        for (std::size_t e = 0; e < n_eta; ++e) {
          const SuffStats st = replicate(z1, z2, cfg.n, cfg.eta_grid[e] * shift_per_eta);
          const double base_loss = model::loss_eval(cfg.loss, eval(cfg.baseline, st));
          for (std::size_t k = 0; k < n_est; ++k) {
            const double err = eval(cfg.estimators[k], st);
            if (!std::isfinite(err)) throw NumericError("non-finite estimate");
            CellAccumulator& acc = cells[e * n_est + k];
            acc.error.push(err);
            acc.loss_vs_base.push(model::loss_eval(cfg.loss, err), base_loss);
          }
        }
      } catch (const ReplicationError&) {
        throw;
      } catch (const std::exception& ex) {
        throw ReplicationError(rep, ex.what());
      }
    }
    partial[block] = std::move(cells);
  });

  std::vector<CellAccumulator> total(n_est * n_eta);
  for (const auto& block : partial) {
    for (std::size_t i = 0; i < total.size(); ++i) {
      total[i].error.merge(block[i].error);
      total[i].loss_vs_base.merge(block[i].loss_vs_base);
    }
  }

  SimResult result;
  result.config = cfg;
  for (std::size_t e = 0; e < n_eta; ++e) {
    for (std::size_t k = 0; k < n_est; ++k) {
      const CellAccumulator& acc = total[e * n_est + k];
      const double count = static_cast<double>(acc.error.count);
      CellResult c;
      c.estimator = cfg.estimators[k].name();
      c.eta = cfg.eta_grid[e];
      c.risk = acc.loss_vs_base.x.mean;
      c.stderr_risk = acc.loss_vs_base.x.stderr_of_mean();
      c.bias = acc.error.mean;
      c.stderr_bias = acc.error.stderr_of_mean();
      c.risk_minus_baseline = acc.loss_vs_base.x.mean - acc.loss_vs_base.y.mean;
      c.stderr_diff = acc.loss_vs_base.stderr_of_difference();
      const double rb = acc.loss_vs_base.y.mean;
      const double r = c.risk;
      c.rri = 100.0 * (rb - r) / rb;
      // Delta method for 100 (1 − R / R_b).
      const double vr = acc.loss_vs_base.x.variance();
      const double vb = acc.loss_vs_base.y.variance();
      const double cov = acc.loss_vs_base.covariance();
      const double var_ratio =
          (vr / (rb * rb) + r * r * vb / std::pow(rb, 4) - 2.0 * r * cov / std::pow(rb, 3)) / count;
      c.stderr_rri = 100.0 * std::sqrt(std::max(var_ratio, 0.0));
      result.cells.push_back(c);
    }
  }
  return result;
}

double closed_form_risk_baee(const Loss& loss, int n) {
  if (n < 2) throw DomainError("closed_form_risk_baee: n must be at least 2");
  if (loss.kind == Loss::Kind::SquaredError) return 0.25 * nm::trigamma(n - 1.0);
  // E exp(a1 t) = 1 at the BAEE, so the risk is −a1 times the bias.
  return -loss.a1 * closed_form_bias_baee(loss, n);
}

double closed_form_bias_baee(const Loss& loss, int n) {
  if (n < 2) throw DomainError("closed_form_bias_baee: n must be at least 2");
  if (loss.kind == Loss::Kind::SquaredError) return 0.0;
  const double a1 = loss.a1;
  const double shape = n - 1.0 + 0.5 * a1;
  if (!(shape > 0.0)) throw DomainError("closed_form_bias_baee: n - 1 + a1/2 must be positive");
  return 0.5 * nm::digamma(n - 1.0) - (nm::ln_gamma(shape) - nm::ln_gamma(n - 1.0)) / a1;
}

double linex_risk_as_printed(double a1, int n) {
  const double g1 = 0.5 * (n + a1 - 2.0);
  const double g2 = 0.5 * (2.0 * n + a1 - 2.0);
  if (!(g1 > 0.0) || !(g2 > 0.0) || a1 == 0.0) {
    throw DomainError("linex_risk_as_printed: gamma argument must be positive");
  }
  const double log_ratio = nm::ln_gamma(g1) - nm::ln_gamma(n - 1.0);
  return std::pow(2.0, 0.5 * (a1 - 1.0)) * std::exp((1.0 - 1.0 / a1) * log_ratio) -
         0.5 * a1 * nm::digamma(n - 1.0) + nm::ln_gamma(g2) - nm::ln_gamma(n - 1.0) - 1.0;
}

std::vector<RriRow> rri_rows(const SimResult& result) {
  std::vector<RriRow> rows;
  const std::string base = result.config.baseline.name();
  for (const CellResult& c : result.cells) {
    if (c.estimator == base) continue;
    rows.push_back({c.eta, c.estimator, c.rri, c.stderr_rri});
  }
  return rows;
}

std::vector<RriRow> rri_curve(const SimConfig& cfg) { return rri_rows(simulate_risk(cfg)); }

GpcResult gpc_estimate(const EstimatorKind& d1, const EstimatorKind& d2, const Loss& loss, int n,
                       double eta, std::size_t reps, std::uint64_t seed, int threads) {
  if (reps < 2) throw InputError("gpc_estimate: need at least 2 replications");
  if (!(eta >= 0.0)) throw InputError("gpc_estimate: eta must be >= 0");
  const Evaluator eval(loss, n, d1.tag == Kind::BrewsterZidek || d2.tag == Kind::BrewsterZidek);
  constexpr std::size_t kBlock = 1024;
  const std::size_t n_blocks = (reps + kBlock - 1) / kBlock;
  std::vector<nm::RunningStats> partial(n_blocks);
  nm::parallel_blocks(n_blocks, nm::resolve_threads(threads), [&](std::size_t block) {
    nm::RunningStats score;
    std::vector<double> z1(n);
    std::vector<double> z2(n);
    const std::size_t begin = block * kBlock;
    const std::size_t end = std::min(reps, begin + kBlock);
    for (std::size_t rep = begin; rep < end; ++rep) {
      try {
        nm::RngStream rng(seed, rep);
        draw_normals(rng, z1, z2);
        const SuffStats st = replicate(z1, z2, n, eta / std::sqrt(static_cast<double>(n)));
        const double l1 = model::loss_eval(loss, eval(d1, st));
        const double l2 = model::loss_eval(loss, eval(d2, st));
        score.push(l1 < l2 ? 1.0 : (l1 == l2 ? 0.5 : 0.0));
      } catch (const std::exception& ex) {
        throw ReplicationError(rep, ex.what());
      }
    }
    partial[block] = score;
  });
  nm::RunningStats total;
  for (const auto& p : partial) total.merge(p);
  return {total.mean, total.stderr_of_mean(), total.count};
}

void write_risk_csv(std::ostream& out, const SimResult& result, bool header) {
  const auto old_precision = out.precision(10);
  if (header) out << "n,eta,loss,a1,estimator,risk,stderr,bias,rri\n";
  const Loss& loss = result.config.loss;
  const char* loss_name = loss.kind == Loss::Kind::SquaredError ? "l1" : "linex";
  for (const CellResult& c : result.cells) {
    out << result.config.n << ',' << c.eta << ',' << loss_name << ',';
    if (loss.kind == Loss::Kind::Linex) out << loss.a1;
    out << ',' << c.estimator << ',' << c.risk << ',' << c.stderr_risk << ',' << c.bias << ','
        << c.rri << '\n';
  }
  out.precision(old_precision);
}

}  // namespace entropy_lab::risk
