#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entropy_lab/estimators/estimators.hpp"

namespace entropy_lab::risk {

using estimators::EstimatorKind;
using model::Loss;

/// Scaled: η = √n(μ2 − μ1)/σ, the model parameter. Raw: η = (μ2 − μ1)/σ,
/// the axis of the published risk figures.
enum class EtaAxis { Scaled, Raw };

struct SimConfig {
  int n = 8;
  std::vector<double> eta_grid{0.0};
  Loss loss = Loss::squared_error();
  std::size_t replications = 70000;
  std::uint64_t master_seed = 1;
  std::vector<EstimatorKind> estimators;
  int threads = 0;  // 0: ENTROPY_LAB_THREADS or hardware concurrency
  std::size_t block_size = 1024;
  EtaAxis eta_axis = EtaAxis::Scaled;
  EstimatorKind baseline = estimators::Kind::BAEE;  // reference for differences and RRI
};

/// One (estimator, η) cell. Differences and RRI are paired against the
/// baseline (BAEE unless configured) on the same replications.
struct CellResult {
  std::string estimator;
  double eta = 0.0;
  double risk = 0.0;
  double stderr_risk = 0.0;
  double bias = 0.0;
  double stderr_bias = 0.0;
  double risk_minus_baseline = 0.0;
  double stderr_diff = 0.0;
  double rri = 0.0;  // percent
  double stderr_rri = 0.0;
};

struct SimResult {
  SimConfig config;
  std::vector<CellResult> cells;  // eta-major, estimators in config order

  /// Throws InputError when the cell is absent.
  const CellResult& at(const std::string& estimator, double eta) const;
};

/// Replication i draws both samples from stream (master_seed, i): sample1
/// from N(0, 1), sample2 from N(η/√n, 1) (N(η, 1) on the raw axis) built on
/// the same normals for every
/// η, so all cells share random numbers. Blocks of replications run in
/// parallel and fold in index order; the result does not depend on the
/// worker count.
SimResult simulate_risk(const SimConfig& cfg);

double closed_form_risk_baee(const Loss& loss, int n);
double closed_form_bias_baee(const Loss& loss, int n);

/// The linex risk expression exactly as printed in the source theorem;
/// kept for the discrepancy report only.
double linex_risk_as_printed(double a1, int n);

struct RriRow {
  double eta;
  std::string estimator;
  double rri;
  double stderr_rri;
};

/// RRI in percent for every estimator in cfg other than the baseline.
std::vector<RriRow> rri_curve(const SimConfig& cfg);
std::vector<RriRow> rri_rows(const SimResult& result);

struct GpcResult {
  double gpc = 0.5;
  double stderr_gpc = 0.0;
  std::size_t replications = 0;
};

/// P[L(err1) < L(err2)] + ½ P[L(err1) = L(err2)] by simulation.
GpcResult gpc_estimate(const EstimatorKind& d1, const EstimatorKind& d2, const Loss& loss, int n,
                       double eta, std::size_t reps, std::uint64_t seed, int threads = 0);

/// Header: n,eta,loss,a1,estimator,risk,stderr,bias,rri
void write_risk_csv(std::ostream& out, const SimResult& result, bool header = true);

}  // namespace entropy_lab::risk
