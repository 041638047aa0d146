#include "entropy_lab/cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "entropy_lab/errors.hpp"
#include "entropy_lab/estimators/estimators.hpp"
#include "entropy_lab/eval/eval_suite.hpp"
#include "entropy_lab/intervals/intervals.hpp"
#include "entropy_lab/numerics/parallel.hpp"
#include "entropy_lab/risk/risk.hpp"

namespace entropy_lab::cli {

namespace {

using nlohmann::ordered_json;

// Argument combinations CLI11 cannot express; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  int threads = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed = true) {
  if (with_seed) c.seed_opt = cmd->add_option("--seed", c.seed, "Master seed (default: fresh entropy)");
  cmd->add_option("--threads", c.threads, "Worker cap (default: ENTROPY_LAB_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
}

std::uint64_t resolve_seed(const Common& c, std::ostream& err) {
  if (c.seed_opt != nullptr && c.seed_opt->count() > 0) return c.seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << s << '\n';
  return s;
}

struct DataArgs {
  std::string dataset;
  std::string data1;
  std::string data2;
  std::string csv;
};

void add_data(CLI::App* cmd, DataArgs& d) {
  cmd->add_option("--dataset", d.dataset, "Built-in data set")->check(CLI::IsMember({"boeing"}));
  cmd->add_option("--data1", d.data1, "First sample, one value per line");
  cmd->add_option("--data2", d.data2, "Second sample, one value per line");
  cmd->add_option("--csv", d.csv, "Two-column CSV with header sample1,sample2");
}

model::TwoSampleData load_data(const DataArgs& d) {
  const int sources = !d.dataset.empty() + !d.csv.empty() + (!d.data1.empty() || !d.data2.empty());
  if (sources != 1) throw UsageError("give exactly one of --dataset, --csv or --data1/--data2");
  if (!d.dataset.empty()) return model::boeing_data();
  if (!d.csv.empty()) return model::read_two_column_csv_file(d.csv);
  if (d.data1.empty() || d.data2.empty()) throw UsageError("--data1 and --data2 go together");
  return {model::read_column_file(d.data1), model::read_column_file(d.data2)};
}

std::string data_label(const DataArgs& d) {
  if (!d.dataset.empty()) return d.dataset;
  if (!d.csv.empty()) return d.csv;
  return d.data1 + "," + d.data2;
}

struct LossArgs {
  std::string name;
  double a1 = 0.0;
  CLI::Option* a1_opt = nullptr;
};

void add_loss(CLI::App* cmd, LossArgs& l, const std::string& default_name) {
  l.name = default_name;
  cmd->add_option("--loss", l.name, "l1 or linex")->check(CLI::IsMember({"l1", "linex"}));
  l.a1_opt = cmd->add_option("--a1", l.a1, "Linex asymmetry (nonzero)");
}

model::Loss make_loss(const std::string& name, const LossArgs& l) {
  if (name == "l1") {
    if (l.a1_opt->count() > 0) throw UsageError("--a1 applies to the linex loss only");
    return model::Loss::squared_error();
  }
  if (l.a1_opt->count() == 0) throw UsageError("--loss linex needs --a1");
  if (l.a1 == 0.0 || !std::isfinite(l.a1)) throw UsageError("--a1 must be finite and nonzero");
  return model::Loss::linex(l.a1);
}

ordered_json loss_json(const model::Loss& loss) {
  ordered_json j;
  j["loss"] = loss.kind == model::Loss::Kind::SquaredError ? "l1" : "linex";
  if (loss.kind == model::Loss::Kind::Linex) j["a1"] = loss.a1;
  return j;
}

std::vector<estimators::EstimatorKind> parse_estimators(const std::vector<std::string>& names) {
  std::vector<estimators::EstimatorKind> out;
  if (names.empty()) {
    for (estimators::Kind k : estimators::all_kinds()) out.emplace_back(k);
    return out;
  }
  for (const std::string& s : names) {
    try {
      out.push_back(estimators::parse_kind(s));
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<std::string> kind_names(const std::vector<estimators::EstimatorKind>& kinds) {
  std::vector<std::string> out;
  for (const auto& k : kinds) out.push_back(k.name());
  return out;
}

// Writes to --out (plus a sibling manifest) or to `out`.
template <class Body>
void emit(const Common& c, std::ostream& out, RunManifest manifest, Body&& body) {
  if (c.out_path.empty()) {
    body(out);
    return;
  }
  const std::filesystem::path path(c.out_path);
  {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot write " + c.out_path);
    body(file);
    if (!file) throw InputError("write failed: " + c.out_path);
  }
  manifest.outputs = {path.filename().string()};
  manifest.write(path.string() + ".manifest.json");
}

// ---- estimate -------------------------------------------------------------

struct EstimateArgs {
  DataArgs data;
  LossArgs loss;
  std::vector<std::string> estimators;
  bool entropy = false;
  bool no_screen = false;
  std::string format = "csv";
  Common common;
};

void screen(const model::TwoSampleData& d, std::ostream& err, ordered_json& j) {
  auto note = [&](const std::string& name, const eval::TestResult& r, const std::string& warning) {
    err << "screening: " << name << " statistic " << r.statistic << " p " << r.p_value << '\n';
    j[name] = {{"statistic", r.statistic}, {"p_value", r.p_value}};
    if (r.p_value < 0.05) err << "warning: " << warning << " (p = " << r.p_value << ")\n";
  };
  try {
    note("ks_sample1", eval::ks_normality(d.sample1), "KS test rejects normality of sample 1");
    note("ks_sample2", eval::ks_normality(d.sample2), "KS test rejects normality of sample 2");
    note("f_test", eval::f_test_equal_var(d.sample1, d.sample2), "F test rejects equal variances");
    note("t_test", eval::t_test_ordered_means(d.sample1, d.sample2),
         "t test rejects the order restriction mu1 <= mu2");
  } catch (const DegenerateDataError& ex) {
    err << "warning: screening skipped: " << ex.what() << '\n';
  }
}

void cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const model::TwoSampleData data = load_data(a.data);
  const model::SuffStats st = model::suff_stats(data);
  std::vector<model::Loss> losses;
  if (a.loss.name.empty()) {
    if (a.loss.a1_opt->count() > 0) throw UsageError("--a1 needs --loss linex");
    losses = {model::Loss::squared_error(), model::Loss::linex(-3.0), model::Loss::linex(-2.0),
              model::Loss::linex(2.0), model::Loss::linex(4.0)};
  } else {
    losses = {make_loss(a.loss.name, a.loss)};
  }
  const auto kinds = parse_estimators(a.estimators);

  const auto old_precision = err.precision(6);
  ordered_json screening = ordered_json::object();
  if (!a.no_screen) screen(data, err, screening);
  err.precision(old_precision);

  ordered_json rows = ordered_json::array();
  for (const model::Loss& loss : losses) {
    for (const auto& k : kinds) {
      const estimators::EstimateReport r = estimators::report(k, st, loss);
      ordered_json row = loss_json(loss);
      row["estimator"] = k.name();
      row[a.entropy ? "entropy" : "log_sigma"] = a.entropy ? r.entropy_value : r.value;
      rows.push_back(row);
    }
  }

  RunManifest manifest;
  manifest.command = "estimate";
  manifest.config = {{"data", data_label(a.data)},
                     {"estimators", kind_names(kinds)},
                     {"entropy", a.entropy},
                     {"format", a.format}};
  emit(a.common, out, manifest, [&](std::ostream& os) {
    if (a.format == "json") {
      ordered_json j;
      j["n"] = st.n;
      j["mean1"] = st.mean1;
      j["mean2"] = st.mean2;
      j["s2"] = st.s2;
      j["w"] = st.w;
      j["screening"] = screening;
      j["estimates"] = rows;
      os << j.dump(2) << '\n';
      return;
    }
    const auto p = os.precision(10);
    os << "loss,a1,estimator," << (a.entropy ? "entropy" : "log_sigma") << '\n';
    for (const auto& row : rows) {
      os << row["loss"].get<std::string>() << ',';
      if (row.contains("a1")) os << row["a1"].get<double>();
      os << ',' << row["estimator"].get<std::string>() << ','
         << row[a.entropy ? "entropy" : "log_sigma"].get<double>() << '\n';
    }
    os.precision(p);
  });
}

// ---- risk -----------------------------------------------------------------

struct RiskArgs {
  std::vector<int> n;
  double eta_from = 0.0;
  double eta_to = 4.0;
  double eta_step = 0.25;
  std::size_t reps = 70000;
  CLI::Option* reps_opt = nullptr;
  LossArgs loss;
  std::vector<std::string> estimators;
  std::string baseline = "baee";
  std::string eta_axis;
  bool paper_scale = false;
  Common common;
};

std::vector<double> eta_grid(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("--eta-step must be positive");
  if (!(from >= 0.0) || !(to >= from) || !std::isfinite(to)) {
    throw UsageError("need 0 <= --eta-from <= --eta-to");
  }
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  if (count > 100000) throw UsageError("eta grid too long");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = from + static_cast<double>(i) * step;
  return grid;
}

void cmd_risk(const RiskArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<int> ns = a.n;
  std::size_t reps = a.reps;
  risk::EtaAxis axis = risk::EtaAxis::Scaled;
  if (a.paper_scale) {
    if (ns.empty()) ns = {8, 15, 21, 26};
    if (a.reps_opt->count() == 0) reps = 70000;
    axis = risk::EtaAxis::Raw;
  }
  if (!a.eta_axis.empty()) axis = a.eta_axis == "raw" ? risk::EtaAxis::Raw : risk::EtaAxis::Scaled;
  if (ns.empty()) throw UsageError("--n is required unless --paper-scale is given");
  for (int n : ns) {
    if (n < 2) throw UsageError("--n values must be at least 2");
  }
  if (reps < 2) throw UsageError("--reps must be at least 2");

  risk::SimConfig cfg;
  cfg.eta_grid = eta_grid(a.eta_from, a.eta_to, a.eta_step);
  cfg.loss = make_loss(a.loss.name, a.loss);
  cfg.replications = reps;
  cfg.master_seed = resolve_seed(a.common, err);
  cfg.estimators = parse_estimators(a.estimators);
  cfg.baseline = parse_estimators({a.baseline}).front();
  cfg.threads = numerics::resolve_threads(a.common.threads);
  cfg.eta_axis = axis;

  std::vector<risk::SimResult> results;
  for (int n : ns) {
    cfg.n = n;
    results.push_back(risk::simulate_risk(cfg));
  }

  RunManifest manifest;
  manifest.command = "risk";
  manifest.master_seed = cfg.master_seed;
  manifest.config = loss_json(cfg.loss);
  manifest.config["n"] = ns;
  manifest.config["eta_grid"] = cfg.eta_grid;
  manifest.config["eta_axis"] = axis == risk::EtaAxis::Raw ? "raw" : "scaled";
  manifest.config["replications"] = reps;
  manifest.config["estimators"] = kind_names(cfg.estimators);
  manifest.config["baseline"] = cfg.baseline.name();
  emit(a.common, out, manifest, [&](std::ostream& os) {
    for (std::size_t i = 0; i < results.size(); ++i) risk::write_risk_csv(os, results[i], i == 0);
  });
}

// ---- ci -------------------------------------------------------------------

struct CiArgs {
  DataArgs data;
  std::string method;
  double level = 0.95;
  std::size_t draws = 10000;
  std::size_t K = 3000;
  std::size_t n_draws = 11000;
  std::size_t burnin = 1000;
  std::size_t thin = 1;
  double proposal_sd = 0.0;
  Common common;
};

void cmd_ci(const CiArgs& a, std::ostream& out, std::ostream& err) {
  const model::TwoSampleData data = load_data(a.data);
  const intervals::Method m = intervals::parse_method(a.method);
  const std::uint64_t seed = resolve_seed(a.common, err);
  ordered_json config = {{"data", data_label(a.data)}, {"method", a.method}, {"level", a.level}};
  intervals::IntervalResult r;
  switch (m) {
    case intervals::Method::ACI: r = intervals::aci(data, a.level); break;
    case intervals::Method::GCI:
      r = intervals::gci_umvue(model::suff_stats(data), a.level, a.draws, seed);
      config["draws"] = a.draws;
      break;
    case intervals::Method::BootP:
    case intervals::Method::BootT: {
      const intervals::BootConfig bc{a.K, seed};
      r = m == intervals::Method::BootP ? intervals::boot_p(data, a.level, bc)
                                        : intervals::boot_t(data, a.level, bc);
      config["K"] = a.K;
      break;
    }
    case intervals::Method::HPD: {
      intervals::McmcConfig mc;
      mc.N = a.n_draws;
      mc.N0 = a.burnin;
      mc.thin = a.thin;
      mc.proposal_sd = a.proposal_sd;
      mc.seed = seed;
      r = intervals::hpd_mcmc(data, a.level, mc);
      config["n_draws"] = a.n_draws;
      config["burnin"] = a.burnin;
      config["thin"] = a.thin;
      config["proposal_sd"] = a.proposal_sd;
      break;
    }
  }
  for (const std::string& w : r.diagnostics.warnings) err << "warning: " << w << '\n';

  RunManifest manifest;
  manifest.command = "ci";
  manifest.master_seed = seed;
  manifest.config = config;
  emit(a.common, out, manifest, [&](std::ostream& os) { os << intervals::to_json(r) << '\n'; });
}

// ---- coverage -------------------------------------------------------------

struct CoverageArgs {
  std::vector<std::string> methods;
  std::vector<int> n;
  std::size_t outer = 5000;
  std::size_t inner = 1000;
  std::size_t burnin = 500;
  CLI::Option* outer_opt = nullptr;
  CLI::Option* inner_opt = nullptr;
  CLI::Option* burnin_opt = nullptr;
  double level = 0.95;
  double sigma = 1.0;
  bool paper_scale = false;
  Common common;
};

void cmd_coverage(const CoverageArgs& a, std::ostream& out, std::ostream& err) {
  eval::CoverageConfig cfg = a.paper_scale ? eval::CoverageConfig::paper_scale() : eval::CoverageConfig{};
  if (!a.n.empty()) {
    cfg.n_grid = a.n;
  } else if (a.paper_scale) {
    cfg.n_grid = {5, 10, 15, 20, 25, 30, 40, 50};
  }
  if (!a.methods.empty()) {
    cfg.methods.clear();
    for (const std::string& s : a.methods) cfg.methods.push_back(intervals::parse_method(s));
  }
  if (a.outer_opt->count() > 0 || !a.paper_scale) cfg.outer_reps = a.outer;
  if (a.inner_opt->count() > 0 || !a.paper_scale) {
    cfg.boot_K = a.inner;
    cfg.gci_draws = a.inner;
    cfg.mcmc_draws = a.inner;
  }
  if (a.burnin_opt->count() > 0 || !a.paper_scale) cfg.mcmc_burnin = a.burnin;
  for (auto m : cfg.methods) {
    if (m == intervals::Method::HPD && cfg.mcmc_draws < 1000) throw UsageError("hpd needs --inner >= 1000");
    if ((m == intervals::Method::BootP || m == intervals::Method::BootT) && cfg.boot_K < 100) {
      throw UsageError("bootstrap needs --inner >= 100");
    }
    if (m == intervals::Method::GCI && cfg.gci_draws < 1000) throw UsageError("gci needs --inner >= 1000");
  }
  cfg.level = a.level;
  cfg.sigma = a.sigma;
  cfg.master_seed = resolve_seed(a.common, err);
  cfg.threads = numerics::resolve_threads(a.common.threads);

  const eval::CoverageResult res = eval::coverage_study(cfg);

  RunManifest manifest;
  manifest.command = "coverage";
  manifest.master_seed = cfg.master_seed;
  std::vector<std::string> names;
  for (auto m : cfg.methods) names.push_back(intervals::method_name(m));
  manifest.config = {{"methods", names},        {"n", cfg.n_grid},
                     {"outer", cfg.outer_reps}, {"boot_K", cfg.boot_K},
                     {"gci_draws", cfg.gci_draws}, {"mcmc_draws", cfg.mcmc_draws},
                     {"mcmc_burnin", cfg.mcmc_burnin}, {"level", cfg.level},
                     {"sigma", cfg.sigma}};
  emit(a.common, out, manifest, [&](std::ostream& os) { eval::write_coverage_csv(os, res); });
}

// ---- r0-table -------------------------------------------------------------

struct R0Args {
  int n = 0;
  LossArgs loss;
  std::size_t intervals = 1024;
  Common common;
};

void cmd_r0_table(const R0Args& a, std::ostream& out) {
  if (a.intervals < 4) throw UsageError("--intervals must be at least 4");
  const model::Loss loss = make_loss(a.loss.name, a.loss);
  const estimators::R0Table table(loss, a.n, a.intervals);
  RunManifest manifest;
  manifest.command = "r0-table";
  manifest.config = loss_json(loss);
  manifest.config["n"] = a.n;
  manifest.config["intervals"] = a.intervals;
  emit(a.common, out, manifest, [&](std::ostream& os) { table.write_csv(os); });
}

// ---- reproduce ------------------------------------------------------------

struct ReproduceArgs {
  std::string out_dir = "reproduce-out";
  bool desk = false;
  bool paper = false;
  Common common;
};

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
  if (a.desk && a.paper) throw UsageError("--desk-scale and --paper-scale are exclusive");
  ReproduceConfig cfg;
  cfg.out_dir = a.out_dir;
  cfg.seed = resolve_seed(a.common, err);
  cfg.paper_scale = a.paper;
  cfg.threads = a.common.threads;
  const std::vector<std::string> failed = reproduce(cfg, err);
  out << "wrote " << cfg.out_dir.string() << '\n';
  if (failed.empty()) return kOk;
  err << "error: " << failed.size() << " table(s) failed\n";
  return kNumeric;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation of ln sigma for two ordered normal means", "entropy_lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Point estimates of ln sigma (or entropy)");
  add_data(c_est, est.data);
  add_loss(c_est, est.loss, "");
  c_est->add_option("--estimators", est.estimators, "Comma-separated estimator names")->delimiter(',');
  c_est->add_flag("--entropy", est.entropy, "Report H = 1 + ln 2pi + 2 ln sigma");
  c_est->add_flag("--no-screen", est.no_screen, "Skip the KS, F and t screening tests");
  c_est->add_option("--format", est.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_common(c_est, est.common, false);

  RiskArgs rk;
  auto* c_risk = app.add_subcommand("risk", "Monte Carlo risk and RRI on an eta grid");
  c_risk->add_option("--n", rk.n, "Sample size(s), comma-separated")->delimiter(',');
  c_risk->add_option("--eta-from", rk.eta_from, "First eta");
  c_risk->add_option("--eta-to", rk.eta_to, "Last eta");
  c_risk->add_option("--eta-step", rk.eta_step, "Eta step");
  rk.reps_opt = c_risk->add_option("--reps", rk.reps, "Replications per n");
  add_loss(c_risk, rk.loss, "l1");
  c_risk->add_option("--estimators", rk.estimators, "Comma-separated estimator names")->delimiter(',');
  c_risk->add_option("--baseline", rk.baseline, "Reference estimator for RRI");
  c_risk->add_option("--eta-axis", rk.eta_axis, "scaled: sqrt(n)(mu2-mu1)/sigma; raw: (mu2-mu1)/sigma")
      ->check(CLI::IsMember({"scaled", "raw"}));
  c_risk->add_flag("--paper-scale", rk.paper_scale, "70000 reps, n = 8,15,21,26, raw eta axis");
  add_common(c_risk, rk.common);

  CiArgs ci;
  auto* c_ci = app.add_subcommand("ci", "Interval estimate of ln sigma as JSON");
  add_data(c_ci, ci.data);
  c_ci->add_option("--method", ci.method, "aci, boot-p, boot-t, gci or hpd")
      ->required()
      ->check(CLI::IsMember({"aci", "boot-p", "boot-t", "gci", "hpd"}));
  c_ci->add_option("--level", ci.level, "Confidence level")->check(CLI::Range(0.5, 0.9999));
  c_ci->add_option("--draws", ci.draws, "Pivot draws (gci)");
  c_ci->add_option("--K", ci.K, "Bootstrap resamples");
  c_ci->add_option("--n-draws", ci.n_draws, "MCMC iterations including burn-in (hpd)");
  c_ci->add_option("--burnin", ci.burnin, "MCMC burn-in (hpd)");
  c_ci->add_option("--thin", ci.thin, "MCMC thinning (hpd)")->check(CLI::PositiveNumber);
  c_ci->add_option("--proposal-sd", ci.proposal_sd, "MH step for beta (0: automatic)")
      ->check(CLI::NonNegativeNumber);
  add_common(c_ci, ci.common);

  CoverageArgs cov;
  auto* c_cov = app.add_subcommand("coverage", "Coverage probability, average length and PCD");
  c_cov->add_option("--methods", cov.methods, "Comma-separated methods")
      ->delimiter(',')
      ->check(CLI::IsMember({"aci", "boot-p", "boot-t", "gci", "hpd"}));
  c_cov->add_option("--n", cov.n, "Sample size(s), comma-separated")->delimiter(',');
  cov.outer_opt = c_cov->add_option("--outer", cov.outer, "Outer replications");
  cov.inner_opt = c_cov->add_option("--inner", cov.inner, "Resamples, pivot draws or MCMC draws");
  cov.burnin_opt = c_cov->add_option("--burnin", cov.burnin, "MCMC burn-in");
  c_cov->add_option("--level", cov.level, "Confidence level")->check(CLI::Range(0.5, 0.9999));
  c_cov->add_option("--sigma", cov.sigma, "Common standard deviation")->check(CLI::PositiveNumber);
  c_cov->add_flag("--paper-scale", cov.paper_scale, "30000 outer; 3000/10000/10000 inner");
  add_common(c_cov, cov.common);

  R0Args r0;
  auto* c_r0 = app.add_subcommand("r0-table", "Tabulated Brewster-Zidek term r0(|w|)");
  c_r0->add_option("--n", r0.n, "Sample size")->required()->check(CLI::Range(2, 100000));
  add_loss(c_r0, r0.loss, "l1");
  c_r0->add_option("--intervals", r0.intervals, "Table intervals");
  add_common(c_r0, r0.common, false);

  ReproduceArgs rep;
  auto* c_rep = app.add_subcommand("reproduce", "All tables and figure series into a directory");
  c_rep->add_option("--out", rep.out_dir, "Output directory");
  c_rep->add_option("--seed", rep.common.seed, "Master seed (default: fresh entropy)");
  rep.common.seed_opt = c_rep->get_option("--seed");
  c_rep->add_option("--threads", rep.common.threads, "Worker cap")->check(CLI::NonNegativeNumber);
  c_rep->add_flag("--desk-scale", rep.desk, "Reduced replication counts (default)");
  c_rep->add_flag("--paper-scale", rep.paper, "Full replication counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_est->parsed()) cmd_estimate(est, out, err);
    if (c_risk->parsed()) cmd_risk(rk, out, err);
    if (c_ci->parsed()) cmd_ci(ci, out, err);
    if (c_cov->parsed()) cmd_coverage(cov, out, err);
    if (c_r0->parsed()) cmd_r0_table(r0, out);
    if (c_rep->parsed()) return cmd_reproduce(rep, out, err);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DegenerateDataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace entropy_lab::cli
