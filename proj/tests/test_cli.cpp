#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entropy_lab/cli/cli.hpp"
#include "entropy_lab/numerics/special.hpp"

using namespace entropy_lab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "entropy_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = entropy_lab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Value column of the CSV row starting with `prefix`.
double csv_value(const std::string& csv, const std::string& prefix, int column) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0) continue;
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i <= column; ++i) std::getline(row, cell, ',');
    return std::stod(cell);
  }
  FAIL("no row " << prefix);
  return NAN;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "entropy_lab_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

nlohmann::json parse_json(const std::string& s) { return nlohmann::json::parse(s); }

}  // namespace

TEST_CASE("estimate on the built-in data") {
  Run r = invoke({"estimate", "--dataset", "boeing", "--loss", "l1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("loss,a1,estimator,log_sigma\n", 0) == 0);
  CHECK(std::fabs(csv_value(r.out, "l1,,baee,", 3) - 4.7293) < 5e-5);
  CHECK(r.err.find("screening: t_test") != std::string::npos);
  CHECK(r.err.find("warning") == std::string::npos);

  r = invoke({"estimate", "--dataset", "boeing", "--loss", "linex", "--a1", "-3"});
  REQUIRE(r.code == 0);
  CHECK(std::fabs(csv_value(r.out, "linex,-3,baee,", 3) - 4.8233) < 5e-5);

  r = invoke({"estimate", "--dataset", "boeing", "--no-screen"});
  REQUIRE(r.code == 0);
  CHECK(std::fabs(csv_value(r.out, "linex,4,baee,", 3) - 4.6321) < 5e-5);
  CHECK(r.err.empty());

  Run e = invoke({"estimate", "--dataset", "boeing", "--loss", "l1", "--entropy", "--estimators", "mle"});
  REQUIRE(e.code == 0);
  Run t = invoke({"estimate", "--dataset", "boeing", "--loss", "l1", "--estimators", "mle"});
  const double tau = csv_value(t.out, "l1,,mle,", 3);
  CHECK(std::fabs(csv_value(e.out, "l1,,mle,", 3) - (1.0 + std::log(2.0 * numerics::kPi) + 2.0 * tau)) <
        1e-8);

  Run j = invoke({"estimate", "--dataset", "boeing", "--loss", "l1", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = parse_json(j.out);
  CHECK(doc["n"] == 6);
  CHECK(doc["estimates"].size() == 9);
  CHECK(doc["screening"]["f_test"]["p_value"].get<double>() > 0.05);
}

TEST_CASE("equal samples leave piecewise estimators at their baselines") {
  const fs::path a = scratch("a.txt");
  std::ofstream(a) << "# hours\n3.1\n4.7\n2.2\n5.9\n4.4\n";
  Run r = invoke({"estimate", "--data1", a.string(), "--data2", a.string(), "--loss", "l1"});
  REQUIRE(r.code == 0);
  CHECK(csv_value(r.out, "l1,,stein,", 3) == csv_value(r.out, "l1,,baee,", 3));
  CHECK(csv_value(r.out, "l1,,pitman,", 3) == csv_value(r.out, "l1,,baee,", 3));
  CHECK(csv_value(r.out, "l1,,imle,", 3) == csv_value(r.out, "l1,,mle,", 3));
  CHECK(csv_value(r.out, "l1,,irmle,", 3) == csv_value(r.out, "l1,,rmle,", 3));
}

TEST_CASE("order-restriction warning is not fatal") {
  const fs::path a = scratch("hi.txt");
  const fs::path b = scratch("lo.txt");
  std::ofstream(a) << "10.1\n10.4\n9.8\n10.2\n10.0\n9.9\n";
  std::ofstream(b) << "1.1\n0.4\n0.8\n1.2\n1.0\n0.7\n";
  Run r = invoke({"estimate", "--data1", a.string(), "--data2", b.string(), "--loss", "l1"});
  CHECK(r.code == 0);
  CHECK(r.err.find("order restriction") != std::string::npos);
}

TEST_CASE("risk command") {
  Run r = invoke({"risk", "--n", "8", "--loss", "l1", "--reps", "20000", "--seed", "1", "--estimators",
               "baee,stein", "--eta-to", "1", "--eta-step", "0.5", "--threads", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,eta,loss,a1,estimator,risk,stderr,bias,rri\n", 0) == 0);
  const double risk = csv_value(r.out, "8,0,l1,,baee,", 5);
  const double se = csv_value(r.out, "8,0,l1,,baee,", 6);
  CHECK(std::fabs(risk - numerics::trigamma(7.0) / 4.0) < 3.0 * se);
  CHECK(r.err.empty());

  Run two = invoke({"risk", "--n", "6,8", "--reps", "500", "--seed", "3", "--estimators", "stein"});
  REQUIRE(two.code == 0);
  CHECK(std::count(two.out.begin(), two.out.end(), '\n') == 1 + 2 * 17);

  Run noseed = invoke({"risk", "--n", "6", "--reps", "100", "--estimators", "baee", "--eta-to", "0"});
  CHECK(noseed.code == 0);
  CHECK(noseed.err.rfind("seed: ", 0) == 0);

  Run raw = invoke({"risk", "--n", "6", "--reps", "2000", "--seed", "5", "--estimators", "mle,rmle",
                 "--baseline", "mle", "--eta-axis", "raw", "--eta-to", "0"});
  REQUIRE(raw.code == 0);
  CHECK(csv_value(raw.out, "6,0,l1,,rmle,", 8) > 0.0);
}

TEST_CASE("ci command") {
  Run r = invoke({"ci", "--dataset", "boeing", "--method", "aci"});
  REQUIRE(r.code == 0);
  auto j = parse_json(r.out);
  CHECK(std::fabs(j["lower"].get<double>() - 4.1864) < 1e-4);
  CHECK(std::fabs(j["upper"].get<double>() - 4.9866) < 1e-4);

  r = invoke({"ci", "--dataset", "boeing", "--method", "gci", "--draws", "100000", "--seed", "7"});
  REQUIRE(r.code == 0);
  j = parse_json(r.out);
  CHECK(std::fabs(j["lower"].get<double>() - 4.319) < 0.01);
  CHECK(std::fabs(j["upper"].get<double>() - 5.240) < 0.01);
  CHECK(invoke({"ci", "--dataset", "boeing", "--method", "gci", "--draws", "100000", "--seed", "7"}).out ==
        r.out);

  r = invoke({"ci", "--dataset", "boeing", "--method", "hpd", "--n-draws", "12000", "--burnin", "2000",
           "--seed", "3"});
  REQUIRE(r.code == 0);
  j = parse_json(r.out);
  CHECK(j["lower"].get<double>() < 4.586);
  CHECK(j["upper"].get<double>() > 4.586);
  CHECK(j["diagnostics"].contains("acceptance_rate"));

  r = invoke({"ci", "--dataset", "boeing", "--method", "boot-t", "--K", "2000", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(parse_json(r.out)["diagnostics"]["draws"] == 2000);
}

TEST_CASE("coverage command grid") {
  Run r = invoke({"coverage", "--methods", "aci,boot-p,boot-t,gci,hpd", "--n", "10,20,40", "--outer", "20",
               "--inner", "1000", "--burnin", "200", "--seed", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("method,n,level,cp,cp_stderr,al,pcd,outer_reps,inner_reps,seed\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 16);
}

TEST_CASE("r0-table command") {
  Run r = invoke({"r0-table", "--n", "6", "--intervals", "16"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("absw,r0\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') >= 16);
}

TEST_CASE("manifest accompanies output files") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const fs::path out = scratch("risk.csv");
  Run r = invoke({"risk", "--n", "6", "--reps", "300", "--seed", "11", "--estimators", "bz", "--eta-to", "0",
               "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out.string() + ".manifest.json");
  REQUIRE(in);
  const auto m = nlohmann::json::parse(in);
  CHECK(m["command"] == "risk");
  CHECK(m["master_seed"] == 11);
  CHECK(m["timestamp"] == "2023-11-14T22:13:20Z");
  CHECK(m["version"] == cli::kVersion);
  CHECK(m["outputs"][0] == "risk.csv");
  CHECK(m["config"]["replications"] == 300);
  CHECK(!m["config"].contains("threads"));
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"risk", "--loss", "l1"}).code == 2);
  CHECK(invoke({"risk", "--n", "8", "--loss", "linex"}).code == 2);
  CHECK(invoke({"risk", "--n", "8", "--eta-step", "0"}).code == 2);
  CHECK(invoke({"risk", "--n", "8", "--estimators", "nope"}).code == 2);
  CHECK(invoke({"ci", "--dataset", "boeing"}).code == 2);
  CHECK(invoke({"ci", "--method", "aci"}).code == 2);
  CHECK(invoke({"estimate", "--data1", "/nonexistent/x.txt", "--data2", "/nonexistent/y.txt"}).code == 3);

  const fs::path bad = scratch("bad.txt");
  std::ofstream(bad) << "1.0\n2.0\nabc\n";
  Run r = invoke({"estimate", "--data1", bad.string(), "--data2", bad.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("3") != std::string::npos);

  const fs::path flat = scratch("flat.txt");
  std::ofstream(flat) << "2\n2\n2\n";
  CHECK(invoke({"estimate", "--data1", flat.string(), "--data2", flat.string()}).code == 3);
  CHECK(invoke({"ci", "--dataset", "boeing", "--method", "boot-p", "--K", "10", "--seed", "1"}).code == 3);
}
