#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace entropy_lab::model {

struct TwoSampleData {
  std::vector<double> sample1;
  std::vector<double> sample2;
};

/// Complete sufficient statistic plus the maximal invariant w.
struct SuffStats {
  int n = 0;
  double mean1 = 0.0;
  double mean2 = 0.0;
  double s2 = 0.0;  // pooled sum of squared deviations (not divided by anything)
  double s = 0.0;
  double w = 0.0;  // (mean2 - mean1) / s

  double ln_s() const;
};

/// Throws InputError for unequal lengths, n < 2 or non-finite values and
/// DegenerateDataError when the pooled sum of squares is zero.
SuffStats suff_stats(const TwoSampleData& data);

/// SuffStats from summary values; s2 must be positive.
SuffStats make_suff_stats(int n, double mean1, double mean2, double s2);

struct Loss {
  enum class Kind { SquaredError, Linex };
  Kind kind = Kind::SquaredError;
  double a1 = 0.0;  // linex asymmetry, nonzero

  static Loss squared_error() { return {Kind::SquaredError, 0.0}; }
  static Loss linex(double a1);

  /// "l1" or "linex(a1)".
  std::string label() const;
};

bool operator==(const Loss& a, const Loss& b);

double loss_eval(const Loss& loss, double t);
double loss_deriv(const Loss& loss, double t);

struct Params {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma = 1.0;

  /// η = √n (μ2 − μ1) / σ.
  double eta(int n) const;
};

/// Constant c solving E[L'(ln √U + c)] = 0 for U ~ Gamma(shape, scale 2),
/// by quadrature over the density of ln √U and a bracketing root-solve.
/// This is the generic path behind d0 and m0 and accepts any increasing L'.
double equivariant_constant(const std::function<double(double)>& loss_deriv, double shape,
                            double tol = 1e-11);

/// BAEE constant: closed form for both loss families.
double d0(const Loss& loss, int n);
double d0_generic(const Loss& loss, int n);

/// Shape (2n − 1)/2 analogue of d0, the η = 0 constant given W.
double m0(const Loss& loss, int n);
double m0_generic(const Loss& loss, int n);

/// Failure times from the two-plane air-conditioning data set.
TwoSampleData boeing_data();

/// One number per non-blank line; '#' starts a comment. `source` names the
/// stream in error messages, which carry line numbers.
std::vector<double> read_column(std::istream& in, const std::string& source);
std::vector<double> read_column_file(const std::string& path);

/// CSV with header "sample1,sample2".
TwoSampleData read_two_column_csv(std::istream& in, const std::string& source);
TwoSampleData read_two_column_csv_file(const std::string& path);

}  // namespace entropy_lab::model
