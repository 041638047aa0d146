#pragma once

// Special functions and distribution functions used throughout the library.
//
// Everything here is implemented in-module: gamma-family functions use the
// Stirling/de Moivre asymptotic series after upward shifting of the argument,
// incomplete gamma and beta use the classical series / continued-fraction
// split. Absolute accuracy targets are 1e-12 or better on the documented
// domains.

namespace entropy_lab::numerics {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kLnSqrt2Pi = 0.918938533204672741780329736405617640;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// ln Γ(x) for x > 0. Throws DomainError for x <= 0 or non-finite x.
double ln_gamma(double x);

/// ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(double x);

/// ψ₁(x) = d/dx ψ(x) for x > 0.
double trigamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Inverse of Φ. Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

double chi_square_cdf(double df, double x);

/// Inverse chi-square CDF by monotone root-solve on gamma_p.
double chi_square_quantile(double df, double p);

/// Quantile of Gamma(shape, scale).
double gamma_quantile(double shape, double scale, double p);

double student_t_cdf(double df, double t);
double f_cdf(double df1, double df2, double x);

/// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// P(D_n <= d) for the one-sample statistic with a fully specified null
/// (Marsaglia–Tsang–Wang matrix form; Stephens' approximation once n·d >= 50).
double kolmogorov_cdf_exact(int n, double d);

/// P(D_n > d), accurate in the upper tail for d >= 1/2.
double kolmogorov_sf_exact(int n, double d);

/// P(D_n^+ >= d), Smirnov's finite-n formula.
double smirnov_sf_exact(int n, double d);

}  // namespace entropy_lab::numerics
