#ifndef KINKCOLLIDE_NUM_HPP
#define KINKCOLLIDE_NUM_HPP

// Small numeric toolbox shared by the whole library: quadrature, splines,
// least-squares slope fits, stable elementary functions, CSV/JSON-friendly
// double formatting, and the FFT-backed helpers used for spectral derivatives
// and Sobolev norms.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kc {

inline constexpr double SQRT2 = 1.4142135623730950488016887242097;
inline constexpr double PI = 3.1415926535897932384626433832795;

// Adaptive Gauss-Kronrod integral of f over [a,b] (finite or infinite ends).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

// Trapezoid rule on a uniform grid with spacing h.
double trapz(const std::vector<double>& y, double h);

// Cumulative trapezoid with F[0] = 0.
std::vector<double> cumtrapz(const std::vector<double>& y, double h);

// Least-squares slope of y against x (used for log-log scaling fits).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// log(cosh(y)) without overflow for large |y|.
double logcosh(double y);

// C^2 quintic smoothstep: 0 for u<=0, 1 for u>=1.
double smoothstep(double u);

// Generalized binomial coefficient C(alpha, k) for real alpha.
double binom(double alpha, int k);

// Shortest round-trip decimal form of a double ("%.17g" trimmed via re-parse).
std::string format_double(double v);

std::vector<double> linspace(double a, double b, int n);

// Natural cubic spline on a uniform grid; evaluates value and first two
// derivatives. Out-of-range arguments clamp to the end polynomials.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(double x0, double dx, std::vector<double> y);
  double operator()(double x) const { return eval(x, 0); }
  double eval(double x, int deriv) const;  // deriv in {0,1,2}
  bool empty() const { return y_.empty(); }
  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return y_.size(); }

 private:
  double x0_ = 0, dx_ = 1;
  std::vector<double> y_, m_;  // values and second derivatives at the knots
};

// Periodic spectral second derivative on n uniform samples spanning length L
// (sample i at x = i*L/n). Backed by FFTW, plans cached per size.
void spectral_second_derivative(const std::vector<double>& f, double L,
                                std::vector<double>& out);

// H^s norm (squared) of a sample vector on spacing h, periodic FFT convention.
double sobolev_norm2(const std::vector<double>& f, double h, double s);

// Max worker threads: min(KINK_COLLIDE_THREADS if set, hardware_concurrency).
int thread_cap();

// parallel_for over [0,n) honoring thread_cap(); falls back to a plain loop.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace kc

#endif
