#include "kinkcollide/num.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace kc {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  double v = gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol, &err);
  return v;
}

double trapz(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

std::vector<double> cumtrapz(const std::vector<double>& y, double h) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i)
    out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need two or more points");
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double logcosh(double y) {
  double a = std::fabs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double binom(double alpha, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c *= (alpha - (j - 1)) / j;
  return c;
}

std::string format_double(double v) {
  char buf[40];
  // Try shortest representations that still round-trip.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * double(i) / double(n - 1);
  return x;
}

CubicSpline::CubicSpline(double x0, double dx, std::vector<double> y)
    : x0_(x0), dx_(dx), y_(std::move(y)) {
  std::size_t n = y_.size();
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Natural spline: tridiagonal system for second derivatives (Thomas).
  std::vector<double> c(n, 0.0), d(n, 0.0);
  // interior rows: (1/6)m[i-1] + (2/3)m[i] + (1/6)m[i+1] = (y[i-1]-2y[i]+y[i+1])/dx^2
  c[0] = 0.0;
  d[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double rhs = (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / (dx_ * dx_);
    double denom = 2.0 / 3.0 - (1.0 / 6.0) * c[i - 1];
    c[i] = (1.0 / 6.0) / denom;
    d[i] = (rhs - (1.0 / 6.0) * d[i - 1]) / denom;
  }
  m_[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
  m_[0] = 0.0;
}

double CubicSpline::eval(double x, int deriv) const {
  if (y_.empty()) throw std::logic_error("CubicSpline: empty");
  if (y_.size() == 1) return deriv == 0 ? y_[0] : 0.0;
  double u = (x - x0_) / dx_;
  std::ptrdiff_t i = (std::ptrdiff_t)std::floor(u);
  i = std::clamp<std::ptrdiff_t>(i, 0, (std::ptrdiff_t)y_.size() - 2);
  double t = u - double(i);  // local coordinate in [0,1]
  double a = y_[i], b = y_[i + 1], ma = m_[i], mb = m_[i + 1];
  double h2 = dx_ * dx_;
  switch (deriv) {
    case 0:
      return a + t * (b - a) -
             (h2 / 6.0) * (t * (1 - t)) * ((2 - t) * ma + (1 + t) * mb);
    case 1:
      return (b - a) / dx_ + (dx_ / 6.0) * ((1.0 - 3.0 * (1 - t) * (1 - t)) * ma +
                                            (3.0 * t * t - 1.0) * mb);
    case 2:
      return (1 - t) * ma + t * mb;
    default:
      throw std::invalid_argument("CubicSpline: deriv must be 0..2");
  }
}

namespace {
// FFTW plan cache. FFTW planning is not thread safe; execution on distinct
// buffers is, so the lock only guards plan creation/lookup.
struct FftPlans {
  std::mutex mu;
  std::map<int, fftw_plan> fwd, bwd;
  std::map<int, fftw_complex*> spec;
  std::map<int, double*> real;
};
FftPlans& plans() {
  static FftPlans p;
  return p;
}
}  // namespace

void spectral_second_derivative(const std::vector<double>& f, double L,
                                std::vector<double>& out) {
  int n = (int)f.size();
  out.resize(n);
  auto& P = plans();
  std::lock_guard<std::mutex> lock(P.mu);
  if (!P.fwd.count(n)) {
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    P.real[n] = r;
    P.spec[n] = c;
    P.fwd[n] = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE);
    P.bwd[n] = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE);
  }
  double* r = P.real[n];
  fftw_complex* c = P.spec[n];
  std::copy(f.begin(), f.end(), r);
  fftw_execute(P.fwd[n]);
  for (int k = 0; k <= n / 2; ++k) {
    double xi = 2.0 * PI * k / L;
    c[k][0] *= -xi * xi;
    c[k][1] *= -xi * xi;
  }
  fftw_execute(P.bwd[n]);
  for (int i = 0; i < n; ++i) out[i] = r[i] / n;
}

double sobolev_norm2(const std::vector<double>& f, double h, double s) {
  int n = (int)f.size();
  double L = n * h;
  auto& P = plans();
  std::lock_guard<std::mutex> lock(P.mu);
  if (!P.fwd.count(n)) {
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    P.real[n] = r;
    P.spec[n] = c;
    P.fwd[n] = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE);
    P.bwd[n] = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE);
  }
  double* r = P.real[n];
  fftw_complex* c = P.spec[n];
  std::copy(f.begin(), f.end(), r);
  fftw_execute(P.fwd[n]);
  // Parseval with the discrete transform: ||f||^2_{L2} = (h/n) sum |F_k|^2
  // counting conjugate modes twice (except DC and Nyquist).
  double acc = 0.0;
  for (int k = 0; k <= n / 2; ++k) {
    double xi = 2.0 * PI * k / L;
    double mag2 = c[k][0] * c[k][0] + c[k][1] * c[k][1];
    double w = (k == 0 || (n % 2 == 0 && k == n / 2)) ? 1.0 : 2.0;
    acc += w * std::pow(1.0 + xi * xi, s) * mag2;
  }
  return acc * h / n;
}

int thread_cap() {
  int hw = (int)std::thread::hardware_concurrency();
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("KINK_COLLIDE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, hw);
  }
  return hw;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic_int next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace kc
