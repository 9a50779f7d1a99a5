#include "kinkcollide/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

#include "kinkcollide/num.hpp"
#include "kinkcollide/potential.hpp"
#include "kinkcollide/profiles.hpp"

namespace kc {

namespace {

// 6th-order central first derivative, flat extension beyond the ends (the
// fields handled here are vacuum-constant there).
std::vector<double> first_x_derivative(const std::vector<double>& u,
                                       double h) {
  const long n = static_cast<long>(u.size());
  auto at = [&](long i) { return u[std::clamp(i, 0L, n - 1)]; };
  std::vector<double> d(u.size());
  const double c1 = 3.0 / 4.0, c2 = -3.0 / 20.0, c3 = 1.0 / 60.0;
  for (long i = 0; i < n; ++i)
    d[i] = (c1 * (at(i + 1) - at(i - 1)) + c2 * (at(i + 2) - at(i - 2)) +
            c3 * (at(i + 3) - at(i - 3))) /
           h;
  return d;
}

double trapezoid_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

double nearest_vacuum(double p) {
  double best = 0.0;
  for (double vac : {-1.0, 0.0, 1.0})
    if (std::abs(p - vac) < std::abs(p - best)) best = vac;
  return best;
}

void check_initial(const FieldState& s, double dt) {
  const GridField& g = s.field;
  if (g.size() < 16 || g.ut.size() != g.size() || !(g.h > 0.0))
    throw std::invalid_argument(
        "evolve: need matching phi/pi samples on a positive-spacing grid");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("evolve: time step must be positive and finite");
  if (dt > 0.5 * g.h * (1.0 + 1e-12))
    throw std::invalid_argument(
        "evolve: time step exceeds the stability bound 0.5*h");
  for (std::size_t i : {std::size_t{0}, g.size() - 1}) {
    if (std::abs(g.u[i] - nearest_vacuum(g.u[i])) > 1e-6 ||
        std::abs(g.ut[i]) > 1e-6)
      throw std::invalid_argument(
          "evolve: initial data is not vacuum-padded at the grid ends");
  }
}

std::vector<double> acceleration(const std::vector<double>& phi, double x_min,
                                 double h) {
  std::vector<double> a = second_x_derivative(phi, x_min, h);
  for (std::size_t i = 0; i < phi.size(); ++i) a[i] -= dU(phi[i]);
  return a;
}

}  // namespace

double energy(const FieldState& s) {
  const GridField& g = s.field;
  const std::vector<double> ux = first_x_derivative(g.u, g.h);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    e += trapezoid_weight(i, g.size()) *
         (0.5 * g.ut[i] * g.ut[i] + 0.5 * ux[i] * ux[i] + U(g.u[i]));
  return e * g.h;
}

double momentum(const FieldState& s) {
  const GridField& g = s.field;
  const std::vector<double> ux = first_x_derivative(g.u, g.h);
  double p = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    p -= trapezoid_weight(i, g.size()) * g.ut[i] * ux[i];
  return p * g.h;
}

std::vector<FieldState> evolve(const FieldState& initial, double T, double dt,
                               const std::vector<double>& snap_times) {
  check_initial(initial, dt);
  if (!std::isfinite(T))
    throw std::invalid_argument("evolve: horizon must be finite");

  const GridField& g0 = initial.field;
  const std::size_t n = g0.size();
  const double hstep = (T < 0.0) ? -dt : dt;
  const long nsteps = std::llround(std::abs(T) / dt);

  std::set<long> marks;
  for (double ts : snap_times) {
    const long k = std::llround((ts - initial.t) / hstep);
    if (k < 0 || k > nsteps)
      throw std::invalid_argument(
          "evolve: snapshot time outside the evolution window");
    marks.insert(k);
  }

  std::vector<FieldState> out;
  std::vector<double> phi = g0.u, pi = g0.ut;
  auto record = [&](long k) {
    FieldState s;
    s.t = initial.t + static_cast<double>(k) * hstep;
    s.field.x_min = g0.x_min;
    s.field.h = g0.h;
    s.field.u = phi;
    s.field.ut = pi;
    out.push_back(std::move(s));
  };

  std::vector<double> acc = acceleration(phi, g0.x_min, g0.h);
  if (marks.count(0)) record(0);
  for (long k = 1; k <= nsteps; ++k) {
    for (std::size_t i = 0; i < n; ++i) pi[i] += 0.5 * hstep * acc[i];
    for (std::size_t i = 0; i < n; ++i) phi[i] += hstep * pi[i];
    acc = acceleration(phi, g0.x_min, g0.h);
    for (std::size_t i = 0; i < n; ++i) pi[i] += 0.5 * hstep * acc[i];

    double sup = 0.0;
    for (double p : phi) sup = std::max(sup, std::abs(p));
    if (sup > 10.0)
      throw std::runtime_error(
          "evolve: instability, field magnitude exceeded 10 at t = " +
          std::to_string(initial.t + static_cast<double>(k) * hstep));
    if (marks.count(k)) record(k);
  }
  record(nsteps);
  return out;
}

AsymptoticFit asymptotic_fit(const FieldState& s, double v) {
  if (!(v > 0.0) || !(v < 1.0))
    throw std::invalid_argument("asymptotic_fit: speed must be inside (0, 1)");
  const double at = std::abs(s.t);
  if (2.0 * v * at < 10.0)
    throw std::invalid_argument(
        "asymptotic_fit: kinks must be separated by at least 10 units");
  const GridField& g = s.field;
  const double gam = 1.0 / std::sqrt(1.0 - v * v);
  const double pdot = (s.t >= 0.0) ? v : -v;

  auto distance = [&](double c) {
    const double p = v * at + c;
    GridField dphi, dpi;
    dphi.x_min = dpi.x_min = g.x_min;
    dphi.h = dpi.h = g.h;
    dphi.u.resize(g.size());
    dpi.u.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double wr = gam * (g.x(i) - p), wl = gam * (-g.x(i) - p);
      dphi.u[i] = g.u[i] - (kink_eval(wr) - kink_eval(wl));
      dpi.u[i] =
          g.ut[i] + pdot * gam * (kink_eval(wr, 1) - kink_eval(wl, 1));
    }
    const double h1sq = sobolev_norm2(dphi.u, g.h, 1.0);
    const double l2 = norm_l2_h(dpi);
    return std::sqrt(h1sq + l2 * l2);
  };

  // golden-section search for the interior minimum of the shift
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -10.0, b = 10.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = distance(x1), f2 = distance(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = distance(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = distance(x2);
    }
  }
  AsymptoticFit fit;
  fit.shift = 0.5 * (a + b);
  fit.distance = distance(fit.shift);
  if (!std::isfinite(fit.distance) || std::abs(fit.shift) > 10.0 - 1e-3)
    throw std::runtime_error(
        "asymptotic_fit: search stagnated at the interval boundary, no "
        "interior minimum");
  return fit;
}

}  // namespace kc
