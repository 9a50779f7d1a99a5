#include "kinkcollide/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "kinkcollide/potential.hpp"
#include "kinkcollide/profiles.hpp"
#include "kinkcollide/separation.hpp"

namespace kc {

namespace {

double sech(double u) {
  return 1.0 / std::cosh(u);  // cosh overflow -> 0, which is the right limit
}

void check_speed(double v, const char* who) {
  if (!(v > 0.0) || !(v < 1.0))
    throw std::invalid_argument(std::string(who) +
                                ": speed must lie in (0,1), got " +
                                std::to_string(v));
}

// 4th-order first derivative of uniform samples; one-sided 5-point stencils
// at the edges, so an odd input yields an exactly even output.
std::vector<double> fd1_o4(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> out(n);
  const double w = 1.0 / (12.0 * h);
  out[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] -
            3.0 * y[4]) * w;
  out[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * w;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) * w;
  out[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] +
                6.0 * y[n - 4] - y[n - 5]) * w;
  out[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] -
                16.0 * y[n - 4] + 3.0 * y[n - 5]) * w;
  return out;
}

// Cumulative integral from the left end: trapezoid plus the Gregory endpoint
// correction -(h^2/12)(f'(t) - f'(t0)), 4th order on smooth data. The plain
// trapezoid would leave a smooth O(h^2) error whose second derivative
// dominates the plug-back residual of the ODE solve.
std::vector<double> cum_integral_o4(const std::vector<double>& y, double h) {
  std::vector<double> c = cumtrapz(y, h);
  const std::vector<double> yp = fd1_o4(y, h);
  const double corr = h * h / 12.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] -= corr * (yp[i] - yp[0]);
  return c;
}

double inner_on_line(const std::function<double(double)>& f) {
  return integrate(f, -45.0, 45.0, 1e-13);
}

// Constants of the closed-form order-2 forcing. c1 and c2 collect the
// weight-2 interaction ledger projected on the kink derivative; the rest are
// fixed profile moments multiplying the trajectory-curvature coefficients.
struct ForcingMoments {
  double c1 = 0.0, c2 = 0.0;
  // <y Hddot, Hdot>, <y^2 Hddot, Hdot>, ||Hdot||^2, <y Hdot, Hdot>
  double y_hdd = 0.0, y2_hdd = 0.0, norm2 = 0.0, y_hd = 0.0;
  // <G, Hdot>, <G', Hdot>, <y G', Hdot>, <G'', Hdot>, <y G'', Hdot>,
  // <y^2 G'', Hdot>
  double g = 0.0, gp = 0.0, y_gp = 0.0, gpp = 0.0, y_gpp = 0.0, y2_gpp = 0.0;
  // <-24M + 30N + 8 sqrt2 Hdot, Hdot> and <U''(H) G, Hdot>
  double w = 0.0, ug = 0.0;
};

const ForcingMoments& forcing_moments() {
  static const ForcingMoments m = [] {
    namespace s = kc::series;
    ForcingMoments out;

    const s::InteractionLedger ledger =
        s::decompose_interaction(s::g_interaction_terms(), 2);
    const s::PolyExp* ea = ledger.find(2, s::Frame::left, 1, 0);
    const s::PolyExp* eb = ledger.find(2, s::Frame::right, 1, 0);
    const s::PolyExp* ec = ledger.find(2, s::Frame::left, 0, 0);
    const s::PolyExp* ed = ledger.find(2, s::Frame::right, 0, 0);
    if (!ea || !eb || !ec || !ed)
      throw std::runtime_error(
          "explicit_forcing: weight-2 interaction ledger is missing entries");
    // Right-frame entries are functions of -y; reflect them onto the kink's
    // own coordinate.
    const s::PolyExp fa = *ea, fb = s::reflect(*eb), fc = *ec,
                     fd = s::reflect(*ed);

    const auto hd = [](double y) { return kink_eval(y, 1); };
    out.c1 = -inner_on_line(
        [&](double y) { return hd(y) * s::eval_exact(fb, y); });
    out.c2 = -inner_on_line([&](double y) {
               return hd(y) *
                      (y * (s::eval_exact(fa, y) + s::eval_exact(fb, y)) +
                       s::eval_exact(fc, y) - s::eval_exact(fd, y));
             }) -
             0.5 * inner_on_line([&](double y) {
               const double g = special_eval(SpecialKind::G, y);
               return hd(y) * d3U(kink_eval(y)) * g * g;
             }) -
             15.0 -
             24.0 * inner_on_line([&](double y) {
               return special_eval(SpecialKind::V, y) * hd(y);
             });

    out.norm2 = inner_on_line([&](double y) { return hd(y) * hd(y); });
    out.y_hd = inner_on_line([&](double y) { return y * hd(y) * hd(y); });
    out.y_hdd = inner_on_line(
        [&](double y) { return y * kink_eval(y, 2) * hd(y); });
    out.y2_hdd = inner_on_line(
        [&](double y) { return y * y * kink_eval(y, 2) * hd(y); });

    const auto gk = [](double y, int k) {
      return special_eval(SpecialKind::G, y, k);
    };
    out.g = inner_on_line([&](double y) { return gk(y, 0) * hd(y); });
    out.gp = inner_on_line([&](double y) { return gk(y, 1) * hd(y); });
    out.y_gp = inner_on_line([&](double y) { return y * gk(y, 1) * hd(y); });
    out.gpp = inner_on_line([&](double y) { return gk(y, 2) * hd(y); });
    out.y_gpp = inner_on_line([&](double y) { return y * gk(y, 2) * hd(y); });
    out.y2_gpp = inner_on_line(
        [&](double y) { return y * y * gk(y, 2) * hd(y); });
    out.w = inner_on_line([&](double y) {
      const double e = std::exp(-SQRT2 * y);
      return ((d2U(kink_eval(y)) - 2.0) * e + 8.0 * SQRT2 * hd(y)) * hd(y);
    });
    out.ug = inner_on_line(
        [&](double y) { return d2U(kink_eval(y)) * gk(y, 0) * hd(y); });
    return out;
  }();
  return m;
}

// Time-dependent coefficients shared by the forcing terms: the co-moving
// contraction Q = (1 - (dot d)^2/4)^{-1/2} and its derivatives, the frame
// velocity a(y) = al + be*y and acceleration b(y) = al2 + be2*y, and the
// e^{-sqrt2 d} weight with its derivatives.
struct FrameFactors {
  double d, d1, d2, d3;
  double Q, Qd, Qdd;
  double al, be, al2, be2;
  double E, Ed, Edd;
};

FrameFactors frame_factors(double v, double t) {
  FrameFactors f{};
  f.d = d_eval(v, t, 0);
  f.d1 = d_eval(v, t, 1);
  f.d2 = d_eval(v, t, 2);
  f.d3 = d_eval(v, t, 3);
  f.Q = 1.0 / std::sqrt(1.0 - 0.25 * f.d1 * f.d1);
  f.Qd = 0.25 * f.Q * f.Q * f.Q * f.d1 * f.d2;
  f.Qdd = 0.25 * (3.0 * f.Q * f.Q * f.Qd * f.d1 * f.d2 +
                  f.Q * f.Q * f.Q * (f.d2 * f.d2 + f.d1 * f.d3));
  f.al = -0.5 * f.d1 * f.Q;
  f.be = f.Qd / f.Q;
  f.al2 = -0.5 * f.d2 * f.Q - f.d1 * f.Qd;
  f.be2 = f.Qdd / f.Q;
  f.E = std::exp(-SQRT2 * f.d);
  f.Ed = -SQRT2 * f.d1 * f.E;
  f.Edd = (2.0 * f.d1 * f.d1 - SQRT2 * f.d2) * f.E;
  return f;
}

// Pointwise residual Lambda(phi) = phi_tt - phi_xx + U'(phi) of the
// modulation-free order-2 ansatz
//   phi(t,x) = H(y+) - H(y-) + e^{-sqrt2 d} (G(y+) - G(y-)),
//   y+/- = w0(t, +/-x) = (+/-x - d/2) Q,
// with every time derivative in closed form.
double lambda_phi20(const FrameFactors& f, double x) {
  const double yp = (x - 0.5 * f.d) * f.Q;
  const double ym = (-x - 0.5 * f.d) * f.Q;

  const double hp = kink_eval(yp), hdp = kink_eval(yp, 1),
               hddp = kink_eval(yp, 2);
  const double hm = kink_eval(ym), hdm = kink_eval(ym, 1),
               hddm = kink_eval(ym, 2);
  const double gp0 = special_eval(SpecialKind::G, yp, 0),
               gp1 = special_eval(SpecialKind::G, yp, 1),
               gp2 = special_eval(SpecialKind::G, yp, 2);
  const double gm0 = special_eval(SpecialKind::G, ym, 0),
               gm1 = special_eval(SpecialKind::G, ym, 1),
               gm2 = special_eval(SpecialKind::G, ym, 2);

  const double ap = f.al + f.be * yp, am = f.al + f.be * ym;
  const double bp = f.al2 + f.be2 * yp, bm = f.al2 + f.be2 * ym;

  const double phi = hp - hm + f.E * (gp0 - gm0);
  const double phi_tt = hddp * ap * ap + hdp * bp -
                        (hddm * am * am + hdm * bm) +
                        f.Edd * (gp0 - gm0) +
                        2.0 * f.Ed * (gp1 * ap - gm1 * am) +
                        f.E * (gp2 * ap * ap + gp1 * bp -
                               (gm2 * am * am + gm1 * bm));
  const double phi_xx = f.Q * f.Q * (hddp - hddm + f.E * (gp2 - gm2));
  return phi_tt - phi_xx + dU(phi);
}

}  // namespace

double d_eval(double v, double t, int deriv) {
  check_speed(v, "d_eval");
  if (deriv < 0 || deriv > 4)
    throw std::invalid_argument("d_eval: derivative order must be 0..4, got " +
                                std::to_string(deriv));
  const double u = SQRT2 * v * t;
  switch (deriv) {
    case 0:
      return (std::log(8.0 / (v * v)) + 2.0 * logcosh(u)) / SQRT2;
    case 1:
      return 2.0 * v * std::tanh(u);
    case 2: {
      const double s = sech(u);
      return 2.0 * SQRT2 * v * v * s * s;
    }
    case 3: {
      const double s = sech(u);
      return -8.0 * v * v * v * s * s * std::tanh(u);
    }
    default: {
      const double s2 = sech(u) * sech(u);
      const double th = std::tanh(u);
      return 4.0 * SQRT2 * v * v * v * v * s2 * (4.0 * th * th - 2.0 * s2);
    }
  }
}

TrajectoryParams::TrajectoryParams(double speed) : v(speed) {
  check_speed(speed, "TrajectoryParams");
}

double TrajectoryParams::gamma_tilde(double t) const {
  const double d1 = d_eval(v, t, 1);
  return std::sqrt(1.0 - 0.25 * d1 * d1);
}

std::vector<double> modulation_time_grid(double v, std::size_t n) {
  check_speed(v, "modulation_time_grid");
  if (n < 9 || n % 2 == 0)
    throw std::invalid_argument(
        "modulation_time_grid: need an odd sample count >= 9, got " +
        std::to_string(n));
  const std::size_t mid = (n - 1) / 2;
  const double dt = 12.0 / (SQRT2 * v) / static_cast<double>(mid);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = (static_cast<double>(i) - static_cast<double>(mid)) * dt;
  return t;
}

double ModulationSolution::r_at(double tt) const {
  if (t.empty() || tt <= t.front() || tt >= t.back()) return limit_r;
  return spline_(tt);
}

double ModulationSolution::rdot_at(double tt) const {
  if (t.empty() || tt <= t.front() || tt >= t.back()) return 0.0;
  return spline_dot_(tt);
}

double ModulationSolution::rddot_at(double tt) const {
  if (t.empty() || tt <= t.front() || tt >= t.back()) return 0.0;
  return spline_ddot_(tt);
}

double exp_factor(double v, double t, int m1, int m2, int m3,
                  const ModulationSolution* rmod) {
  const double d = d_eval(v, t, 0);
  const double d1 = d_eval(v, t, 1);
  const double r = rmod ? rmod->r_at(t) : 0.0;
  const double lg = 0.5 * std::log1p(-0.25 * d1 * d1);  // ln gamma_tilde
  // (d + r) / gamma^{m2} - d, assembled without cancellation
  const double shift = d * std::expm1(-m2 * lg) + r * std::exp(-m2 * lg);
  return std::exp(-m1 * SQRT2 * d) * std::expm1(-m1 * SQRT2 * shift + m3 * lg);
}

double explicit_forcing(double v, double t) {
  const ForcingMoments& m = forcing_moments();
  const FrameFactors f = frame_factors(v, t);

  // <Hdot, R1>: curvature of the co-moving kink frame. The exact
  // cancellations (dot w0)^2 + 1 - Q^2 = (2 al be) y + be^2 y^2 and
  // ddot w0 + 8 sqrt2 e^{-sqrt2 d} Q = -d1 Qd + (Qdd/Q) y are already
  // performed, leaving pure moment combinations.
  const double r1 = -f.d1 * f.Qd * m.y_hdd + f.be * f.be * m.y2_hdd -
                    f.d1 * f.Qd * m.norm2 + f.be2 * m.y_hd;

  // <Hdot, R2>: the dressed profile's frame derivatives plus the Q^2 - 1
  // mismatch of its defining identity.
  const double q21 = f.Q * f.Q - 1.0;
  const double r2 = f.Edd * m.g + 2.0 * f.Ed * (f.al * m.gp + f.be * m.y_gp) +
                    f.E * (f.al * f.al * m.gpp + 2.0 * f.al * f.be * m.y_gpp +
                           f.be * f.be * m.y2_gpp + f.al2 * m.gp +
                           f.be2 * m.y_gp) +
                    f.E * q21 * m.w - f.E * q21 * m.ug;

  const double bracket = exp_factor(v, t, 1, 1, 1, nullptr);
  return -(r1 + r2) + (m.c1 * f.d + m.c2) * f.E * f.E - 4.0 * bracket;
}

std::vector<double> forcing_projection_base(double v,
                                            const std::vector<double>& t_grid) {
  check_speed(v, "forcing_projection_base");
  std::vector<double> F(t_grid.size());
  parallel_for(static_cast<int>(t_grid.size()), [&](int i) {
    const FrameFactors f = frame_factors(v, t_grid[i]);
    const double gam = 1.0 / f.Q;
    F[static_cast<std::size_t>(i)] =
        -gam * integrate(
                   [&](double y) {
                     return lambda_phi20(f, 0.5 * f.d + gam * y) *
                            kink_eval(y, 1);
                   },
                   -45.0, 45.0, 1e-11);
  });
  return F;
}

ModulationSolution solve_secular_ode(const std::vector<double>& forcing,
                                     double v, double normalizer) {
  ModulationSolution out;
  out.v = v;
  out.t = modulation_time_grid(v, forcing.size());
  for (double f : forcing)
    if (!std::isfinite(f))
      throw std::runtime_error(
          "solve_secular_ode: forcing is not finite on the grid");

  const std::size_t n = forcing.size();
  const std::size_t mid = (n - 1) / 2;
  const double dt = out.t[1] - out.t[0];
  const double norm = normalizer > 0.0 ? normalizer : kink_norm2();
  const double sv = SQRT2 * v;

  double fmax = 0.0, asym = 0.0;
  for (double f : forcing) fmax = std::max(fmax, std::abs(f));
  out.forcing.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    asym = std::max(asym, std::abs(forcing[i] - forcing[n - 1 - i]));
    out.forcing[i] = 0.5 * (forcing[i] + forcing[n - 1 - i]);
  }
  out.asymmetry = fmax > 0.0 ? asym / fmax : 0.0;

  std::vector<double> s1(n), s2(n), s1d(n), s2d(n), g1(n), g2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = sv * out.t[i];
    const double th = std::tanh(u);
    const double se2 = sech(u) * sech(u);
    s1[i] = th;
    s2[i] = u * th - 1.0;
    s1d[i] = sv * se2;
    s2d[i] = sv * (th + u * se2);
    const double nl = out.forcing[i] / norm;
    g1[i] = nl * s2[i];
    g2[i] = nl * s1[i];
  }
  for (std::size_t i : {std::size_t{0}, mid / 2, n - 1}) {
    const double w = s1[i] * s2d[i] - s1d[i] * s2[i];
    if (std::abs(w - sv) > 1e-12 * sv)
      throw std::runtime_error(
          "solve_secular_ode: homogeneous basis lost the Wronskian identity");
  }

  const std::vector<double> c1 = cum_integral_o4(g1, dt);
  const std::vector<double> c2 = cum_integral_o4(g2, dt);
  out.r.resize(n);
  out.rdot.resize(n);
  out.rddot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th1 = -(c1[i] - c1[mid]) / sv;
    const double th2 = c2[i] / sv;
    out.r[i] = th1 * s1[i] + th2 * s2[i];
    out.rdot[i] = th1 * s1d[i] + th2 * s2d[i];
    out.rddot[i] = out.forcing[i] / norm -
                   32.0 * std::exp(-SQRT2 * d_eval(v, out.t[i], 0)) * out.r[i];
  }
  out.limit_r = out.r.back();
  out.spline_ = CubicSpline(out.t.front(), dt, out.r);
  out.spline_dot_ = CubicSpline(out.t.front(), dt, out.rdot);
  out.spline_ddot_ = CubicSpline(out.t.front(), dt, out.rddot);
  return out;
}

ModulationSolution solve_modulation_k2(double v, std::size_t samples) {
  const std::vector<double> t = modulation_time_grid(v, samples);
  std::vector<double> F(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) F[i] = explicit_forcing(v, t[i]);
  ModulationSolution out = solve_secular_ode(F, v);
  out.order = 2;
  return out;
}

}  // namespace kc
