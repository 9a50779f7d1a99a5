#include "kinkcollide/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "kinkcollide/linop.hpp"
#include "kinkcollide/potential.hpp"
#include "kinkcollide/profiles.hpp"

namespace kc {

namespace {

// ---------------------------------------------------------------------------
// correction layer

void check_layer_shape(std::size_t nt, std::size_t ny,
                       const std::vector<std::vector<double>>& a,
                       const char* what) {
  if (a.size() != nt)
    throw std::invalid_argument(std::string("CorrectionLayer: ") + what +
                                " has wrong node count");
  for (const auto& row : a)
    if (row.size() != ny)
      throw std::invalid_argument(std::string("CorrectionLayer: ") + what +
                                  " row length mismatch");
}

}  // namespace

CorrectionLayer::CorrectionLayer(double y_min, double dy, double t0, double dt,
                                 std::vector<std::vector<double>> values,
                                 std::vector<std::vector<double>> dt_values)
    : y_min_(y_min),
      dy_(dy),
      t0_(t0),
      dt_(dt),
      nt_(values.size()),
      ny_(values.empty() ? 0 : values.front().size()),
      values_(std::move(values)),
      dt_values_(std::move(dt_values)) {
  if (nt_ < 4 || ny_ < 4 || !(dy > 0.0) || !(dt > 0.0))
    throw std::invalid_argument(
        "CorrectionLayer: need at least 4x4 samples and positive spacings");
  check_layer_shape(nt_, ny_, values_, "values");
  check_layer_shape(nt_, ny_, dt_values_, "dt_values");

  in_t_.resize(ny_);
  in_t_dt_.resize(ny_);
  std::vector<double> col(nt_);
  for (std::size_t j = 0; j < ny_; ++j) {
    for (std::size_t i = 0; i < nt_; ++i) col[i] = values_[i][j];
    in_t_[j] = CubicSpline(t0_, dt_, col);
    for (std::size_t i = 0; i < nt_; ++i) col[i] = dt_values_[i][j];
    in_t_dt_[j] = CubicSpline(t0_, dt_, col);
  }
}

bool CorrectionLayer::covers(double t) const {
  return nt_ > 0 && t >= t0_ && t <= t_hi();
}

CubicSpline CorrectionLayer::profile(double t) const {
  if (!covers(t))
    throw std::out_of_range("CorrectionLayer: t = " + std::to_string(t) +
                            " outside the stored range [" +
                            std::to_string(t0_) + ", " +
                            std::to_string(t_hi()) + "]");
  std::vector<double> vals(ny_);
  for (std::size_t j = 0; j < ny_; ++j) vals[j] = in_t_[j](t);
  return CubicSpline(y_min_, dy_, std::move(vals));
}

CubicSpline CorrectionLayer::profile_dt(double t) const {
  if (!covers(t))
    throw std::out_of_range("CorrectionLayer: t = " + std::to_string(t) +
                            " outside the stored range [" +
                            std::to_string(t0_) + ", " +
                            std::to_string(t_hi()) + "]");
  std::vector<double> vals(ny_);
  for (std::size_t j = 0; j < ny_; ++j) vals[j] = in_t_dt_[j](t);
  return CubicSpline(y_min_, dy_, std::move(vals));
}

// ---------------------------------------------------------------------------
// spec and frame

double AnsatzSpec::t_cover() const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& layer : corrections)
    c = std::min(c, std::min(-layer.t_lo(), layer.t_hi()));
  return c;
}

AnsatzSpec make_order2_spec(double v, std::size_t samples) {
  AnsatzSpec spec;
  spec.v = v;
  spec.k = 2;
  spec.modulations.push_back(solve_modulation_k2(v, samples));
  return spec;
}

CoMovingFrame frame_at(const AnsatzSpec& spec, double t) {
  const double v = spec.v;
  const double d0 = d_eval(v, t, 0);
  const double d1 = d_eval(v, t, 1);
  const double d2 = d_eval(v, t, 2);
  const double d3 = d_eval(v, t, 3);

  CoMovingFrame f;
  f.contraction = 1.0 / std::sqrt(1.0 - 0.25 * d1 * d1);
  const double Q = f.contraction;
  f.contraction_dot = 0.25 * Q * Q * Q * d1 * d2;
  f.contraction_ddot =
      0.25 * (3.0 * Q * Q * f.contraction_dot * d1 * d2 +
              Q * Q * Q * (d2 * d2 + d1 * d3));
  f.rho = -0.5 * d0;
  f.rho_dot = -0.5 * d1;
  f.rho_ddot = -0.5 * d2;
  for (const auto& m : spec.modulations) {
    f.rho += m.r_at(t);
    f.rho_dot += m.rdot_at(t);
    f.rho_ddot += m.rddot_at(t);
  }
  return f;
}

namespace {

// ---------------------------------------------------------------------------
// field assembly

// Kink-pair and interaction-dressing parts of phi at time t, by analytic
// chain rule through the frame. Any of u/ut/utt may be null.
void core_fields(const AnsatzSpec& spec, double t, std::vector<double>* u,
                 std::vector<double>* ut, std::vector<double>* utt) {
  const std::size_t n = spec.nx;
  const double h = spec.h();
  const CoMovingFrame f = frame_at(spec, t);
  const double Q = f.contraction;
  const double d0 = d_eval(spec.v, t, 0);
  const double d1 = d_eval(spec.v, t, 1);
  const double d2 = d_eval(spec.v, t, 2);
  const double E = std::exp(-SQRT2 * d0);
  const double Ed = -SQRT2 * d1 * E;
  const double Edd = (2.0 * d1 * d1 - SQRT2 * d2) * E;

  if (u) u->assign(n, 0.0);
  if (ut) ut->assign(n, 0.0);
  if (utt) utt->assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double x = spec.x_min + static_cast<double>(i) * h;
    const double wp = (x + f.rho) * Q;
    const double wm = (-x + f.rho) * Q;

    const double h0p = kink_eval(wp, 0), h0m = kink_eval(wm, 0);
    const double g0p = special_eval(SpecialKind::G, wp, 0);
    const double g0m = special_eval(SpecialKind::G, wm, 0);
    if (u) (*u)[i] = h0p - h0m + E * (g0p - g0m);
    if (!ut && !utt) continue;

    const double h1p = kink_eval(wp, 1), h1m = kink_eval(wm, 1);
    const double g1p = special_eval(SpecialKind::G, wp, 1);
    const double g1m = special_eval(SpecialKind::G, wm, 1);
    const double wtp = f.w_t(wp), wtm = f.w_t(wm);
    if (ut)
      (*ut)[i] = h1p * wtp - h1m * wtm + Ed * (g0p - g0m) +
                 E * (g1p * wtp - g1m * wtm);
    if (!utt) continue;

    const double h2p = kink_eval(wp, 2), h2m = kink_eval(wm, 2);
    const double g2p = special_eval(SpecialKind::G, wp, 2);
    const double g2m = special_eval(SpecialKind::G, wm, 2);
    const double wttp = f.w_tt(wp), wttm = f.w_tt(wm);
    (*utt)[i] = h2p * wtp * wtp + h1p * wttp -
                (h2m * wtm * wtm + h1m * wttm) + Edd * (g0p - g0m) +
                2.0 * Ed * (g1p * wtp - g1m * wtm) +
                E * (g2p * wtp * wtp + g1p * wttp -
                     (g2m * wtm * wtm + g1m * wttm));
  }
}

// Stored-correction parts of phi at time t; u/ut may be null. Throws
// std::out_of_range (via CorrectionLayer::profile) when t is not covered.
void correction_fields(const AnsatzSpec& spec, double t, std::vector<double>* u,
                       std::vector<double>* ut) {
  const std::size_t n = spec.nx;
  if (u) u->assign(n, 0.0);
  if (ut) ut->assign(n, 0.0);
  if (spec.corrections.empty()) return;

  const double h = spec.h();
  const CoMovingFrame f = frame_at(spec, t);
  const double Q = f.contraction;

  for (const auto& layer : spec.corrections) {
    const CubicSpline prof = layer.profile(t);
    const CubicSpline prof_dt = ut ? layer.profile_dt(t)
                                   : CubicSpline();
    const double lo = layer.y_min() + 2.0 * layer.dy();
    const double hi = layer.y_min() +
                      layer.dy() * static_cast<double>(layer.ny() - 1) -
                      2.0 * layer.dy();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = spec.x_min + static_cast<double>(i) * h;
      const double wp = (x + f.rho) * Q;
      const double wm = (-x + f.rho) * Q;
      const bool inp = wp > lo && wp < hi;
      const bool inm = wm > lo && wm < hi;
      if (!inp && !inm) continue;
      if (u) {
        double s = 0.0;
        if (inp) s += prof(wp);
        if (inm) s -= prof(wm);
        (*u)[i] += s;
      }
      if (ut) {
        double s = 0.0;
        if (inp) s += prof_dt(wp) + prof.eval(wp, 1) * f.w_t(wp);
        if (inm) s -= prof_dt(wm) + prof.eval(wm, 1) * f.w_t(wm);
        (*ut)[i] += s;
      }
    }
  }
}

}  // namespace

// Second x-derivative of a sampled field whose ends sit at two (generally
// different) constants: subtract a smooth kink-shaped template carrying the
// boundary values, differentiate the decaying remainder spectrally, and add
// back the template curvature analytically. Shared with the time
// integrator, which needs the same Laplacian on the same configurations.
std::vector<double> second_x_derivative(const std::vector<double>& u,
                                        double x_min, double h) {
  const std::size_t n = u.size();
  const std::size_t m = std::min<std::size_t>(8, n / 4);
  double cm = 0.0, cp = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cm += u[i];
    cp += u[n - 1 - i];
  }
  cm /= static_cast<double>(m);
  cp /= static_cast<double>(m);
  const double amp = 0.5 * (cp - cm);

  std::vector<double> psi(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_min + static_cast<double>(i) * h;
    const double bridge = kink_eval(x, 0) - kink_eval(-x, 0);  // -1 -> +1
    psi[i] = u[i] - (cm + amp * (bridge + 1.0));
  }
  spectral_second_derivative(psi, h * static_cast<double>(n), out);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_min + static_cast<double>(i) * h;
    out[i] += amp * (kink_eval(x, 2) - kink_eval(-x, 2));
  }
  return out;
}

namespace {

// Richardson second time derivative from four first-derivative samples.
// Throws when the two central-difference estimates disagree badly (the
// step straddles structure it cannot resolve).
std::vector<double> richardson_tt(const std::vector<double>& ut_p1,
                                  const std::vector<double>& ut_m1,
                                  const std::vector<double>& ut_p2,
                                  const std::vector<double>& ut_m2,
                                  double delta) {
  const std::size_t n = ut_p1.size();
  std::vector<double> out(n);
  double dmax = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = (ut_p1[i] - ut_m1[i]) / (2.0 * delta);
    const double d2 = (ut_p2[i] - ut_m2[i]) / delta;  // step delta/2
    dmax = std::max(dmax, std::abs(d2));
    gap = std::max(gap, std::abs(d2 - d1));
    out[i] = (4.0 * d2 - d1) / 3.0;
  }
  if (gap > 0.25 * dmax + 1e-12) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "time-derivative extrapolation inconsistent: estimates "
                  "differ by %.3e against scale %.3e; the step is too large "
                  "for the stored corrections",
                  gap, dmax);
    throw std::runtime_error(msg);
  }
  return out;
}

double default_delta(double v, double delta) {
  if (std::isnan(delta))
    throw std::invalid_argument("lambda_residual: delta must not be NaN");
  if (delta > 0.0) {
    if (!std::isfinite(delta))
      throw std::invalid_argument("lambda_residual: delta must be finite");
    return delta;
  }
  return 1e-3 / v;
}

}  // namespace

GridField build_phi(const AnsatzSpec& spec, double t) {
  GridField out;
  out.x_min = spec.x_min;
  out.h = spec.h();
  std::vector<double> cu, cut;
  core_fields(spec, t, &out.u, &out.ut, nullptr);
  if (!spec.corrections.empty()) {
    correction_fields(spec, t, &cu, &cut);
    for (std::size_t i = 0; i < out.u.size(); ++i) {
      out.u[i] += cu[i];
      out.ut[i] += cut[i];
    }
  }
  return out;
}

GridField lambda_residual(const AnsatzSpec& spec, double t, double delta) {
  const std::size_t n = spec.nx;
  const double h = spec.h();

  std::vector<double> u, utt;
  core_fields(spec, t, &u, nullptr, &utt);

  if (!spec.corrections.empty()) {
    const double del = default_delta(spec.v, delta);
    std::vector<double> cu, p1, m1, p2, m2;
    correction_fields(spec, t, &cu, nullptr);
    correction_fields(spec, t + del, nullptr, &p1);
    correction_fields(spec, t - del, nullptr, &m1);
    correction_fields(spec, t + 0.5 * del, nullptr, &p2);
    correction_fields(spec, t - 0.5 * del, nullptr, &m2);
    const std::vector<double> ctt = richardson_tt(p1, m1, p2, m2, del);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += cu[i];
      utt[i] += ctt[i];
    }
  }

  const std::vector<double> uxx = second_x_derivative(u, spec.x_min, h);
  GridField out;
  out.x_min = spec.x_min;
  out.h = h;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.u[i] = utt[i] - uxx[i] + dU(u[i]);
  return out;
}

GridField wave_residual(
    const std::function<void(double, std::vector<double>&,
                             std::vector<double>&)>& sampler,
    double t, double delta, double x_min, double h, std::size_t n) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("wave_residual: need a positive finite delta");
  std::vector<double> u, ut, p1, m1, p2, m2, scratch;
  sampler(t, u, ut);
  if (u.size() != n || ut.size() != n)
    throw std::invalid_argument("wave_residual: sampler filled wrong sizes");
  sampler(t + delta, scratch, p1);
  sampler(t - delta, scratch, m1);
  sampler(t + 0.5 * delta, scratch, p2);
  sampler(t - 0.5 * delta, scratch, m2);
  const std::vector<double> utt = richardson_tt(p1, m1, p2, m2, delta);
  const std::vector<double> uxx = second_x_derivative(u, x_min, h);

  GridField out;
  out.x_min = x_min;
  out.h = h;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.u[i] = utt[i] - uxx[i] + dU(u[i]);
  return out;
}

double project_on_kink(const GridField& field, const CoMovingFrame& frame) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    s += field.u[i] * kink_eval(frame.w(field.x(i)), 1);
  return s * field.h;
}

double sobolev_norm(const GridField& field, double s,
                    bool* boundary_pollution) {
  if (s < 0.0)
    throw std::invalid_argument("sobolev_norm: order must be >= 0");
  if (boundary_pollution) {
    const double m = norm_sup(field);
    *boundary_pollution =
        m > 0.0 && std::max(std::abs(field.u.front()),
                            std::abs(field.u.back())) > 1e-8 * m;
  }
  return std::sqrt(sobolev_norm2(field.u, field.h, s));
}

std::vector<double> forcing_projection(const AnsatzSpec& spec, double v,
                                       const std::vector<double>& t_grid) {
  if (v != spec.v)
    throw std::invalid_argument(
        "forcing_projection: speed does not match the spec");
  const double T = 12.0 / (SQRT2 * v);
  double cutoff = T - 2.0;
  const double cover = spec.t_cover();
  if (std::isfinite(cover))
    cutoff = std::min(cutoff, cover - 0.1 - 2e-3 / v);

  std::vector<double> F(t_grid.size(), 0.0);
  std::mutex mu;
  std::string failure;
  parallel_for(static_cast<int>(t_grid.size()), [&](int i) {
    try {
      const double t = t_grid[static_cast<std::size_t>(i)];
      if (std::abs(t) > cutoff) return;
      const GridField lam = lambda_residual(spec, t);
      F[static_cast<std::size_t>(i)] =
          -project_on_kink(lam, frame_at(spec, t));
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      if (failure.empty()) failure = e.what();
    }
  });
  if (!failure.empty())
    throw std::runtime_error("forcing_projection: " + failure);
  return F;
}

namespace {

// Bordered grid inverse of the kink linearization plus one deferred
// correction against the sixth-order stencil, lifting the O(h^2) solve to
// O(h^4) where it matters.
std::vector<double> invert_deferred(const OperatorGrid& op,
                                    const GridField& g) {
  const auto r1 = op.invert_L(g);
  const std::size_t n = op.n();
  const double h2 = op.h() * op.h();
  const auto& pot = op.potential();
  const auto& unit = op.kink_derivative_unit();
  const auto& u0 = r1.u.u;

  GridField res;
  res.x_min = op.x_min();
  res.h = op.h();
  res.u.assign(n, 0.0);
  for (std::size_t j = 3; j + 3 < n; ++j) {
    const double d2 =
        (2.0 * (u0[j - 3] + u0[j + 3]) - 27.0 * (u0[j - 2] + u0[j + 2]) +
         270.0 * (u0[j - 1] + u0[j + 1]) - 490.0 * u0[j]) /
        (180.0 * h2);
    res.u[j] = (g.u[j] - r1.removed * unit[j]) - (-d2 + pot[j] * u0[j]);
  }
  const auto r2 = op.invert_L(res);

  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = u0[j] + r2.u.u[j];
  return out;
}

}  // namespace

AnsatzSpec raise_order(const AnsatzSpec& spec) {
  const double v = spec.v;
  if (spec.k < 2 ||
      spec.modulations.size() != static_cast<std::size_t>(spec.k - 1))
    throw std::invalid_argument(
        "raise_order: spec must carry modulations for every order 2..k");
  const double T = 12.0 / (SQRT2 * v);
  const double step = T / 256.0;
  const int jmax = 255 - static_cast<int>(spec.corrections.size());
  const int nt = 2 * jmax + 1;

  OperatorGrid op(-60.0, 60.0, 9601);
  {
    // build the factorization before the parallel region
    GridField warm;
    warm.x_min = op.x_min();
    warm.h = op.h();
    warm.u = op.kink_derivative();
    op.invert_L(warm);
  }
  const double fd_step = 1e-3 / v;
  const std::size_t ds = 4;  // operator grid -> layer grid downsample
  const std::size_t ny = (op.n() - 1) / ds + 1;

  // Stability of the per-frame extraction: the x > 0 half can only be
  // attributed to the right kink while the two kernel directions Hdot(w+)
  // and Hdot(w-) stay well separated. Their normalized overlap at closest
  // approach is the reflected-frame contamination of the route; it grows
  // like d e^{-sqrt2 d(0)} and passes 0.2 near v = 0.33.
  {
    const CoMovingFrame f0 = frame_at(spec, 0.0);
    double num = 0.0, den = 0.0;
    const double h = spec.h();
    for (std::size_t i = 0; i < spec.nx; ++i) {
      const double x = spec.x_min + static_cast<double>(i) * h;
      const double a = kink_eval(f0.w(x), 1);
      num += a * kink_eval(f0.w(-x), 1);
      den += a * a;
    }
    const double contamination = den > 0.0 ? std::abs(num) / den : 1.0;
    if (contamination > 0.2)
      throw std::runtime_error(
          "raise_order: reflected-frame contamination " +
          std::to_string(contamination) +
          " exceeds the extraction threshold 0.2 (kink frames too close to "
          "disentangle at this speed)");
  }

  // Lambda(phi_k)(t,.) -> chi-extracted symmetric half -> kernel component
  // stripped -> minus the deferred grid inverse, on the operator grid.
  auto correction_profile = [&](double t) {
    const GridField lam = lambda_residual(spec, t);
    const CubicSpline ls(lam.x_min, lam.h, lam.u);
    const CoMovingFrame fr = frame_at(spec, t);
    const double x_lo = lam.x_min;
    const double x_hi = lam.x_min + lam.h * static_cast<double>(lam.size() - 1);

    GridField S;
    S.x_min = op.x_min();
    S.h = op.h();
    S.u.resize(op.n());
    for (std::size_t i = 0; i < op.n(); ++i) {
      const double y = op.x_min() + static_cast<double>(i) * op.h();
      const double x = fr.x_of(y);
      double val = 0.0;
      if (x > x_lo && x < x_hi) val = smoothstep((x + 2.5) / 5.0) * ls(x);
      S.u[i] = val;
    }

    const auto& unit = op.kink_derivative_unit();
    double c = 0.0;
    for (std::size_t i = 0; i < op.n(); ++i) c += S.u[i] * unit[i];
    c *= op.h();
    for (std::size_t i = 0; i < op.n(); ++i) S.u[i] -= c * unit[i];

    std::vector<double> inv = invert_deferred(op, S);
    for (double& x : inv) x = -x;
    return inv;
  };

  std::vector<std::vector<double>> vals(static_cast<std::size_t>(nt)),
      dvals(static_cast<std::size_t>(nt));
  std::mutex mu;
  std::string failure;
  parallel_for(nt, [&](int it) {
    try {
      const double t = static_cast<double>(it - jmax) * step;
      const std::vector<double> c0 = correction_profile(t);
      const std::vector<double> cp = correction_profile(t + fd_step);
      const std::vector<double> cm = correction_profile(t - fd_step);
      auto& vrow = vals[static_cast<std::size_t>(it)];
      auto& drow = dvals[static_cast<std::size_t>(it)];
      vrow.resize(ny);
      drow.resize(ny);
      for (std::size_t l = 0; l < ny; ++l) {
        vrow[l] = c0[l * ds];
        drow[l] = (cp[l * ds] - cm[l * ds]) / (2.0 * fd_step);
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      if (failure.empty()) failure = e.what();
    }
  });
  if (!failure.empty()) throw std::runtime_error(failure);

  CorrectionLayer layer(op.x_min(), op.h() * static_cast<double>(ds),
                        -static_cast<double>(jmax) * step, step,
                        std::move(vals), std::move(dvals));

  AnsatzSpec out = spec;
  out.corrections.push_back(std::move(layer));

  // forcing of the next secular ODE: projection of the residual of the
  // correction-augmented ansatz, sampled on the interior layer nodes and
  // upsampled to the modulation grid (the truncated tail is below the
  // e^{-2 sqrt2 v T} design floor of the grid itself)
  const int fmax = jmax - 1;
  std::vector<double> t_nodes(static_cast<std::size_t>(2 * fmax + 1));
  for (int i = 0; i <= 2 * fmax; ++i)
    t_nodes[static_cast<std::size_t>(i)] =
        static_cast<double>(i - fmax) * step;
  const std::vector<double> F_nodes = forcing_projection(out, v, t_nodes);
  const CubicSpline F_spline(t_nodes.front(), step, F_nodes);

  const std::size_t samples = spec.modulations.front().t.size();
  const std::vector<double> t_fine = modulation_time_grid(v, samples);
  std::vector<double> F(t_fine.size(), 0.0);
  for (std::size_t i = 0; i < t_fine.size(); ++i)
    if (std::abs(t_fine[i]) <= t_nodes.back()) F[i] = F_spline(t_fine[i]);

  ModulationSolution r_next = solve_secular_ode(F, v);
  r_next.order = spec.k + 1;
  out.modulations.push_back(std::move(r_next));
  out.k = spec.k + 1;
  return out;
}

TimeShift compute_time_shift(const AnsatzSpec& spec) {
  TimeShift ts;
  for (const auto& m : spec.modulations) ts.e_r += m.limit_r;
  ts.e_vk = std::log(8.0 / (spec.v * spec.v)) / SQRT2 + ts.e_r;
  ts.e_shift = -ts.e_vk / (2.0 * spec.v);
  return ts;
}

// ---------------------------------------------------------------------------
// serialization

void save_spec(const AnsatzSpec& spec, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["v"] = spec.v;
  j["k"] = spec.k;
  j["grid"] = {{"x_min", spec.x_min}, {"x_max", spec.x_max}, {"nx", spec.nx}};

  nlohmann::json mods = nlohmann::json::array();
  for (const auto& m : spec.modulations) {
    nlohmann::json jm;
    jm["order"] = m.order;
    jm["asymmetry"] = m.asymmetry;
    jm["forcing"] = m.forcing;
    mods.push_back(std::move(jm));
  }
  j["modulations"] = std::move(mods);

  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : spec.corrections) {
    nlohmann::json jl;
    jl["y_min"] = l.y_min();
    jl["dy"] = l.dy();
    jl["t0"] = l.t0();
    jl["dt"] = l.dt();
    jl["values"] = l.values();
    jl["dt_values"] = l.dt_values();
    layers.push_back(std::move(jl));
  }
  j["corrections"] = std::move(layers);

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("save_spec: cannot open " + path +
                             " for writing");
  out << j.dump();
  out << '\n';
  if (!out) throw std::runtime_error("save_spec: write to " + path + " failed");
}

AnsatzSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_spec: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw std::runtime_error("load_spec: unsupported schema version in " +
                             path);

  AnsatzSpec spec;
  spec.v = j.at("v").get<double>();
  spec.k = j.at("k").get<int>();
  const auto& grid = j.at("grid");
  spec.x_min = grid.at("x_min").get<double>();
  spec.x_max = grid.at("x_max").get<double>();
  spec.nx = grid.at("nx").get<std::size_t>();

  for (const auto& jm : j.at("modulations")) {
    const auto forcing = jm.at("forcing").get<std::vector<double>>();
    ModulationSolution m = solve_secular_ode(forcing, spec.v);
    m.order = jm.at("order").get<int>();
    m.asymmetry = jm.at("asymmetry").get<double>();
    spec.modulations.push_back(std::move(m));
  }
  for (const auto& jl : j.at("corrections"))
    spec.corrections.emplace_back(
        jl.at("y_min").get<double>(), jl.at("dy").get<double>(),
        jl.at("t0").get<double>(), jl.at("dt").get<double>(),
        jl.at("values").get<std::vector<std::vector<double>>>(),
        jl.at("dt_values").get<std::vector<std::vector<double>>>());
  return spec;
}

}  // namespace kc
