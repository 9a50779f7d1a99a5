#ifndef KINKCOLLIDE_ANSATZ_HPP
#define KINKCOLLIDE_ANSATZ_HPP

// Two-kink collision ansatz phi_k(v,t,x) on the lab grid: assembly of the
// boosted kink pair with its e^{-sqrt2 d} interaction dressing and stored
// correction profiles, the wave-equation residual
//
//   Lambda(phi) = phi_tt - phi_xx + dU(phi),
//
// kink projections and Sobolev norms of grid fields, and the order-raising
// step k -> k+1 that inverts the kink linearization on the symmetric half of
// the residual and solves the secular ODE for the next modulation r_{k+1}.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kinkcollide/grid.hpp"
#include "kinkcollide/modulation.hpp"
#include "kinkcollide/num.hpp"

namespace kc {

// Affine co-moving frame of the right kink at one instant,
// w(x) = (x + rho) * contraction; the left kink sees w(-x). rho collects
// -d/2 and the modulation shifts, contraction is (1 - (dot d)^2/4)^{-1/2}.
struct CoMovingFrame {
  double rho = 0.0;
  double rho_dot = 0.0;
  double rho_ddot = 0.0;
  double contraction = 1.0;
  double contraction_dot = 0.0;
  double contraction_ddot = 0.0;

  double w(double x) const { return (x + rho) * contraction; }
  double x_of(double w) const { return w / contraction - rho; }
  // time derivatives of w(t,x) at fixed x, expressed through w itself
  double w_t(double w) const {
    return rho_dot * contraction + w * contraction_dot / contraction;
  }
  double w_tt(double w) const {
    return rho_ddot * contraction + 2.0 * rho_dot * contraction_dot +
           w * contraction_ddot / contraction;
  }
};

// One raised-order correction profile R(t,y) in the co-moving variable,
// held as per-y-node cubic splines over a uniform symmetric t-grid together
// with matching dR/dt samples (needed for the time derivative of the
// ansatz). Outside [y_min, y_max] the profile is treated as zero; outside
// the t-range evaluation throws.
class CorrectionLayer {
 public:
  CorrectionLayer() = default;
  // values[it][iy] = R(t0 + it*dt, y_min + iy*dy), dt_values likewise for
  // dR/dt. Throws std::invalid_argument on inconsistent shapes.
  CorrectionLayer(double y_min, double dy, double t0, double dt,
                  std::vector<std::vector<double>> values,
                  std::vector<std::vector<double>> dt_values);

  bool covers(double t) const;
  double t_lo() const { return t0_; }
  double t_hi() const {
    return t0_ + dt_ * static_cast<double>(nt_ > 0 ? nt_ - 1 : 0);
  }

  // y-profile splines of R(t,.) and dR/dt(t,.). Throw std::out_of_range
  // when t is outside the stored range.
  CubicSpline profile(double t) const;
  CubicSpline profile_dt(double t) const;

  double y_min() const { return y_min_; }
  double dy() const { return dy_; }
  std::size_t ny() const { return ny_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t nt() const { return nt_; }
  const std::vector<std::vector<double>>& values() const { return values_; }
  const std::vector<std::vector<double>>& dt_values() const {
    return dt_values_;
  }

 private:
  double y_min_ = 0.0, dy_ = 0.0, t0_ = 0.0, dt_ = 0.0;
  std::size_t nt_ = 0, ny_ = 0;
  std::vector<std::vector<double>> values_, dt_values_;
  std::vector<CubicSpline> in_t_, in_t_dt_;  // one spline per y node
};

// Everything needed to evaluate phi_k: the speed, the order, the secular
// modulations r_2..r_k, the correction layers of orders 3..k, and the lab
// grid (x_min + i*h for i < nx, h = (x_max - x_min)/nx; the right endpoint
// is excluded so the grid matches the periodic spectral convention).
struct AnsatzSpec {
  double v = 0.0;
  int k = 2;
  std::vector<ModulationSolution> modulations;
  std::vector<CorrectionLayer> corrections;
  double x_min = -120.0;
  double x_max = 120.0;
  std::size_t nx = 8192;

  double h() const { return (x_max - x_min) / static_cast<double>(nx); }
  // Largest |t| covered by every stored correction layer (infinity when
  // there are none).
  double t_cover() const;
};

// Order-2 spec: the closed-form secular forcing solved on the standard
// modulation grid, no correction layers.
AnsatzSpec make_order2_spec(double v, std::size_t samples = 4097);

// Frame of the right kink at time t: rho = -d/2 + sum r_j plus its first
// two time derivatives, and the Lorentz-like contraction factor with its
// derivatives.
CoMovingFrame frame_at(const AnsatzSpec& spec, double t);

// phi_k(t,.) and d/dt phi_k(t,.) on the lab grid (u and ut of the result).
// Kink and dressing parts are assembled by analytic chain rule; correction
// layers contribute their stored profiles and time derivatives. Throws
// std::out_of_range when a correction layer does not cover t.
GridField build_phi(const AnsatzSpec& spec, double t);

// Residual Lambda(phi_k)(t,.) = phi_tt - phi_xx + dU(phi) on the lab grid.
// phi_tt: analytic second time derivatives for the kink and dressing parts;
// Richardson-extrapolated central differences (steps delta and delta/2)
// over the stored first derivatives for the correction layers. phi_xx:
// spectral derivative after subtracting a smooth kink-shaped template that
// absorbs the boundary values. delta <= 0 selects 1e-3/v. Throws
// std::runtime_error when the two Richardson estimates disagree badly.
GridField lambda_residual(const AnsatzSpec& spec, double t,
                          double delta = -1.0);

// Same residual pipeline for an arbitrary sampled field: sampler(t, u, ut)
// must fill u and ut on the lab grid x_min + i*h, i < n. All of phi_tt is
// obtained from the sampled ut by Richardson extrapolation. Exposed so
// exact solutions can be pushed through the identical discretization.
GridField wave_residual(
    const std::function<void(double, std::vector<double>&,
                             std::vector<double>&)>& sampler,
    double t, double delta, double x_min, double h, std::size_t n);

// <field, Hdot(w(.))> by the h-weighted lab-grid sum; equals the co-moving
// quadrature gamma * int field(x(y)) Hdot(y) dy.
double project_on_kink(const GridField& field, const CoMovingFrame& frame);

// sqrt of the periodic-FFT H^s norm of field.u. If boundary_pollution is
// non-null it is set when the end samples exceed 1e-8 of the sup norm
// (the field is not decay-padded and the transform is polluted).
double sobolev_norm(const GridField& field, double s,
                    bool* boundary_pollution = nullptr);

// One induction step k -> k+1:
//   (a) per t node, extract the symmetric half S(t,y) of Lambda(phi_k) in
//       co-moving coordinates with the smooth partition chi centered at
//       x = 0 (width 5),
//   (b) project out the kink-derivative component,
//   (c) invert the kink linearization (second-order grid inverse plus one
//       deferred-correction pass against the sixth-order stencil) and store
//       R_{k+1} = -L^{-1}Gamma with its time derivative,
//   (d) project the residual of the correction-augmented ansatz onto
//       Hdot(w) and solve the secular ODE for r_{k+1},
//   (e) return the new spec with the layer and modulation appended.
// Throws std::runtime_error when the reflected-frame contamination of the
// extraction exceeds the stability threshold.
AnsatzSpec raise_order(const AnsatzSpec& spec);

// Time shift of the outgoing kinks relative to the free trajectory:
// e_vk = ln(8/v^2)/sqrt2 + e_r with e_r the sum of the modulation plateaus,
// and e_shift = -e_vk/(2v).
struct TimeShift {
  double e_shift = 0.0;
  double e_vk = 0.0;
  double e_r = 0.0;
};
TimeShift compute_time_shift(const AnsatzSpec& spec);

// JSON (de)serialization. Modulations are stored through their forcing
// samples and re-solved on load, so a loaded spec is bit-identical to the
// saved one; correction layers are stored in full.
void save_spec(const AnsatzSpec& spec, const std::string& path);
AnsatzSpec load_spec(const std::string& path);

}  // namespace kc

#endif
