#ifndef KINKCOLLIDE_MODULATION_HPP
#define KINKCOLLIDE_MODULATION_HPP

// Collision trajectory of the attractive kink pair, the exponential-factor
// bracket that appears throughout the residual estimates, and the
// variation-of-parameters solver for the secular modulation r(t).
//
// The trajectory
//
//   d(t) = (1/sqrt2) ln((8/v^2) cosh^2(sqrt2 v t)),   0 < v < 1,
//
// solves ddot d = 16 sqrt2 e^{-sqrt2 d} with sup |dot d| = 2v. The secular
// ODE
//
//   ||Hdot||^2 rddot = -32 e^{-sqrt2 d} ||Hdot||^2 r + F(t)
//
// has the exact homogeneous basis sol1 = tanh(sqrt2 v t) and
// sol2 = sqrt2 v t tanh(sqrt2 v t) - 1 (Wronskian sqrt2 v); the even bounded
// solution is picked by integrating theta2 from the far left and anchoring
// theta1(0) = 0.

#include <cstddef>
#include <vector>

#include "kinkcollide/num.hpp"

namespace kc {

struct AnsatzSpec;  // defined in kinkcollide/ansatz.hpp

// l-th time derivative of the trajectory, l = 0..4, closed forms. Throws
// std::invalid_argument unless 0 < v < 1 and l is in range.
double d_eval(double v, double t, int deriv = 0);

// Speed bundled with the trajectory evaluators.
struct TrajectoryParams {
  double v = 0.0;
  explicit TrajectoryParams(double speed);
  double d(double t, int deriv = 0) const { return d_eval(v, t, deriv); }
  double gamma_tilde(double t) const;  // sqrt(1 - (dot d)^2 / 4)
};

// Symmetric uniform time grid used by the modulation solver: n odd samples
// spanning [-T, T] with T = 12/(sqrt2 v), so e^{-2 sqrt2 v T} ~ 1e-15
// truncates every forcing tail below noise. t[mid] is exactly 0 and
// t[n-1-i] == -t[i] exactly.
std::vector<double> modulation_time_grid(double v, std::size_t n = 4097);

// Secular modulation r(t) sampled on modulation_time_grid(v, r.size()).
class ModulationSolution {
 public:
  double v = 0.0;
  int order = 2;
  std::vector<double> t;
  std::vector<double> r, rdot, rddot;
  std::vector<double> forcing;  // symmetrized forcing samples F(t)
  double limit_r = 0.0;         // plateau value r(T), the t -> inf limit
  double asymmetry = 0.0;       // max |F(t)-F(-t)| / max |F| before symmetrizing

  double t_max() const { return t.empty() ? 0.0 : t.back(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
  // Spline value of r at arbitrary time; beyond the grid returns limit_r.
  double r_at(double tt) const;
  // Spline value of dot r; beyond the grid returns 0 (the plateau is flat).
  double rdot_at(double tt) const;
  // Spline value of ddot r; beyond the grid returns 0.
  double rddot_at(double tt) const;

 private:
  friend ModulationSolution solve_secular_ode(const std::vector<double>&,
                                              double, double);
  CubicSpline spline_;
  CubicSpline spline_dot_;
  CubicSpline spline_ddot_;
};

// p(v,t) = (1 - (dot d)^2/4)^{m3/2}
//            * exp(-m1 sqrt2 (d + r) / (1 - (dot d)^2/4)^{m2/2})
//          - e^{-m1 sqrt2 d},
// with r interpolated from rmod (r = 0 when rmod is null). Assembled through
// expm1/log1p so the m2 = m3 = 0, r = 0 case is exactly zero.
double exp_factor(double v, double t, int m1, int m2, int m3,
                  const ModulationSolution* rmod = nullptr);

// Closed-form order-2 forcing of the secular ODE: the weight-2 interaction
// ledger constants, the profile moments of the trajectory-curvature terms,
// and the exp_factor bracket, assembled pointwise in t. Even in t.
double explicit_forcing(double v, double t);

// Residual-projection forcing at order 2: F(t) = -<Lambda(phi)(t,.),
// Hdot(w0(t,.))> for the modulation-free two-kink ansatz phi (boosted kink
// pair plus its e^{-sqrt2 d} interaction-profile dressing), evaluated by
// quadrature in the co-moving frame. Agrees with explicit_forcing up to a
// gap that scales like v^6.
std::vector<double> forcing_projection_base(double v,
                                            const std::vector<double>& t_grid);

// Variation-of-parameters solve for a forcing sampled on
// modulation_time_grid(v, forcing.size()). The forcing is symmetrized first
// (measured asymmetry is recorded on the result), theta2 integrates from the
// left end, theta1 from the center sample, and rddot is reconstructed from
// the ODE itself. normalizer <= 0 selects ||Hdot||^2. Throws
// std::invalid_argument for an even or too-short sample count and
// std::runtime_error for a non-finite forcing.
ModulationSolution solve_secular_ode(const std::vector<double>& forcing,
                                     double v, double normalizer = -1.0);

// Order-2 modulation driven by the closed-form forcing.
ModulationSolution solve_modulation_k2(double v, std::size_t samples = 4097);

// Projection forcing for a general ansatz; defined with the ansatz module.
std::vector<double> forcing_projection(const AnsatzSpec& spec, double v,
                                       const std::vector<double>& t_grid);

}  // namespace kc

#endif
