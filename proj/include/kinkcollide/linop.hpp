#ifndef KINKCOLLIDE_LINOP_HPP
#define KINKCOLLIDE_LINOP_HPP

// The linearization  L = -d^2/dx^2 + U''(H)  around the kink, and its
// inverse restricted to the orthogonal complement of the kernel direction
// Hdot. Two forms:
//
//  * grid: second-order centered differences with Dirichlet-zero ends,
//    inverted through a bordered (saddle-point) system that enforces
//    <u, Hdot>_h = 0 while keeping the L u = g residual small;
//  * series: the exponent recurrence on plus-side tails, with the secular
//    x^{n+1} Hdot lift whenever the right-hand side hits the resonant
//    e^{sqrt2 x} mode.

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

#include "kinkcollide/grid.hpp"
#include "kinkcollide/series.hpp"

namespace kc {

class OperatorGrid {
 public:
  OperatorGrid(double x_min, double x_max, std::size_t n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_min_ + h_ * static_cast<double>(n_ - 1); }
  double h() const { return h_; }
  std::size_t n() const { return n_; }
  const std::vector<double>& potential() const { return pot_; }
  const std::vector<double>& kink_derivative() const { return kd_; }
  const std::vector<double>& kink_derivative_unit() const { return kd_unit_; }

  GridField sample(const std::function<double(double)>& f) const;

  // -u'' + U''(H) u with Dirichlet-zero ghosts; exact stencil on the
  // interior, so non-decaying inputs only pollute the two end rows.
  GridField apply_L(const GridField& u) const;

  struct InvertResult {
    GridField u;            // <u, Hdot>_h = 0
    double removed = 0.0;   // magnitude of the Hdot component stripped from g
    double multiplier = 0;  // Lagrange multiplier of the bordered solve
    bool boundary_pollution = false;  // g did not decay at the ends
  };
  // Solves L u = g - <g, w> w (+ multiplier * w), w the unit kernel sample.
  // Throws std::runtime_error if the factorization or solve fails.
  InvertResult invert_L(const GridField& g) const;

 private:
  double x_min_, h_;
  std::size_t n_;
  std::vector<double> pot_, kd_, kd_unit_;
  struct Factorization;
  mutable std::shared_ptr<Factorization> fact_;  // built on first invert
  const Factorization& factorization() const;
};

// One level of the exponent recurrence: solving L c = h for pure tails.
// 'secular' is the coefficient that multiplies x * Hdot (written c0 in the
// recurrence; it kills the resonant e^{sqrt2 x} component of h), 'output'
// holds the tail coefficients with the free kernel coefficient set to zero,
// and 'growth' is sup_k |c_k| (1/2)^{k/2} over odd exponents 2k+1 — the
// numerical stand-in for the unit-radius growth bound.
struct SeriesSolveState {
  std::map<int, double> input;
  std::map<int, double> output;
  double secular = 0.0;
  double growth = 0.0;
};

// Exposed for the recurrence-level tests; truncation caps kept exponents.
// Throws std::runtime_error when the growth surrogate explodes (input tail
// outside the unit convergence radius).
SeriesSolveState solve_kink_recurrence(const std::map<int, double>& h,
                                       int truncation);

// Inverts L on a plus-side element with x-powers up to m; the result has
// x-powers up to m+1 (the secular lift raises the degree by one). The free
// kernel coefficient of every level is fixed to zero.
// Throws std::invalid_argument for non-plus input or x-powers above m.
series::PolyExp invert_L_series(const series::PolyExp& h, int m);

// L applied coefficient-wise to a plus-side element (exact on the series).
series::PolyExp apply_L_series(const series::PolyExp& f);

}  // namespace kc

#endif
