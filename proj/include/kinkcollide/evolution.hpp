#ifndef KINKCOLLIDE_EVOLUTION_HPP
#define KINKCOLLIDE_EVOLUTION_HPP

// Time evolution of the scalar field equation from assembled initial data:
// symplectic leapfrog with a spectral Laplacian, conserved-quantity
// tracking, and asymptotic two-kink fitting.

#include <vector>

#include "kinkcollide/grid.hpp"

namespace kc {

// Field configuration at a fixed time. The grid carries the field phi in u
// and its conjugate time derivative pi in ut. Physical states are
// finite-energy and vacuum-padded: the grid ends sit within 1e-6 of a
// vacuum value of the potential (0 or +-1) with pi vanishing there.
struct FieldState {
  double t = 0.0;
  GridField field;
};

// Total energy  int pi^2/2 + phi_x^2/2 + U(phi) dx  and field momentum
// -int pi phi_x dx by trapezoid quadrature; phi_x by 6th-order central
// differences with flat extension at the vacuum-padded ends.
double energy(const FieldState& s);
double momentum(const FieldState& s);

// Evolve phi_tt = phi_xx - dU(phi) by kick-drift-kick leapfrog. The
// Laplacian is spectral after a kink-shaped template absorbs the unequal
// boundary vacua, so the periodic continuation of the evolved remainder is
// smooth. Steps have magnitude dt and the sign of T; the step count is
// round(|T|/dt), and every returned state carries its exact time, so a
// horizon that is not a multiple of dt is rounded to the nearest step.
// Returns the states at the requested snapshot times, each matched to the
// nearest step (deduplicated, in time order), with the final state always
// appended last.
//
// Errors: std::invalid_argument when dt is not positive and finite, when
// dt exceeds the stability bound 0.5*h, when the initial data is not
// vacuum-padded, or when a snapshot time falls outside the evolution
// window; std::runtime_error mentioning "instability" when sup|phi|
// exceeds 10 during the run.
std::vector<FieldState> evolve(const FieldState& initial, double T, double dt,
                               const std::vector<double>& snap_times = {});

// Best free kink-pair configuration matching the state at its own time:
// kinks at +-(v|t| + shift), moving apart at speed v for t > 0 and together
// for t < 0, with exact Lorentz contraction. Minimizes over the scalar
// shift the distance
//   sqrt( |phi - phi_pair|_{H^1}^2 + |pi - pi_pair|_{L^2}^2 )
// by golden-section search on shift in [-10, 10].
//
// Errors: std::invalid_argument when the speed is outside (0, 1) or the
// implied kink separation 2v|t| is below 10 (the fit needs well-separated
// kinks); std::runtime_error when the search stagnates at the interval
// boundary instead of finding an interior minimum.
struct AsymptoticFit {
  double shift = 0.0;
  double distance = 0.0;
};
AsymptoticFit asymptotic_fit(const FieldState& s, double v);

}  // namespace kc

#endif
