#ifndef KINKCOLLIDE_SEPARATION_HPP
#define KINKCOLLIDE_SEPARATION_HPP

// Two-frame separation of products f(x - zeta) g(x), where f decays to the
// left frame's tail series (side plus) and g to the right frame's (side
// minus). Peeling the smaller valuation repeatedly rewrites the product as
//
//   sum_n  e^{-sqrt2 d_n zeta} h_n(frame coordinate)  +  remainder,
//
// with strictly increasing weights d_n and a remainder certified to decay
// like e^{-sqrt2 d_M zeta} uniformly in x. Opposite exponent parities of the
// two factors guarantee the valuations never tie, so every step emits into
// exactly one frame.
//
// decompose_interaction runs the same peeling over a list of weighted
// two-frame product terms (each optionally carrying polynomial prefactors in
// the frame coordinates) and aggregates the emissions into a ledger keyed by
// (total weight, frame, prefactor powers).

#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "kinkcollide/series.hpp"

namespace kc::series {

enum class Frame { left, right };  // left: argument x - zeta; right: argument x

struct Emission {
  int d = 0;        // total e^{-sqrt2 d zeta} weight
  Frame frame = Frame::left;
  PolyExp h;        // series in the frame coordinate (side matches frame)
  int lx = 0;       // power of (x - zeta) riding along
  int rx = 0;       // power of x riding along
  double eval(double x, double zeta) const;
};

struct Remainder {
  PolyExp f;        // leftover left-frame factor (side plus)
  PolyExp g;        // leftover right-frame factor (side minus)
  int d_M = 0;      // certified decay exponent of the remainder
};

struct SeparationResult {
  std::vector<Emission> terms;
  Remainder remainder;
  std::function<double(double, double)> input;  // (x, zeta) -> f(x-zeta) g(x)
  double emitted_eval(double x, double zeta) const;
  double remainder_eval(double x, double zeta) const;  // input - emitted
};

// f: pure tail series (no polynomial prefactors), side plus, valuation >= 1;
// g: likewise on side minus. Parities must differ. Emits all terms with
// weight <= M.
SeparationResult separate(const PolyExp& f, const PolyExp& g, int M);

// One weighted product term  coeff * Lf(x-zeta) * Rg(x) * e^{-sqrt2 w zeta}.
// Lf and Rg may carry polynomial components (x-power comps), which are
// distributed over the peeling and reappear as lx/rx powers on the emissions.
struct FrameTerm {
  double coeff = 1.0;
  PolyExp left;   // side plus, evaluated at x - zeta
  PolyExp right;  // side minus, evaluated at x
  int weight = 0;
};

struct LedgerKey {
  int d;
  Frame frame;
  int lx, rx;
  auto operator<=>(const LedgerKey&) const = default;
};

struct InteractionLedger {
  std::vector<std::pair<LedgerKey, PolyExp>> entries;  // sorted by key
  int remainder_weight = 0;   // certified decay of everything not emitted
  std::function<double(double, double)> input;
  double emitted_eval(double x, double zeta) const;
  double remainder_eval(double x, double zeta) const;
  const PolyExp* find(int d, Frame frame, int lx, int rx) const;
};

InteractionLedger decompose_interaction(const std::vector<FrameTerm>& terms,
                                        int M);

// Standard interaction inputs.
//
// Cross part of the force between the two kink frames:
//   U'(a+b) - U'(a) - U'(b),  a = H(x-zeta), b = Hleft(x).
std::vector<FrameTerm> udot_cross_terms(int truncation = 40);
// Linearized-potential difference acting on the left-frame G piece:
//   [U''(a+b) - U''(a)] e^{-sqrt2 zeta} G(x-zeta).
std::vector<FrameTerm> g_interaction_terms(int truncation = 40);
// Mixed quadratic-in-G part of (1/2) U'''(a+b) (G(x-zeta) - G(-x))^2
// e^{-2 sqrt2 zeta} (the pure-left and pure-right squares excluded).
std::vector<FrameTerm> g_pair_quadratic_terms(int truncation = 40);

// Measured remainder decay vs the certified rate. For each zeta the sup of
// |input - emitted| over the sample window is recorded; consecutive ratios
// must match e^{-sqrt2 d_M (zeta_{i+1} - zeta_i)} within 'factor'.
struct BoundCheck {
  std::vector<double> zeta, sup;
  int d_M = 0;
  bool pass = false;
  std::string message;
};
BoundCheck interaction_bound_check(const SeparationResult& r,
                                   const std::vector<double>& zetas,
                                   double factor = 2.0);

}  // namespace kc::series

#endif
