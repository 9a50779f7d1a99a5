#ifndef KINKCOLLIDE_PROFILES_HPP
#define KINKCOLLIDE_PROFILES_HPP

// Static kink profile H of the sextic model and the auxiliary profiles that
// feed the interaction expansions:
//
//   H(x)  = e^{sqrt2 x} / sqrt(1 + e^{2 sqrt2 x})      (0 -> 1 kink)
//   M(x)  = H^2 e^{-sqrt2 x},  N(x) = H^4 e^{-sqrt2 x}
//   V(x)  = e^{-sqrt2 x} (1 - 1/sqrt(1+e^{2 sqrt2 x}))
//   xi(x) = x/(4 sqrt2) - e^{-2 sqrt2 x}/16            (solves L(xi H') = H')
//   c(x)  = growing kernel companion: L(c H') = 0
//   G(x)  = e^{-sqrt2 x}(1 - (1+e^{2 sqrt2 x})^{-3/2}) + (2x + k1/sqrt2) H'(x)
//
// G is normalized by the constant k1 so that <G, H'> = 0; k1 is computed once
// by quadrature and cached. All evaluators are branch-stable at both ends and
// clamp |x| beyond the double-precision underflow range.

#include <cstdint>

namespace kc {

enum class KinkSide : std::uint8_t {
  right,  // connects 0 at -inf to 1 at +inf
  left,   // mirror kink -H(-x): connects -1 to 0
};

// k-th derivative of the kink profile, k = 0..4, exact closed forms.
double kink_eval(double x, int deriv = 0, KinkSide side = KinkSide::right);

// ||H'||^2 exactly (1 / (2 sqrt2)) and by quadrature (consistency check).
double kink_norm2();
double kink_norm2_quadrature();

enum class SpecialKind : std::uint8_t { G, M, N, V, xi, ckernel };

// Derivatives 0..2 for G,M,N,V,xi; 0 only for ckernel.
double special_eval(SpecialKind kind, double x, int deriv = 0);

// Orthogonalization constant of G: k1 = -<G_0, H'> / ||H'||^2 where G_0 is G
// evaluated with k1 = 0. Computed by quadrature on first use, then cached.
double compute_k1();

// <24 M - 30 N, H'> — the kink-kink interaction strength (equals 4).
double interaction_constant();

}  // namespace kc

#endif
