#ifndef KINKCOLLIDE_POTENTIAL_HPP
#define KINKCOLLIDE_POTENTIAL_HPP

// Sextic double-well field potential U(phi) = phi^2 (1 - phi^2)^2 and its
// derivatives in phi. Vacua at phi = -1, 0, 1; U''(±1) = 8, U''(0) = 2.

namespace kc {

inline double U(double p) {
  double p2 = p * p;
  return p2 * (1.0 - p2) * (1.0 - p2);
}
inline double dU(double p) {
  double p2 = p * p;
  return p * (2.0 + p2 * (-8.0 + 6.0 * p2));
}
inline double d2U(double p) {
  double p2 = p * p;
  return 2.0 + p2 * (-24.0 + 30.0 * p2);
}
inline double d3U(double p) {
  double p2 = p * p;
  return p * (-48.0 + 120.0 * p2);
}
inline double d4U(double p) { return -48.0 + 360.0 * p * p; }
inline double d5U(double p) { return 720.0 * p; }
inline double d6U(double) { return 720.0; }

}  // namespace kc

#endif
