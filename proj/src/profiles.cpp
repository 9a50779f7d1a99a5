#include "kinkcollide/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "kinkcollide/num.hpp"

namespace kc {

namespace {

// Beyond this |x| the kink is numerically at its vacuum: e^{-sqrt2*|x|}
// underflows around |x| ~ 350/sqrt2. Clamping keeps exp() in range without
// changing any representable value.
constexpr double kClampX = 247.0;

// Right-kink derivatives on the x <= 0 branch, s = e^{sqrt2 x}, q = 1 + s^2.
double kink_minus_branch(double x, int k) {
  double s = std::exp(SQRT2 * x);
  double q = 1.0 + s * s;
  double s2 = s * s;
  switch (k) {
    case 0: return s / std::sqrt(q);
    case 1: return SQRT2 * s * std::pow(q, -1.5);
    case 2: return 2.0 * s * (1.0 - 2.0 * s2) * std::pow(q, -2.5);
    case 3: return 2.0 * SQRT2 * s * (1.0 + s2 * (-10.0 + 4.0 * s2)) * std::pow(q, -3.5);
    case 4:
      return 4.0 * s * (1.0 + s2 * (-36.0 + s2 * (60.0 - 8.0 * s2))) *
             std::pow(q, -4.5);
  }
  throw std::invalid_argument("kink_eval: deriv must be 0..4");
}

// Same on the x > 0 branch, u = e^{-sqrt2 x}, w = 1 + u^2.
double kink_plus_branch(double x, int k) {
  double u = std::exp(-SQRT2 * x);
  double w = 1.0 + u * u;
  double u2 = u * u;
  switch (k) {
    case 0: return 1.0 / std::sqrt(w);
    case 1: return SQRT2 * u2 * std::pow(w, -1.5);
    case 2: return 2.0 * u2 * (u2 - 2.0) * std::pow(w, -2.5);
    case 3: return 2.0 * SQRT2 * u2 * (4.0 + u2 * (-10.0 + u2)) * std::pow(w, -3.5);
    case 4:
      return 4.0 * u2 * (-8.0 + u2 * (60.0 + u2 * (-36.0 + u2))) *
             std::pow(w, -4.5);
  }
  throw std::invalid_argument("kink_eval: deriv must be 0..4");
}

double kink_right(double x, int k) {
  if (x > kClampX) return k == 0 ? 1.0 : 0.0;
  if (x < -kClampX) return 0.0;
  return x <= 0.0 ? kink_minus_branch(x, k) : kink_plus_branch(x, k);
}

}  // namespace

double kink_eval(double x, int deriv, KinkSide side) {
  if (side == KinkSide::right) return kink_right(x, deriv);
  // Mirror kink -H(-x): d^k/dx^k -> -(-1)^k H^(k)(-x).
  double sign = (deriv % 2 == 0) ? -1.0 : 1.0;
  return sign * kink_right(-x, deriv);
}

double kink_norm2() { return 1.0 / (2.0 * SQRT2); }

double kink_norm2_quadrature() {
  return integrate([](double x) { double d = kink_eval(x, 1); return d * d; },
                   -40.0, 40.0);
}

namespace {

double eval_M(double x, int k) {
  if (std::fabs(x) > kClampX) return 0.0;
  // M = s/(1+s^2) = sech(sqrt2 x)/2 — symmetric under s <-> 1/s, so one
  // branch in t = e^{-sqrt2 |x|} serves both signs up to parity.
  double s = std::exp(SQRT2 * (x <= 0 ? x : -x));
  double q = 1.0 + s * s;
  double sgn = (x <= 0) ? 1.0 : -1.0;  // M' is odd, M and M'' even
  switch (k) {
    case 0: return s / q;
    case 1: return sgn * SQRT2 * s * (1.0 - s * s) / (q * q);
    case 2: return 2.0 * s * (1.0 + s * s * (-6.0 + s * s)) / (q * q * q);
  }
  throw std::invalid_argument("special_eval: deriv must be 0..2");
}

double eval_N(double x, int k) {
  if (std::fabs(x) > kClampX) return 0.0;
  if (x <= 0.0) {
    double s = std::exp(SQRT2 * x), s2 = s * s;
    double q = 1.0 + s2;
    switch (k) {
      case 0: return s * s2 / (q * q);
      case 1: return SQRT2 * s * s2 * (3.0 - s2) / (q * q * q);
      case 2: return 2.0 * s * s2 * (9.0 + s2 * (-14.0 + s2)) / (q * q * q * q);
    }
  } else {
    double u = std::exp(-SQRT2 * x), u2 = u * u;
    double w = 1.0 + u2;
    switch (k) {
      case 0: return u / (w * w);
      case 1: return SQRT2 * u * (3.0 * u2 - 1.0) / (w * w * w);
      case 2: return 2.0 * u * (1.0 + u2 * (-14.0 + 9.0 * u2)) / (w * w * w * w);
    }
  }
  throw std::invalid_argument("special_eval: deriv must be 0..2");
}

double eval_V(double x, int k) {
  if (x > kClampX) return 0.0;
  if (k == 1) return kink_eval(x, 1) - SQRT2 * eval_V(x, 0);
  if (k == 2) return kink_eval(x, 2) - SQRT2 * eval_V(x, 1);
  if (k != 0) throw std::invalid_argument("special_eval: deriv must be 0..2");
  if (x < -kClampX) return 0.5 * std::exp(SQRT2 * x);  // V ~ s/2 at -inf
  if (x <= 0.0) {
    double s = std::exp(SQRT2 * x);
    // (1 - (1+s^2)^{-1/2})/s without cancellation at small s.
    return -std::expm1(-0.5 * std::log1p(s * s)) / s;
  }
  double u = std::exp(-SQRT2 * x);
  return u * (1.0 - u / std::sqrt(1.0 + u * u));
}

double eval_xi(double x, int k) {
  double e = std::exp(-2.0 * SQRT2 * x);
  switch (k) {
    case 0: return x / (4.0 * SQRT2) - e / 16.0;
    case 1: return (1.0 + e) / (4.0 * SQRT2);
    case 2: return -e / 2.0;
  }
  throw std::invalid_argument("special_eval: deriv must be 0..2");
}

double eval_ckernel(double x, int k) {
  if (k != 0)
    throw std::invalid_argument("special_eval: ckernel has value only");
  double em = std::expm1(-2.0 * SQRT2 * x);
  double ep = std::expm1(2.0 * SQRT2 * x);
  double ep2 = std::expm1(4.0 * SQRT2 * x);
  return -em / (4.0 * SQRT2) + 1.5 * x + 3.0 * ep / (4.0 * SQRT2) +
         ep2 / (8.0 * SQRT2);
}

// Decaying part of G: A = e^{-sqrt2 x} (1 - (1 + e^{2 sqrt2 x})^{-3/2}).
// Decays ~ (3/2) e^{sqrt2 x} at -inf and ~ e^{-sqrt2 x} at +inf.
double eval_A(double x, int k) {
  if (std::fabs(x) > kClampX) return 0.0;
  double A;
  if (x <= 0.0) {
    double s = std::exp(SQRT2 * x);
    A = -std::expm1(-1.5 * std::log1p(s * s)) / s;
  } else {
    double u = std::exp(-SQRT2 * x);
    double w = 1.0 + u * u;
    A = u * (1.0 - u * u * u / (w * std::sqrt(w)));
  }
  if (k == 0) return A;
  // dA/dx = -sqrt2 A + 3 sqrt2 s (1+s^2)^{-5/2}
  double s = std::exp(SQRT2 * (x <= 0 ? x : -x));
  double rise;  // 3 sqrt2 s q^{-5/2} in branch-stable form
  if (x <= 0.0) {
    double q = 1.0 + s * s;
    rise = 3.0 * SQRT2 * s * std::pow(q, -2.5);
  } else {
    double u = s, w = 1.0 + u * u;
    rise = 3.0 * SQRT2 * u * u * u * u * std::pow(w, -2.5);
  }
  if (k == 1) return -SQRT2 * A + rise;
  if (k == 2) {
    double A1 = -SQRT2 * A + rise;
    double hump;  // 6 s (1 - 4 s^2) q^{-7/2}
    if (x <= 0.0) {
      double q = 1.0 + s * s;
      hump = 6.0 * s * (1.0 - 4.0 * s * s) * std::pow(q, -3.5);
    } else {
      double u = s, w = 1.0 + u * u;
      hump = 6.0 * u * u * u * u * (u * u - 4.0) * std::pow(w, -3.5);
    }
    return -SQRT2 * A1 + hump;
  }
  throw std::invalid_argument("special_eval: deriv must be 0..2");
}

double eval_G_with_k1(double x, int k, double k1) {
  if (x > kClampX || x < -kClampX) {
    // Both the decaying part and beta*H' underflow in double precision.
    return 0.0;
  }
  double beta = 2.0 * x + k1 / SQRT2;
  switch (k) {
    case 0: return eval_A(x, 0) + beta * kink_eval(x, 1);
    case 1: return eval_A(x, 1) + 2.0 * kink_eval(x, 1) + beta * kink_eval(x, 2);
    case 2: return eval_A(x, 2) + 4.0 * kink_eval(x, 2) + beta * kink_eval(x, 3);
  }
  throw std::invalid_argument("special_eval: deriv must be 0..2");
}

double k1_cached() {
  // <G, H'> = <G_0, H'> + (k1/sqrt2) ||H'||^2, so the root is
  // k1 = -sqrt2 <G_0, H'> / ||H'||^2.
  static const double k1 = [] {
    double i0 = integrate(
        [](double x) { return eval_G_with_k1(x, 0, 0.0) * kink_eval(x, 1); },
        -40.0, 40.0);
    return -SQRT2 * i0 / kink_norm2();
  }();
  return k1;
}

}  // namespace

double special_eval(SpecialKind kind, double x, int deriv) {
  switch (kind) {
    case SpecialKind::M: return eval_M(x, deriv);
    case SpecialKind::N: return eval_N(x, deriv);
    case SpecialKind::V: return eval_V(x, deriv);
    case SpecialKind::xi: return eval_xi(x, deriv);
    case SpecialKind::ckernel: return eval_ckernel(x, deriv);
    case SpecialKind::G: return eval_G_with_k1(x, deriv, k1_cached());
  }
  throw std::invalid_argument("special_eval: unknown profile");
}

double compute_k1() { return k1_cached(); }

double interaction_constant() {
  return integrate(
      [](double x) {
        return (24.0 * eval_M(x, 0) - 30.0 * eval_N(x, 0)) * kink_eval(x, 1);
      },
      -40.0, 40.0);
}

}  // namespace kc
