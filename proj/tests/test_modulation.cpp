// Tests for the collision trajectory, the exponential-factor bracket, and
// the secular ODE solver.
//
// Oracles, written before the implementations they check:
//   * the trajectory derivative ladder is checked against 5-point finite
//     differences of the level below, and against its defining ODE;
//   * the solver is checked by manufacturing an even decaying solution,
//     building the forcing that must produce it, and demanding the solver
//     reproduce it (the even bounded solution of the ODE is unique: one
//     homogeneous solution is odd, the other unbounded);
//   * the closed-form forcing is checked against an independent route: the
//     pointwise residual of the dressed two-kink ansatz projected on the
//     co-moving kink derivative by quadrature — the two must agree to the
//     sixth power of the speed;
//   * the interaction-ledger constants are checked against exact values
//     discovered by quadrature (8 sqrt2, ln 2 - 1/2, 15 - 24 ln 2) and one
//     pinned regression literal.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "kinkcollide/modulation.hpp"
#include "kinkcollide/num.hpp"
#include "kinkcollide/potential.hpp"
#include "kinkcollide/profiles.hpp"
#include "kinkcollide/separation.hpp"

using namespace kc;

namespace {

double ip_line(const std::function<double(double)>& f) {
  return integrate(f, -45.0, 45.0, 1e-13);
}

// 5-point first derivative of a callable, 4th order.
double fd1_of(const std::function<double(double)>& f, double t, double h) {
  return (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) /
         (12.0 * h);
}

// 5-point second derivative of uniform samples at interior index i.
double fd2_at(const std::vector<double>& y, std::size_t i, double dt) {
  return (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] -
          y[i + 2]) /
         (12.0 * dt * dt);
}

// Interior 5-point first derivative of samples (zeros at the border band).
std::vector<double> fd1_samples(const std::vector<double>& y, double dt) {
  std::vector<double> o(y.size(), 0.0);
  for (std::size_t i = 2; i + 2 < y.size(); ++i)
    o[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) /
           (12.0 * dt);
  return o;
}

double sup_abs(const std::vector<double>& y) {
  double s = 0.0;
  for (double x : y) s = std::max(s, std::abs(x));
  return s;
}

// Shared order-2 solutions so the envelope cases do not re-solve.
const ModulationSolution& k2_solution(double v) {
  static std::map<double, ModulationSolution> cache;
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, solve_modulation_k2(v)).first;
  return it->second;
}

}  // namespace

TEST_CASE("trajectory closed forms solve the defining equation") {
  for (double v : {0.3, 0.1, 0.04}) {
    for (double t : {0.0, 0.3 / v, 1.0 / v, 3.0 / v, 8.0 / (SQRT2 * v)}) {
      const double d = d_eval(v, t, 0);
      const double dd2 = d_eval(v, t, 2);
      CHECK(std::abs(dd2 - 16.0 * SQRT2 * std::exp(-SQRT2 * d)) <= 1e-12);
      // derivative ladder: each level against finite differences of the one
      // below it
      const double h = 1e-3 / v;
      for (int l = 1; l <= 4; ++l) {
        const double fd = fd1_of(
            [&](double s) { return d_eval(v, s, l - 1); }, t, h);
        const double scale =
            2.0 * SQRT2 * std::pow(v, l);  // closed-form amplitude at level l
        CHECK(std::abs(d_eval(v, t, l) - fd) <= 1e-8 * scale);
      }
    }
    // printed-formula anchors
    CHECK(d_eval(v, 0.0, 0) ==
          doctest::Approx(std::log(8.0 / (v * v)) / SQRT2).epsilon(1e-14));
    CHECK(d_eval(v, 0.7 / v, 1) ==
          doctest::Approx(2.0 * v * std::tanh(SQRT2 * 0.7)).epsilon(1e-14));
    CHECK(d_eval(v, 0.0, 2) ==
          doctest::Approx(2.0 * SQRT2 * v * v).epsilon(1e-14));
    // sup of the velocity is 2v: never above, approached by u = 12
    double vsup = 0.0;
    for (double t : modulation_time_grid(v, 257))
      vsup = std::max(vsup, std::abs(d_eval(v, t, 1)));
    CHECK(vsup <= 2.0 * v);
    CHECK(vsup >= 2.0 * v * (1.0 - 1e-9));
  }

  // far-field asymptote: d/2 - v|t| -> ln(2/v^2)/(2 sqrt2) like e^{-2 sqrt2 v|t|}
  for (double v : {0.1, 0.04}) {
    const double plateau = std::log(2.0 / (v * v)) / (2.0 * SQRT2);
    double prev = 0.0;
    for (double uv : {2.0, 3.0, 5.0}) {
      const double t = uv / v;
      const double gap =
          std::abs(0.5 * d_eval(v, t, 0) - v * t - plateau);
      CHECK(gap <= std::exp(-2.0 * SQRT2 * uv) / SQRT2);
      if (uv > 2.0) {
        const double expect = std::exp(-2.0 * SQRT2 * 1.0 * (uv == 3.0 ? 1 : 2));
        CHECK(gap / prev >= 0.6 * expect);
        CHECK(gap / prev <= 1.6 * expect);
      }
      prev = gap;
    }
  }

  CHECK_THROWS_AS(d_eval(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(d_eval(1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(d_eval(-0.5, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(d_eval(0.1, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(d_eval(0.1, 1.0, -1), std::invalid_argument);
}

TEST_CASE("trajectory params wrap the evaluators") {
  const TrajectoryParams tp(0.07);
  CHECK(tp.d(3.3, 2) == d_eval(0.07, 3.3, 2));
  const double g = tp.gamma_tilde(5.0), dd = tp.d(5.0, 1);
  CHECK(g * g + 0.25 * dd * dd == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(TrajectoryParams(1.2), std::invalid_argument);
}

TEST_CASE("modulation time grid is exactly symmetric") {
  const double v = 0.05;
  const std::vector<double> t = modulation_time_grid(v, 4097);
  REQUIRE(t.size() == 4097);
  CHECK(t[2048] == 0.0);
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{1024}})
    CHECK(t[i] + t[4096 - i] == 0.0);
  CHECK(t.back() ==
        doctest::Approx(12.0 / (SQRT2 * v)).epsilon(1e-13));
  const double dt = t[1] - t[0];
  CHECK(t[100] - t[99] == doctest::Approx(dt).epsilon(1e-11));
  CHECK_THROWS_AS(modulation_time_grid(v, 4096), std::invalid_argument);
  CHECK_THROWS_AS(modulation_time_grid(v, 7), std::invalid_argument);
  CHECK_THROWS_AS(modulation_time_grid(1.5, 4097), std::invalid_argument);
}

TEST_CASE("exponential factor: exact zero and direct-formula agreement") {
  for (double v : {0.3, 0.05})
    for (double t : {0.0, 1.0 / v, 40.0 / v})
      CHECK(exp_factor(v, t, 1, 0, 0) == 0.0);  // both exponentials coincide
  // general indices against the naive two-term evaluation
  for (int m1 : {1, 2})
    for (int m2 : {0, 1, 2})
      for (int m3 : {-1, 0, 2}) {
        for (double t : {0.0, 7.0, 31.0}) {
          const double v = 0.1;
          const double d = d_eval(v, t, 0), dd = d_eval(v, t, 1);
          const double g = std::sqrt(1.0 - 0.25 * dd * dd);
          const double a =
              std::pow(g, m3) *
              std::exp(-m1 * SQRT2 * d / std::pow(g, m2));
          const double b = std::exp(-m1 * SQRT2 * d);
          CHECK(std::abs(exp_factor(v, t, m1, m2, m3) - (a - b)) <=
                1e-12 * (std::abs(a) + std::abs(b)));
        }
      }
}

TEST_CASE("exponential factor envelope: plain exponent with modulation shift") {
  // p = exp(-sqrt2 (d+r)) - exp(-sqrt2 d) ~ -sqrt2 r e^{-sqrt2 d}: the sup
  // over time must scale like v^4 times a slowly varying log factor.
  std::vector<double> lv, lm;
  for (double v : {0.1, 0.05, 0.025}) {
    const ModulationSolution& sol = k2_solution(v);
    double sup = 0.0;
    for (double t : sol.t)
      sup = std::max(sup, std::abs(exp_factor(v, t, 1, 0, 0, &sol)));
    lv.push_back(std::log(v));
    lm.push_back(std::log(sup));
  }
  const double slope = fit_slope(lv, lm);
  CHECK(slope >= 3.6);
  CHECK(slope <= 4.6);
}

TEST_CASE("exponential factor envelope: contracted exponent") {
  // p = exp(-sqrt2 d/gamma) - exp(-sqrt2 d) picks up the (v|t| + ln(1/v))
  // enhancement; after dividing the envelope out, halving v divides the
  // constant by ~2^4.
  std::vector<double> env;
  for (double v : {0.1, 0.05, 0.025}) {
    double e = 0.0;
    for (double t : modulation_time_grid(v, 513)) {
      const double w = (v * std::abs(t) + std::log(1.0 / v)) *
                       std::exp(-2.0 * SQRT2 * v * std::abs(t));
      e = std::max(e, std::abs(exp_factor(v, t, 1, 1, 0)) / w);
    }
    env.push_back(e);
    CHECK(e / (v * v * v * v) >= 0.3);
    CHECK(e / (v * v * v * v) <= 1.3);
  }
  CHECK(env[1] / env[0] >= 1.0 / 32.0);
  CHECK(env[1] / env[0] <= 1.0 / 8.0);
  CHECK(env[2] / env[1] >= 1.0 / 32.0);
  CHECK(env[2] / env[1] <= 1.0 / 8.0);
}

TEST_CASE("secular solver: zero forcing, anchors, and validation") {
  const double v = 0.06;
  const std::vector<double> zero(1025, 0.0);
  const ModulationSolution sol = solve_secular_ode(zero, v);
  CHECK(sup_abs(sol.r) == 0.0);
  CHECK(sup_abs(sol.rdot) == 0.0);
  CHECK(sup_abs(sol.rddot) == 0.0);
  CHECK(sol.limit_r == 0.0);
  CHECK(sol.asymmetry == 0.0);
  CHECK(sol.r_at(3.0) == 0.0);

  // the center anchor theta1(0) = 0 makes the velocity vanish exactly there
  std::vector<double> f(1025);
  const std::vector<double> t = modulation_time_grid(v, 1025);
  for (std::size_t i = 0; i < t.size(); ++i)
    f[i] = std::exp(-v * v * t[i] * t[i]);
  const ModulationSolution odd = solve_secular_ode(f, v);
  CHECK(odd.rdot[512] == 0.0);

  // explicit normalizer equal to the default changes nothing
  const ModulationSolution a = solve_secular_ode(f, v, kink_norm2());
  CHECK(a.r == odd.r);

  CHECK_THROWS_AS(solve_secular_ode(std::vector<double>(1024, 0.0), v),
                  std::invalid_argument);
  std::vector<double> bad(1025, 0.0);
  bad[7] = std::nan("");
  CHECK_THROWS_AS(solve_secular_ode(bad, v), std::runtime_error);
  CHECK_THROWS_AS(solve_secular_ode(zero, 1.5), std::invalid_argument);
}

TEST_CASE("secular solver reproduces a manufactured even solution") {
  // r*(t) = v^2 exp(-(vt)^2/2) is even, bounded and decaying; feeding the
  // solver F = ||Hdot||^2 (rddot* + 32 e^{-sqrt2 d} r*) must return r*
  // itself, since the even bounded solution is unique (tanh is odd and the
  // second homogeneous solution grows linearly).
  for (double v : {0.1, 0.025}) {
    const std::vector<double> t = modulation_time_grid(v);
    std::vector<double> F(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double rs = v * v * std::exp(-0.5 * v * v * t[i] * t[i]);
      const double rdd = (v * v * t[i] * t[i] - 1.0) * v * v * rs;
      F[i] = kink_norm2() *
             (rdd + 32.0 * std::exp(-SQRT2 * d_eval(v, t[i], 0)) * rs);
    }
    const ModulationSolution sol = solve_secular_ode(F, v);

    double err = 0.0, sup = 0.0, even = 0.0, plug = 0.0, rddsup = 0.0;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double rs = v * v * std::exp(-0.5 * v * v * t[i] * t[i]);
      err = std::max(err, std::abs(sol.r[i] - rs));
      sup = std::max(sup, std::abs(rs));
      even = std::max(even, std::abs(sol.r[i] - sol.r[n - 1 - i]));
    }
    for (std::size_t i = 2; i + 2 < n; ++i) {
      plug = std::max(plug,
                      std::abs(fd2_at(sol.r, i, sol.dt()) - sol.rddot[i]));
      rddsup = std::max(rddsup, std::abs(sol.rddot[i]));
    }
    CHECK(err <= 1e-9 * sup);
    CHECK(even <= 1e-10);
    CHECK(plug <= 1e-8 * rddsup);
    CHECK(sol.asymmetry <= 1e-13);
  }
}

TEST_CASE("interaction-ledger constants of the closed-form forcing") {
  namespace s = kc::series;
  const s::InteractionLedger led =
      s::decompose_interaction(s::g_interaction_terms(), 2);
  const s::PolyExp* ea = led.find(2, s::Frame::left, 1, 0);
  const s::PolyExp* eb = led.find(2, s::Frame::right, 1, 0);
  const s::PolyExp* ec = led.find(2, s::Frame::left, 0, 0);
  const s::PolyExp* ed = led.find(2, s::Frame::right, 0, 0);
  REQUIRE(ea);
  REQUIRE(eb);
  REQUIRE(ec);
  REQUIRE(ed);
  CHECK(led.remainder_weight >= 3);

  const s::PolyExp fa = *ea, fb = s::reflect(*eb), fc = *ec,
                   fd = s::reflect(*ed);
  const auto hd = [](double y) { return kink_eval(y, 1); };

  // exact values discovered by quadrature and locked in:
  //   <Hdot, B> = -8 sqrt2,   <V, Hdot> = ln 2 - 1/2,
  //   <y(A+B) + C, Hdot> + (1/2) <U'''(H) G^2, Hdot> = 15 - 24 ln 2.
  const double hb =
      ip_line([&](double y) { return hd(y) * s::eval_exact(fb, y); });
  CHECK(hb == doctest::Approx(-8.0 * SQRT2).epsilon(1e-11));

  const double vhd = ip_line([&](double y) {
    return special_eval(SpecialKind::V, y) * hd(y);
  });
  CHECK(vhd == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));

  const double yab_c = ip_line([&](double y) {
    return hd(y) * (y * (s::eval_exact(fa, y) + s::eval_exact(fb, y)) +
                    s::eval_exact(fc, y));
  });
  const double u3g2 = ip_line([&](double y) {
    const double g = special_eval(SpecialKind::G, y);
    return hd(y) * d3U(kink_eval(y)) * g * g;
  });
  CHECK(yab_c + 0.5 * u3g2 ==
        doctest::Approx(15.0 - 24.0 * std::log(2.0)).epsilon(1e-10));

  // the full constant term, pinned as a regression value
  const double hdD =
      ip_line([&](double y) { return hd(y) * s::eval_exact(fd, y); });
  const double c2 = -yab_c + hdD - 0.5 * u3g2 - 15.0 - 24.0 * vhd;
  CHECK(c2 == doctest::Approx(-20.9096451110409).epsilon(1e-9));
  // ...which the structural identity above collapses to <Hdot, D> - 18
  CHECK(c2 == doctest::Approx(hdD - 18.0).epsilon(1e-10));
}

TEST_CASE("frame-curvature projection matches direct quadrature") {
  // The library assembles <Hdot, R1> from four fixed moments after exact
  // cancellations; rebuild the uncancelled integrand and integrate it.
  const double v = 0.08;
  for (double t : {0.2 / v, 0.9 / v}) {
    const double d = d_eval(v, t, 0), d1 = d_eval(v, t, 1),
                 d2 = d_eval(v, t, 2), d3 = d_eval(v, t, 3);
    const double Q = 1.0 / std::sqrt(1.0 - 0.25 * d1 * d1);
    const double Qd = 0.25 * Q * Q * Q * d1 * d2;
    const double Qdd = 0.25 * (3.0 * Q * Q * Qd * d1 * d2 +
                               Q * Q * Q * (d2 * d2 + d1 * d3));
    const double al = -0.5 * d1 * Q, be = Qd / Q;
    const double al2 = -0.5 * d2 * Q - d1 * Qd, be2 = Qdd / Q;
    const double E = std::exp(-SQRT2 * d);
    const double naive = ip_line([&](double y) {
      const double a = al + be * y, b = al2 + be2 * y;
      return kink_eval(y, 1) * (kink_eval(y, 2) * (a * a + 1.0 - Q * Q) +
                                kink_eval(y, 1) * (b + 8.0 * SQRT2 * E * Q));
    });
    const double y_hdd =
        ip_line([](double y) { return y * kink_eval(y, 2) * kink_eval(y, 1); });
    const double y2_hdd = ip_line(
        [](double y) { return y * y * kink_eval(y, 2) * kink_eval(y, 1); });
    const double n2 =
        ip_line([](double y) { return kink_eval(y, 1) * kink_eval(y, 1); });
    const double y_hd =
        ip_line([](double y) { return y * kink_eval(y, 1) * kink_eval(y, 1); });
    const double moments =
        -d1 * Qd * y_hdd + be * be * y2_hdd - d1 * Qd * n2 + be2 * y_hd;
    CHECK(std::abs(naive - moments) <= 1e-10 * std::abs(moments));
  }
}

TEST_CASE("closed-form forcing: parity, center envelope, far tail") {
  // even in t to floating-point accuracy
  for (double v : {0.1, 0.03})
    for (double t : {0.4 / v, 2.0 / v, 7.0 / v}) {
      const double fp = explicit_forcing(v, t), fm = explicit_forcing(v, -t);
      CHECK(std::abs(fp - fm) <= 1e-13 * std::abs(fp));
    }

  // center magnitude: |F(0)| <= C v^4 ln(1/v), C fitted at the largest speed
  const double c_fit = std::abs(explicit_forcing(0.1, 0.0)) /
                       (1e-4 * std::log(10.0));
  for (double v : {0.05, 0.025}) {
    const double env = v * v * v * v * std::log(1.0 / v);
    CHECK(std::abs(explicit_forcing(v, 0.0)) <= 1.15 * c_fit * env);
    CHECK(std::abs(explicit_forcing(v, 0.0)) >= 0.5 * c_fit * env);
  }

  // far half of the grid: F stays inside the decaying envelope
  for (double v : {0.1, 0.025}) {
    const double T = 12.0 / (SQRT2 * v), L = std::log(1.0 / v);
    for (double fr : {0.5, 0.6, 0.75, 0.9, 1.0}) {
      const double t = fr * T;
      const double env =
          v * v * v * v * (v * t + L) * std::exp(-2.0 * SQRT2 * v * t);
      CHECK(std::abs(explicit_forcing(v, t)) <= 3.5 * env);
    }
  }
  // and the envelope is tight: at the half-grid point the constant sits
  // near 2.5, well away from both bounds
  {
    const double v = 0.05, t = 6.0 / (SQRT2 * v);
    const double env = v * v * v * v * (v * t + std::log(1.0 / v)) *
                       std::exp(-2.0 * SQRT2 * v * t);
    CHECK(std::abs(explicit_forcing(v, t)) >= 1.0 * env);
    CHECK(std::abs(explicit_forcing(v, t)) <= 4.0 * env);
  }
}

TEST_CASE("order-2 modulation obeys the fitted envelopes") {
  // sup |r| <= C v^2 ln(1/v) with C fitted at v = 0.1, and the analogous
  // fitted bounds for the first three finite-difference derivatives.
  std::map<double, double> csup;
  std::map<double, std::array<double, 3>> cder;
  for (double v : {0.1, 0.05, 0.025}) {
    const ModulationSolution& sol = k2_solution(v);
    const std::size_t n = sol.r.size();
    const double L = std::log(1.0 / v);
    csup[v] = sup_abs(sol.r) / (v * v * L);

    const std::vector<double> d1 = fd1_samples(sol.r, sol.dt());
    const std::vector<double> d2 = fd1_samples(d1, sol.dt());
    const std::vector<double> d3 = fd1_samples(d2, sol.dt());
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, rdotgap = 0.0;
    for (std::size_t i = 6; i + 6 < n; ++i) {
      s1 = std::max(s1, std::abs(d1[i]));
      s2 = std::max(s2, std::abs(d2[i]));
      s3 = std::max(s3, std::abs(d3[i]));
      rdotgap = std::max(rdotgap, std::abs(d1[i] - sol.rdot[i]));
    }
    cder[v] = {s1 / (v * v * v * L), s2 / (v * v * v * v * L),
               s3 / (v * v * v * v * v * L)};
    CHECK(rdotgap <= 1e-7 * sup_abs(sol.rdot));

    // evenness, ODE plug-back, and the plateau at the grid end
    double even = 0.0, plug = 0.0, rddsup = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      even = std::max(even, std::abs(sol.r[i] - sol.r[n - 1 - i]));
    for (std::size_t i = 2; i + 2 < n; ++i) {
      plug = std::max(plug,
                      std::abs(fd2_at(sol.r, i, sol.dt()) - sol.rddot[i]));
      rddsup = std::max(rddsup, std::abs(sol.rddot[i]));
    }
    CHECK(even <= 1e-10);
    CHECK(plug <= 1e-8 * rddsup);
    CHECK(sol.asymmetry <= 1e-13);
    CHECK(std::abs(sol.r_at(0.9 * sol.t_max()) - sol.limit_r) <=
          1e-8 * sup_abs(sol.r));
    CHECK(sol.r_at(5.0 * sol.t_max()) == sol.limit_r);
  }
  for (double v : {0.05, 0.025}) {
    CHECK(csup[v] <= 1.2 * csup[0.1]);
    CHECK(csup[v] >= 0.3 * csup[0.1]);
    for (int l = 0; l < 3; ++l) CHECK(cder[v][l] <= 1.2 * cder[0.1][l]);
  }
}

TEST_CASE("projection route agrees with the closed form to sixth order") {
  // Independent evaluation of the same forcing: project the pointwise
  // residual of the dressed two-kink ansatz on the co-moving kink
  // derivative. The gap against the closed-form terms must scale like v^6.
  std::vector<double> lv, lg;
  const std::vector<double> rel_cap = {0.10, 0.045, 0.014};
  std::size_t idx = 0;
  for (double v : {0.1, 0.05, 0.025}) {
    const double T = 12.0 / (SQRT2 * v);
    const std::vector<double> tg = {0.0, T / 6.0};
    const std::vector<double> fp = forcing_projection_base(v, tg);
    const double gap0 = std::abs(fp[0] - explicit_forcing(v, 0.0));
    const double gap6 = std::abs(fp[1] - explicit_forcing(v, T / 6.0));
    CHECK(gap0 <= rel_cap[idx++] * std::abs(fp[0]));
    lv.push_back(std::log(v));
    lg.push_back(std::log(gap6));
  }
  const double slope = fit_slope(lv, lg);
  CHECK(slope >= 5.4);
  CHECK(slope <= 6.8);
}

TEST_CASE("projection route: parity and tail envelope") {
  const double v = 0.05;
  const double T = 12.0 / (SQRT2 * v), L = std::log(1.0 / v);
  std::vector<double> tg;
  for (double fr : {-0.5, -0.25, -0.1, 0.1, 0.25, 0.5}) tg.push_back(fr * T);
  const std::vector<double> F = forcing_projection_base(v, tg);
  double asym = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    asym = std::max(asym, std::abs(F[i] - F[5 - i]));
    fmax = std::max(fmax, std::abs(F[i]));
  }
  CHECK(asym <= 1e-6 * fmax);

  for (double fr : {0.25, 0.5}) {
    const double t = fr * T;
    const double one = forcing_projection_base(v, {t})[0];
    const double env =
        v * v * v * v * (v * t + L) * std::exp(-2.0 * SQRT2 * v * t);
    CHECK(std::abs(one) >= 1.0 * env);
    CHECK(std::abs(one) <= 4.0 * env);
  }
}
