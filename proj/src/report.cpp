#include "kinkcollide/report.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "kinkcollide/ansatz.hpp"
#include "kinkcollide/grid.hpp"
#include "kinkcollide/num.hpp"
#include "kinkcollide/potential.hpp"
#include "kinkcollide/profiles.hpp"

namespace kc {

namespace {

// Dressing profile with the fault-injection offset folded into its
// orthogonalization constant: adding eps to k1 adds (eps/sqrt2) Hdot.
double dressing(double x, int deriv, double perturb_k1) {
  return special_eval(SpecialKind::G, x, deriv) +
         perturb_k1 / SQRT2 * kink_eval(x, deriv + 1);
}

// sup of |f| over [a, b] sampled at n uniform points.
double sup_on(const std::function<double(double)>& f, double a, double b,
              int n = 4001) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / (n - 1);
    m = std::max(m, std::abs(f(x)));
  }
  return m;
}

}  // namespace

std::vector<CheckRow> identity_checks(double perturb_k1) {
  std::vector<CheckRow> rows;
  auto push = [&rows](std::string name, double value, double tol) {
    rows.push_back({std::move(name), value, tol, std::abs(value) <= tol});
  };

  // Quadrature against the closed-form kink norm.
  push("kink-normalization", kink_norm2_quadrature() - kink_norm2(), 1e-8);

  // First-order (Bogomolny) reduction of the static equation.
  push("bogomolny-reduction",
       sup_on([](double x) {
         return kink_eval(x, 1) - std::sqrt(2.0 * U(kink_eval(x)));
       },
       -20.0, 20.0),
       1e-10);

  // Kink-kink interaction strength <24M - 30N, Hdot> = 4.
  push("interaction-constant", interaction_constant() - 4.0, 1e-8);

  // Defining ODE of the dressing profile:
  //   -G'' + U''(H) G = -24M + 30N + 8 sqrt2 Hdot.
  // A kernel shift (perturbed k1) drops out of this residual.
  push("dressing-ode",
       sup_on([perturb_k1](double x) {
         double lhs = -dressing(x, 2, perturb_k1) +
                      d2U(kink_eval(x)) * dressing(x, 0, perturb_k1);
         double rhs = -24.0 * special_eval(SpecialKind::M, x) +
                      30.0 * special_eval(SpecialKind::N, x) +
                      8.0 * SQRT2 * kink_eval(x, 1);
         return lhs - rhs;
       },
       -20.0, 20.0),
       1e-8);

  // <G, Hdot> = 0 — the only row a k1 perturbation can move.
  push("dressing-orthogonality",
       integrate([perturb_k1](double x) {
         return dressing(x, 0, perturb_k1) * kink_eval(x, 1);
       },
       -std::numeric_limits<double>::infinity(),
       std::numeric_limits<double>::infinity()),
       1e-8);

  // The kink derivative spans the kernel of the linearization.
  push("kernel-annihilation",
       sup_on([](double x) {
         return -kink_eval(x, 3) + d2U(kink_eval(x)) * kink_eval(x, 1);
       },
       -20.0, 20.0),
       1e-8);

  // The response preimage xi satisfies L(xi Hdot) = Hdot. The product
  // grows like e^{-sqrt2 x} to the left, so the residual is judged
  // relative to the local field size.
  push("response-preimage",
       sup_on([](double x) {
         double xi0 = special_eval(SpecialKind::xi, x, 0);
         double xi1 = special_eval(SpecialKind::xi, x, 1);
         double xi2 = special_eval(SpecialKind::xi, x, 2);
         double H1 = kink_eval(x, 1), H2 = kink_eval(x, 2),
                H3 = kink_eval(x, 3);
         double lhs = -(xi2 * H1 + 2.0 * xi1 * H2 + xi0 * H3) +
                      d2U(kink_eval(x)) * xi0 * H1;
         return (lhs - H1) / (1.0 + std::abs(xi0 * H1));
       },
       -20.0, 20.0),
       1e-8);

  return rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::vector<ScalingReport> scaling_study(const std::vector<double>& speeds,
                                         int order,
                                         std::ostream* diagnostics) {
  if (speeds.size() < 3)
    throw std::invalid_argument("scaling_study: need at least three speeds");
  for (std::size_t i = 0; i + 1 < speeds.size(); ++i)
    if (!(speeds[i + 1] < speeds[i]))
      throw std::invalid_argument(
          "scaling_study: speeds must be strictly decreasing");
  for (double v : speeds)
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("scaling_study: speeds must lie in (0,1)");
  if (order != 2 && order != 3)
    throw std::invalid_argument(
        "scaling_study: slope windows are declared for orders 2 and 3 only");

  struct Quantity {
    const char* name;
    double lo, hi;
    bool projection;
    bool at_zero;
  };
  std::vector<Quantity> quantities;
  if (order == 2) {
    quantities = {{"residual-l2(t=0)", 3.5, 4.8, false, true},
                  {"residual-l2(t=1/2v)", 3.5, 4.8, false, false},
                  {"kink-projection(t=0)", 5.4, 6.8, true, true},
                  {"kink-projection(t=1/2v)", 5.4, 6.8, true, false}};
  } else {
    // No projection window is declared at order 3; only the residual norm
    // is judged.
    quantities = {{"residual-l2(t=0)", 5.2, 7.0, false, true},
                  {"residual-l2(t=1/2v)", 5.2, 7.0, false, false}};
  }

  std::vector<ScalingReport> reports(quantities.size());
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    reports[q].quantity = quantities[q].name;
    reports[q].window_lo = quantities[q].lo;
    reports[q].window_hi = quantities[q].hi;
  }

  for (double v : speeds) {
    try {
      AnsatzSpec spec = make_order2_spec(v);
      for (int k = 2; k < order; ++k) spec = raise_order(spec);
      for (std::size_t q = 0; q < quantities.size(); ++q) {
        double t = quantities[q].at_zero ? 0.0 : 1.0 / (2.0 * v);
        GridField lam = lambda_residual(spec, t, 1e-3);
        double value = quantities[q].projection
                           ? project_on_kink(lam, frame_at(spec, t))
                           : sobolev_norm(lam, 0.0);
        reports[q].points.push_back({v, value});
      }
    } catch (const std::exception& e) {
      if (diagnostics)
        *diagnostics << "scaling-study: build at v = " << format_double(v)
                     << " failed: " << e.what() << '\n';
    }
  }

  for (auto& rep : reports) {
    std::vector<double> lx, ly;
    for (const auto& p : rep.points) {
      if (p.value == 0.0) continue;
      lx.push_back(std::log(p.v));
      ly.push_back(std::log(std::abs(p.value)));
    }
    rep.slope = lx.size() >= 2 ? fit_slope(lx, ly)
                               : std::numeric_limits<double>::quiet_NaN();
    rep.pass = lx.size() >= 3 && rep.slope >= rep.window_lo &&
               rep.slope <= rep.window_hi;
  }
  return reports;
}

// ---- CSV --------------------------------------------------------------------

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(fields[i]);
  }
  os << "\r\n";
}

void write_check_table(std::ostream& os, const std::vector<CheckRow>& rows) {
  write_csv_row(os, {"identity", "residual", "tolerance", "pass"});
  for (const auto& r : rows)
    write_csv_row(os, {r.name, format_double(r.value),
                       format_double(r.tolerance), r.pass ? "pass" : "fail"});
}

void write_scaling_table(std::ostream& os,
                         const std::vector<ScalingReport>& reports) {
  write_csv_row(os, {"quantity", "v", "value", "slope", "window_lo",
                     "window_hi", "pass"});
  for (const auto& rep : reports)
    for (const auto& p : rep.points)
      write_csv_row(os,
                    {rep.quantity, format_double(p.v), format_double(p.value),
                     format_double(rep.slope), format_double(rep.window_lo),
                     format_double(rep.window_hi), rep.pass ? "pass" : "fail"});
}

}  // namespace kc
