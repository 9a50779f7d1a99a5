#include "kinkcollide/separation.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <stdexcept>

#include "kinkcollide/num.hpp"

namespace kc::series {

namespace {

int tail_val(const TailSeries& t) { return val(t); }

// Multiply a tail by e^{-sqrt2 m x} (plus side) or e^{+sqrt2 m x} (minus
// side): either way the exponents drop by m and the evaluator picks up the
// explicit exponential factor. Negligible coefficients are stripped here:
// once shifted to exponent <= 0 they would turn into spurious constant or
// growing modes of the series representation.
TailSeries lower(const TailSeries& t, int m, Side side) {
  TailSeries out;
  for (const auto& [e, c] : t.c)
    if (std::fabs(c) > kCoeffEps) out.c[e - m] = c;
  if (t.eval) {
    auto f = t.eval;
    double sgn = side == Side::plus ? -1.0 : 1.0;
    out.eval = [f, m, sgn](double x) {
      return f(x) * std::exp(sgn * SQRT2 * m * x);
    };
  }
  return out;
}

// Remove the exponent-0 constant after lowering; the evaluator subtracts it
// so the function it computes keeps matching the series.
TailSeries drop_constant(const TailSeries& t, double c0) {
  TailSeries out = t;
  out.c.erase(0);
  if (t.eval) {
    auto f = t.eval;
    out.eval = [f, c0](double x) { return f(x) - c0; };
  }
  return out;
}

PolyExp wrap(TailSeries t, Side side, int trunc) {
  PolyExp p;
  p.side = side;
  p.truncation = trunc;
  p.comp[0] = std::move(t);
  return p;
}

// Emitted profiles carry exact evaluators composed from e^{±sqrt2 m x}
// factors and constant subtractions; deep on the emission's own side those
// compositions cancel catastrophically (the function is ~e^{-sqrt2 |x|} but
// the intermediates are O(1)). The tail series is cancellation-free there,
// and beyond |arg| ~ 0.75 its depth-40 truncation error e^{-sqrt2*41*|arg|}
// drops below the evaluator's rounding floor, so that is where to switch.
double stable_eval(const PolyExp& h, double arg) {
  bool own_side = h.side == Side::plus ? arg < -0.75 : arg > 0.75;
  return own_side ? eval_series(h, arg) : eval_exact(h, arg);
}

struct PeelOutput {
  std::vector<Emission> emissions;
  TailSeries f_rest, g_rest;
  int d_acc = 0;
  int certified = 0;  // full weight of what was not emitted
};

// Core loop on pure tails. 'coeff' multiplies every emission; 'base' is the
// e^{-sqrt2 base zeta} weight the owning term already carries; lx/rx are
// polynomial prefactor powers that ride along unchanged.
PeelOutput peel(TailSeries f, TailSeries g, int trunc, double coeff, int base,
                int lx, int rx, int M) {
  PeelOutput out;
  int d_acc = 0;
  for (;;) {
    int vf = tail_val(f), vg = tail_val(g);
    if (vf == INT_MAX || vg == INT_MAX) {
      // One factor is exhausted to truncation order; nothing measurable left.
      out.certified = base + d_acc + trunc;
      break;
    }
    if (vf < 1 || vg < 1)
      throw std::invalid_argument("separate: factors must decay (valuation >= 1)");
    if (vf == vg)
      throw std::invalid_argument(
          "separate: equal valuations (exponent parities must differ)");
    int m = std::min(vf, vg);
    if (base + d_acc + m > M) {
      out.certified = base + d_acc + m;
      break;
    }
    d_acc += m;
    if (vg < vf) {
      // The right factor sheds its leading e^{-sqrt2 m x}; the left frame
      // absorbs e^{-sqrt2 m y} and emits b_m * f(y) e^{-sqrt2 m y}.
      double bm = g.c.at(vg);
      f = lower(f, m, Side::plus);
      TailSeries gl = lower(g, m, Side::minus);
      g = drop_constant(gl, bm);
      Emission e;
      e.d = base + d_acc;
      e.frame = Frame::left;
      e.h = wrap(scale(wrap(f, Side::plus, trunc), coeff * bm).comp[0],
                 Side::plus, trunc);
      e.lx = lx;
      e.rx = rx;
      out.emissions.push_back(std::move(e));
    } else {
      double am = f.c.at(vf);
      g = lower(g, m, Side::minus);
      TailSeries fl = lower(f, m, Side::plus);
      f = drop_constant(fl, am);
      Emission e;
      e.d = base + d_acc;
      e.frame = Frame::right;
      e.h = wrap(scale(wrap(g, Side::minus, trunc), coeff * am).comp[0],
                 Side::minus, trunc);
      e.lx = lx;
      e.rx = rx;
      out.emissions.push_back(std::move(e));
    }
  }
  out.f_rest = std::move(f);
  out.g_rest = std::move(g);
  out.d_acc = d_acc;
  return out;
}

}  // namespace

double Emission::eval(double x, double zeta) const {
  double y = x - zeta;
  double arg = frame == Frame::left ? y : x;
  double v = stable_eval(h, arg);
  double poly = 1.0;
  for (int i = 0; i < lx; ++i) poly *= y;
  for (int i = 0; i < rx; ++i) poly *= x;
  return poly * v * std::exp(-SQRT2 * d * zeta);
}

double SeparationResult::emitted_eval(double x, double zeta) const {
  double acc = 0.0;
  for (const auto& e : terms) acc += e.eval(x, zeta);
  return acc;
}

double SeparationResult::remainder_eval(double x, double zeta) const {
  return input(x, zeta) - emitted_eval(x, zeta);
}

SeparationResult separate(const PolyExp& f, const PolyExp& g, int M) {
  if (f.side != Side::plus || g.side != Side::minus)
    throw std::invalid_argument("separate: expects (plus, minus) sides");
  if (f.comp.size() != 1 || f.comp.begin()->first != 0 || g.comp.size() != 1 ||
      g.comp.begin()->first != 0)
    throw std::invalid_argument(
        "separate: polynomial prefactors not supported here");
  if (parity_of(f) == parity_of(g))
    throw std::invalid_argument("separate: exponent parities must differ");
  int trunc = std::min(f.truncation, g.truncation);
  auto fe = f.comp.at(0).eval, ge = g.comp.at(0).eval;
  PeelOutput po = peel(f.comp.at(0), g.comp.at(0), trunc, 1.0, 0, 0, 0, M);
  SeparationResult r;
  r.terms = std::move(po.emissions);
  r.remainder.f = wrap(std::move(po.f_rest), Side::plus, trunc);
  r.remainder.g = wrap(std::move(po.g_rest), Side::minus, trunc);
  r.remainder.d_M = po.certified;
  if (fe && ge)
    r.input = [fe, ge](double x, double zeta) {
      return fe(x - zeta) * ge(x);
    };
  return r;
}

double InteractionLedger::emitted_eval(double x, double zeta) const {
  double acc = 0.0;
  for (const auto& [key, h] : entries) {
    double y = x - zeta;
    double poly = 1.0;
    for (int i = 0; i < key.lx; ++i) poly *= y;
    for (int i = 0; i < key.rx; ++i) poly *= x;
    double arg = key.frame == Frame::left ? y : x;
    acc += poly * stable_eval(h, arg) * std::exp(-SQRT2 * key.d * zeta);
  }
  return acc;
}

double InteractionLedger::remainder_eval(double x, double zeta) const {
  return input(x, zeta) - emitted_eval(x, zeta);
}

const PolyExp* InteractionLedger::find(int d, Frame frame, int lx,
                                       int rx) const {
  for (const auto& [key, h] : entries)
    if (key.d == d && key.frame == frame && key.lx == lx && key.rx == rx)
      return &h;
  return nullptr;
}

InteractionLedger decompose_interaction(const std::vector<FrameTerm>& terms,
                                        int M) {
  std::map<LedgerKey, PolyExp> agg;
  int certified = INT_MAX;
  for (const auto& term : terms) {
    if (term.left.side != Side::plus || term.right.side != Side::minus)
      throw std::invalid_argument(
          "decompose_interaction: term sides must be (plus, minus)");
    int trunc = std::min(term.left.truncation, term.right.truncation);
    for (const auto& [nl, tl] : term.left.comp)
      for (const auto& [nr, tr] : term.right.comp) {
        PeelOutput po =
            peel(tl, tr, trunc, term.coeff, term.weight, nl, nr, M);
        certified = std::min(certified, po.certified);
        for (auto& e : po.emissions) {
          LedgerKey key{e.d, e.frame, e.lx, e.rx};
          auto it = agg.find(key);
          if (it == agg.end())
            agg.emplace(key, std::move(e.h));
          else
            it->second = add(it->second, e.h);
        }
      }
  }
  InteractionLedger led;
  led.remainder_weight = certified == INT_MAX ? M + 1 : certified;
  for (auto& [key, h] : agg) led.entries.emplace_back(key, canonical(h));
  // Exact input evaluator: sum of the original two-frame products.
  auto terms_copy = terms;
  led.input = [terms_copy](double x, double zeta) {
    double acc = 0.0;
    for (const auto& t : terms_copy)
      acc += t.coeff * eval_exact(t.left, x - zeta) * eval_exact(t.right, x) *
             std::exp(-SQRT2 * t.weight * zeta);
    return acc;
  };
  return led;
}

std::vector<FrameTerm> udot_cross_terms(int truncation) {
  PolyExp a = primitive(Prim::H, truncation);
  PolyExp b = primitive(Prim::Hleft, truncation);
  auto ap = [&](int n) { return pow(a, n); };
  auto bp = [&](int n) { return pow(b, n); };
  // U'(a+b) - U'(a) - U'(b) with U' = 2p - 8p^3 + 6p^5:
  return {
      {-24.0, ap(2), bp(1), 0}, {-24.0, ap(1), bp(2), 0},
      {30.0, ap(4), bp(1), 0},  {60.0, ap(3), bp(2), 0},
      {60.0, ap(2), bp(3), 0},  {30.0, ap(1), bp(4), 0},
  };
}

std::vector<FrameTerm> g_interaction_terms(int truncation) {
  PolyExp a = primitive(Prim::H, truncation);
  PolyExp b = primitive(Prim::Hleft, truncation);
  PolyExp G = primitive(Prim::G, truncation);
  auto aG = [&](int n) { return mul(pow(a, n), G); };
  auto bp = [&](int n) { return pow(b, n); };
  // [U''(a+b) - U''(a)] G(x-zeta) e^{-sqrt2 zeta}, U'' = 2 - 24p^2 + 30p^4:
  return {
      {-48.0, aG(1), bp(1), 1}, {-24.0, aG(0), bp(2), 1},
      {120.0, aG(3), bp(1), 1}, {180.0, aG(2), bp(2), 1},
      {120.0, aG(1), bp(3), 1}, {30.0, aG(0), bp(4), 1},
  };
}

std::vector<FrameTerm> g_pair_quadratic_terms(int truncation) {
  PolyExp a = primitive(Prim::H, truncation);
  PolyExp b = primitive(Prim::Hleft, truncation);
  PolyExp Gl = primitive(Prim::G, truncation);
  PolyExp Gr = reflect(Gl);
  struct Cubic { double c; int la, lb; };
  struct Quad { double c; int gl, gr; };
  // U''' = -48p + 120p^3 expanded in a + b; (G_l - G_r)^2 expanded likewise.
  const Cubic cubic[] = {{-48, 1, 0}, {-48, 0, 1}, {120, 3, 0},
                         {360, 2, 1}, {360, 1, 2}, {120, 0, 3}};
  const Quad quad[] = {{1, 2, 0}, {-2, 1, 1}, {1, 0, 2}};
  std::vector<FrameTerm> out;
  for (const auto& cu : cubic)
    for (const auto& q : quad) {
      bool pure_left = cu.lb == 0 && q.gr == 0;
      bool pure_right = cu.la == 0 && q.gl == 0;
      if (pure_left || pure_right) continue;  // subtracted single-frame parts
      FrameTerm t;
      t.coeff = 0.5 * cu.c * q.c;
      t.left = mul(pow(a, cu.la), pow(Gl, q.gl));
      t.right = mul(pow(b, cu.lb), pow(Gr, q.gr));
      t.weight = 2;
      out.push_back(std::move(t));
    }
  return out;
}

BoundCheck interaction_bound_check(const SeparationResult& r,
                                   const std::vector<double>& zetas,
                                   double factor) {
  BoundCheck bc;
  bc.d_M = r.remainder.d_M;
  // Sample up to the right kink's center only: past it the emitted terms
  // cancel the input to below double resolution (the peeled evaluators carry
  // e^{sqrt2 m x} factors that amplify rounding), so the sup would measure
  // noise instead of the remainder.
  for (double z : zetas) {
    double sup = 0.0;
    for (double x = -10.0; x <= z; x += 0.05)
      sup = std::max(sup, std::fabs(r.remainder_eval(x, z)));
    bc.zeta.push_back(z);
    bc.sup.push_back(sup);
  }
  bc.pass = true;
  for (std::size_t i = 0; i + 1 < bc.zeta.size(); ++i) {
    double predicted =
        std::exp(-SQRT2 * bc.d_M * (bc.zeta[i + 1] - bc.zeta[i]));
    double measured = bc.sup[i + 1] / bc.sup[i];
    if (!(measured / predicted < factor && predicted / measured < factor)) {
      bc.pass = false;
      bc.message = "remainder ratio " + format_double(measured) +
                   " vs predicted " + format_double(predicted) +
                   " between zeta=" + format_double(bc.zeta[i]) + " and " +
                   format_double(bc.zeta[i + 1]);
      return bc;
    }
  }
  return bc;
}

}  // namespace kc::series
