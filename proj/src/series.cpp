#include "kinkcollide/series.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <stdexcept>

#include "kinkcollide/num.hpp"
#include "kinkcollide/profiles.hpp"

namespace kc::series {

int val(const TailSeries& t) {
  for (const auto& [p, c] : t.c)
    if (std::fabs(c) > kCoeffEps) return p;
  return INT_MAX;
}

int val(const PolyExp& p) {
  int v = INT_MAX;
  for (const auto& [n, t] : p.comp) v = std::min(v, val(t));
  return v;
}

int parity_of(const PolyExp& p) {
  int par = -1;
  for (const auto& [n, t] : p.comp)
    for (const auto& [e, c] : t.c) {
      if (std::fabs(c) <= kCoeffEps) continue;
      int pe = ((e % 2) + 2) % 2;
      if (par == -1) par = pe;
      if (par != pe)
        throw std::invalid_argument("PolyExp mixes exponent parities");
    }
  if (par == -1) par = 0;
  return par;
}

bool is_constant(const PolyExp& p) {
  for (const auto& [n, t] : p.comp)
    for (const auto& [e, c] : t.c)
      if (std::fabs(c) > kCoeffEps && (n != 0 || e != 0)) return false;
  return true;
}

namespace {

TailSeries add_tails(const TailSeries& a, const TailSeries& b) {
  TailSeries out = a;
  for (const auto& [e, c] : b.c) out.c[e] += c;
  if (a.eval && b.eval) {
    auto fa = a.eval, fb = b.eval;
    out.eval = [fa, fb](double x) { return fa(x) + fb(x); };
  } else {
    out.eval = nullptr;
  }
  return out;
}

TailSeries scale_tail(const TailSeries& a, double s) {
  TailSeries out = a;
  for (auto& [e, c] : out.c) c *= s;
  if (a.eval) {
    auto fa = a.eval;
    out.eval = [fa, s](double x) { return s * fa(x); };
  }
  return out;
}

TailSeries mul_tails(const TailSeries& a, const TailSeries& b, int trunc) {
  TailSeries out;
  for (const auto& [ea, ca] : a.c) {
    if (std::fabs(ca) <= kCoeffEps) continue;
    for (const auto& [eb, cb] : b.c) {
      if (std::fabs(cb) <= kCoeffEps) continue;
      if (ea + eb > trunc) continue;
      out.c[ea + eb] += ca * cb;
    }
  }
  if (a.eval && b.eval) {
    auto fa = a.eval, fb = b.eval;
    out.eval = [fa, fb](double x) { return fa(x) * fb(x); };
  }
  return out;
}

}  // namespace

PolyExp add(const PolyExp& a, const PolyExp& b) {
  if (a.side != b.side && !is_constant(a) && !is_constant(b))
    throw std::invalid_argument("add: elements live on different sides");
  PolyExp out;
  out.side = is_constant(a) ? b.side : a.side;
  out.truncation = std::min(a.truncation, b.truncation);
  out.comp = a.comp;
  for (const auto& [n, t] : b.comp) {
    auto it = out.comp.find(n);
    if (it == out.comp.end())
      out.comp[n] = t;
    else
      it->second = add_tails(it->second, t);
  }
  return out;
}

PolyExp scale(const PolyExp& a, double s) {
  PolyExp out = a;
  for (auto& [n, t] : out.comp) t = scale_tail(t, s);
  return out;
}

PolyExp mul(const PolyExp& a, const PolyExp& b) {
  if (a.side != b.side && !is_constant(a) && !is_constant(b))
    throw std::invalid_argument("mul: elements live on different sides");
  PolyExp out;
  out.side = is_constant(a) ? b.side : a.side;
  out.truncation = std::min(a.truncation, b.truncation);
  for (const auto& [na, ta] : a.comp)
    for (const auto& [nb, tb] : b.comp) {
      TailSeries prod = mul_tails(ta, tb, out.truncation);
      auto it = out.comp.find(na + nb);
      if (it == out.comp.end())
        out.comp[na + nb] = std::move(prod);
      else
        it->second = add_tails(it->second, prod);
    }
  return out;
}

PolyExp pow(const PolyExp& a, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative power");
  PolyExp out = exp_elem(0, a.truncation);  // the constant 1
  out.side = a.side;
  for (int i = 0; i < n; ++i) out = mul(out, a);
  return out;
}

PolyExp reflect(const PolyExp& a) {
  PolyExp out;
  out.side = a.side == Side::plus ? Side::minus : Side::plus;
  out.truncation = a.truncation;
  for (const auto& [n, t] : a.comp) {
    TailSeries r;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (const auto& [e, c] : t.c) r.c[e] = sign * c;
    if (t.eval) {
      auto f = t.eval;
      r.eval = [f, sign](double x) { return sign * f(-x); };
    }
    out.comp[n] = std::move(r);
  }
  return out;
}

PolyExp canonical(const PolyExp& p) {
  PolyExp out;
  out.side = p.side;
  out.truncation = p.truncation;
  for (const auto& [n, t] : p.comp) {
    TailSeries keep;
    keep.eval = t.eval;
    for (const auto& [e, c] : t.c)
      if (std::fabs(c) > kCoeffEps) keep.c[e] = c;
    if (!keep.c.empty()) out.comp[n] = std::move(keep);
  }
  return out;
}

double eval_series(const PolyExp& p, double x) {
  double sgn = p.side == Side::plus ? 1.0 : -1.0;
  double acc = 0.0;
  for (const auto& [n, t] : p.comp) {
    double tail = 0.0;
    for (const auto& [e, c] : t.c) tail += c * std::exp(sgn * SQRT2 * e * x);
    acc += std::pow(x, n) * tail;
  }
  return acc;
}

double eval_exact(const PolyExp& p, double x) {
  double acc = 0.0;
  for (const auto& [n, t] : p.comp) {
    if (!t.eval) throw std::logic_error("eval_exact: component lacks evaluator");
    acc += std::pow(x, n) * t.eval(x);
  }
  return acc;
}

namespace {

TailSeries tail_from(std::map<int, double> c, std::function<double(double)> f) {
  TailSeries t;
  t.c = std::move(c);
  t.eval = std::move(f);
  return t;
}

}  // namespace

PolyExp primitive(Prim which, int truncation) {
  PolyExp out;
  out.truncation = truncation;
  std::map<int, double> c;
  switch (which) {
    case Prim::H:
      for (int k = 0; 2 * k + 1 <= truncation; ++k) c[2 * k + 1] = binom(-0.5, k);
      out.comp[0] = tail_from(std::move(c), [](double x) { return kink_eval(x); });
      return out;
    case Prim::Hdot:
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c[2 * k + 1] = SQRT2 * binom(-1.5, k);
      out.comp[0] =
          tail_from(std::move(c), [](double x) { return kink_eval(x, 1); });
      return out;
    case Prim::Hddot:
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c[2 * k + 1] =
            2.0 * (binom(-2.5, k) - (k >= 1 ? 2.0 * binom(-2.5, k - 1) : 0.0));
      out.comp[0] =
          tail_from(std::move(c), [](double x) { return kink_eval(x, 2); });
      return out;
    case Prim::M:
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c[2 * k + 1] = (k % 2 ? -1.0 : 1.0);
      out.comp[0] = tail_from(
          std::move(c), [](double x) { return special_eval(SpecialKind::M, x); });
      return out;
    case Prim::N:
      for (int k = 0; 2 * k + 3 <= truncation; ++k)
        c[2 * k + 3] = (k % 2 ? -1.0 : 1.0) * (k + 1);
      out.comp[0] = tail_from(
          std::move(c), [](double x) { return special_eval(SpecialKind::N, x); });
      return out;
    case Prim::V:
      for (int k = 1; 2 * k - 1 <= truncation; ++k)
        c[2 * k - 1] = -binom(-0.5, k);
      out.comp[0] = tail_from(
          std::move(c), [](double x) { return special_eval(SpecialKind::V, x); });
      return out;
    case Prim::G: {
      // x-power 0: A + (k1/sqrt2) H'; x-power 1: 2 H'.
      double k1 = compute_k1();
      for (int k = 1; 2 * k - 1 <= truncation; ++k)
        c[2 * k - 1] = -binom(-1.5, k);
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c[2 * k + 1] += (k1 / SQRT2) * SQRT2 * binom(-1.5, k);
      out.comp[0] = tail_from(std::move(c), [](double x) {
        return special_eval(SpecialKind::G, x) - 2.0 * x * kink_eval(x, 1);
      });
      std::map<int, double> c1;
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c1[2 * k + 1] = 2.0 * SQRT2 * binom(-1.5, k);
      out.comp[1] = tail_from(std::move(c1),
                              [](double x) { return 2.0 * kink_eval(x, 1); });
      return out;
    }
    case Prim::Hleft:
      out.side = Side::minus;
      for (int k = 0; 2 * k + 1 <= truncation; ++k)
        c[2 * k + 1] = -binom(-0.5, k);
      out.comp[0] = tail_from(std::move(c), [](double x) {
        return kink_eval(x, 0, KinkSide::left);
      });
      return out;
    case Prim::X:
      out.comp[1] = tail_from({{0, 1.0}}, [](double) { return 1.0; });
      return out;
  }
  throw std::invalid_argument("primitive: unknown element");
}

PolyExp exp_elem(int m, int truncation) {
  PolyExp out;
  out.truncation = truncation;
  out.side = m >= 0 ? Side::plus : Side::minus;
  int e = std::abs(m);
  out.comp[0] = tail_from({{e, 1.0}}, [m](double x) {
    return std::exp(m * SQRT2 * x);
  });
  return out;
}

// ---- expression trees -------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at position " +
                                std::to_string(i) + ": " + what);
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (i != s.size()) fail("trailing input");
    return e;
  }

  ExprPtr expr() {
    ExprPtr acc = term();
    for (;;) {
      skip();
      if (eat('+')) {
        acc = make_sum(acc, term(), +1.0);
      } else if (eat('-')) {
        acc = make_sum(acc, term(), -1.0);
      } else {
        return acc;
      }
    }
  }

  ExprPtr term() {
    ExprPtr acc = factor();
    for (;;) {
      skip();
      if (eat('*'))
        acc = make_prod(acc, factor());
      else
        return acc;
    }
  }

  ExprPtr factor() {
    ExprPtr b = base();
    skip();
    if (eat('^')) {
      skip();
      std::size_t j = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      if (j == i) fail("expected integer power");
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::pow;
      e->power = std::stoi(s.substr(j, i - j));
      e->kids = {b};
      return e;
    }
    return b;
  }

  ExprPtr base() {
    skip();
    if (i >= s.size()) fail("unexpected end of input");
    char ch = s[i];
    if (ch == '(') {
      ++i;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit((unsigned char)ch) || ch == '.' ||
        (ch == '-' && i + 1 < s.size() &&
         (std::isdigit((unsigned char)s[i + 1]) || s[i + 1] == '.'))) {
      std::size_t pos = 0;
      double v = std::stod(s.substr(i), &pos);
      i += pos;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::number;
      e->number = v;
      return e;
    }
    if (std::isalpha((unsigned char)ch)) {
      std::size_t j = i;
      while (i < s.size() && std::isalnum((unsigned char)s[i])) ++i;
      std::string name = s.substr(j, i - j);
      if (name == "R") {
        if (!eat('(')) fail("expected '(' after R");
        ExprPtr inner = expr();
        if (!eat(')')) fail("expected ')'");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::reflect;
        e->kids = {inner};
        return e;
      }
      if (name == "exp") {
        if (!eat('(')) fail("expected '(' after exp");
        skip();
        std::size_t k = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (k == i) fail("expected integer in exp()");
        int m = std::stoi(s.substr(k, i - k));
        if (!eat(')')) fail("expected ')'");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::prim;
        e->is_exp = true;
        e->exp_k = m;
        return e;
      }
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::prim;
      if (name == "H") e->prim = Prim::H;
      else if (name == "Hdot") e->prim = Prim::Hdot;
      else if (name == "Hddot") e->prim = Prim::Hddot;
      else if (name == "M") e->prim = Prim::M;
      else if (name == "N") e->prim = Prim::N;
      else if (name == "V") e->prim = Prim::V;
      else if (name == "G") e->prim = Prim::G;
      else if (name == "Hleft") e->prim = Prim::Hleft;
      else if (name == "x") e->prim = Prim::X;
      else fail("unknown identifier '" + name + "'");
      return e;
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  static ExprPtr make_sum(ExprPtr a, ExprPtr b, double sign) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::sum;
    e->number = sign;  // sign applied to the second child
    e->kids = {std::move(a), std::move(b)};
    return e;
  }
  static ExprPtr make_prod(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::prod;
    e->kids = {std::move(a), std::move(b)};
    return e;
  }
};

const char* prim_name(Prim p) {
  switch (p) {
    case Prim::H: return "H";
    case Prim::Hdot: return "Hdot";
    case Prim::Hddot: return "Hddot";
    case Prim::M: return "M";
    case Prim::N: return "N";
    case Prim::V: return "V";
    case Prim::G: return "G";
    case Prim::Hleft: return "Hleft";
    case Prim::X: return "x";
  }
  return "?";
}

double eval_prim(Prim p, double x) {
  switch (p) {
    case Prim::H: return kink_eval(x);
    case Prim::Hdot: return kink_eval(x, 1);
    case Prim::Hddot: return kink_eval(x, 2);
    case Prim::M: return special_eval(SpecialKind::M, x);
    case Prim::N: return special_eval(SpecialKind::N, x);
    case Prim::V: return special_eval(SpecialKind::V, x);
    case Prim::G: return special_eval(SpecialKind::G, x);
    case Prim::Hleft: return kink_eval(x, 0, KinkSide::left);
    case Prim::X: return x;
  }
  throw std::invalid_argument("eval_prim");
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

double eval_expr(const ExprPtr& e, double x) {
  switch (e->kind) {
    case Expr::Kind::number: return e->number;
    case Expr::Kind::prim:
      return e->is_exp ? std::exp(e->exp_k * SQRT2 * x) : eval_prim(e->prim, x);
    case Expr::Kind::sum:
      return eval_expr(e->kids[0], x) + e->number * eval_expr(e->kids[1], x);
    case Expr::Kind::prod:
      return eval_expr(e->kids[0], x) * eval_expr(e->kids[1], x);
    case Expr::Kind::pow: return std::pow(eval_expr(e->kids[0], x), e->power);
    case Expr::Kind::reflect: return eval_expr(e->kids[0], -x);
  }
  throw std::logic_error("eval_expr");
}

PolyExp expr_to_series(const ExprPtr& e, int truncation) {
  switch (e->kind) {
    case Expr::Kind::number: {
      PolyExp c = exp_elem(0, truncation);
      return scale(c, e->number);
    }
    case Expr::Kind::prim:
      return e->is_exp ? exp_elem(e->exp_k, truncation)
                       : primitive(e->prim, truncation);
    case Expr::Kind::sum:
      return add(expr_to_series(e->kids[0], truncation),
                 scale(expr_to_series(e->kids[1], truncation), e->number));
    case Expr::Kind::prod:
      return mul(expr_to_series(e->kids[0], truncation),
                 expr_to_series(e->kids[1], truncation));
    case Expr::Kind::pow:
      return pow(expr_to_series(e->kids[0], truncation), e->power);
    case Expr::Kind::reflect:
      return reflect(expr_to_series(e->kids[0], truncation));
  }
  throw std::logic_error("expr_to_series");
}

std::string expr_to_string(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::number: return format_double(e->number);
    case Expr::Kind::prim:
      if (e->is_exp) return "exp(" + std::to_string(e->exp_k) + ")";
      return prim_name(e->prim);
    case Expr::Kind::sum:
      return "(" + expr_to_string(e->kids[0]) +
             (e->number >= 0 ? " + " : " - ") + expr_to_string(e->kids[1]) +
             ")";
    case Expr::Kind::prod:
      return "(" + expr_to_string(e->kids[0]) + " * " +
             expr_to_string(e->kids[1]) + ")";
    case Expr::Kind::pow:
      return expr_to_string(e->kids[0]) + "^" + std::to_string(e->power);
    case Expr::Kind::reflect: return "R(" + expr_to_string(e->kids[0]) + ")";
  }
  return "?";
}

}  // namespace kc::series
