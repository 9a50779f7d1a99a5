#ifndef KINKCOLLIDE_SERIES_HPP
#define KINKCOLLIDE_SERIES_HPP

// Exponential tail series attached to one end of the line, with optional
// polynomial-in-x prefactors:
//
//   side plus :  sum_n x^n sum_p c_{n,p} e^{ sqrt2 p x}   (expansion as x -> -inf)
//   side minus:  sum_n x^n sum_p c_{n,p} e^{-sqrt2 p x}   (expansion as x -> +inf)
//
// Exponents p within one tail share a parity; sums converge for
// e^{±2 sqrt2 x} < 1, i.e. strictly on their own side of the origin.
// Every tail can carry an exact evaluator of the function it expands, which
// the two-frame separation machinery composes step by step so emitted terms
// and remainders stay exactly evaluable.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kc::series {

enum class Side { plus, minus };

// Coefficients below this threshold are treated as absent.
inline constexpr double kCoeffEps = 1e-13;

struct TailSeries {
  std::map<int, double> c;               // exponent -> coefficient
  std::function<double(double)> eval;    // exact evaluator (may be empty)
};

struct PolyExp {
  Side side = Side::plus;
  std::map<int, TailSeries> comp;        // x-power -> tail
  int truncation = 40;                   // exponents kept up to this value
};

// Smallest exponent carrying a non-negligible coefficient (INT_MAX if none).
int val(const TailSeries& t);
int val(const PolyExp& p);

// Exponent parity (0 even, 1 odd) shared by all coefficients; throws if the
// element mixes parities.
int parity_of(const PolyExp& p);

bool is_constant(const PolyExp& p);      // single x^0, e^{0} entry

PolyExp add(const PolyExp& a, const PolyExp& b);
PolyExp scale(const PolyExp& a, double s);
PolyExp mul(const PolyExp& a, const PolyExp& b);
PolyExp pow(const PolyExp& a, int n);
PolyExp reflect(const PolyExp& a);       // f(x) -> f(-x), flips the side

// Drop negligible coefficients and empty components.
PolyExp canonical(const PolyExp& p);

// Truncated series value; only meaningful on the element's own side.
double eval_series(const PolyExp& p, double x);

// Exact evaluator value (sums x^n comp[n].eval(x)); throws if a component
// lacks an evaluator.
double eval_exact(const PolyExp& p, double x);

// Built-in profile elements (side plus unless stated):
//   H, Hdot, Hddot : kink and derivatives        (odd exponents, val 1)
//   M, N           : H^2 e^{-sqrt2 x}, H^4 e^{-sqrt2 x}  (odd, val 1 / 3)
//   V              : e^{-sqrt2 x} - H e^{-2 sqrt2 x}     (odd, val 1)
//   G              : orthogonalized interaction profile (x-powers 0 and 1)
//   Hleft          : mirror kink -H(-x), side minus (odd, val 1)
//   X              : the monomial x (x-power 1, exponent 0)
enum class Prim { H, Hdot, Hddot, M, N, V, G, Hleft, X };
PolyExp primitive(Prim which, int truncation = 40);

// e^{m sqrt2 x}; side plus for m > 0, minus for m < 0, constant 1 for m = 0.
PolyExp exp_elem(int m, int truncation = 40);

// ---- expression trees ------------------------------------------------------
//
// Small symbolic layer used by the CLI and the tests to assemble separation
// inputs: sums/products/powers of the named primitives, real scalars, the
// monomial x, exp(k) for e^{k sqrt2 x}, and R(...) for reflection x -> -x.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, prim, sum, prod, pow, reflect };
  Kind kind = Kind::number;
  double number = 0.0;
  Prim prim = Prim::H;
  int exp_k = 0;        // for prim == (exp marker) -- see parse
  bool is_exp = false;  // true: e^{exp_k sqrt2 x} leaf
  int power = 1;
  std::vector<ExprPtr> kids;
};

// Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := base ('^' uint)?; base := number | ident | exp(int) | R(expr)
// | '(' expr ')'. Identifiers: H Hdot Hddot M N V G Hleft x.
// Throws std::invalid_argument on malformed input.
ExprPtr parse_expr(const std::string& text);

double eval_expr(const ExprPtr& e, double x);
PolyExp expr_to_series(const ExprPtr& e, int truncation = 40);
std::string expr_to_string(const ExprPtr& e);

}  // namespace kc::series

#endif
