#include "dynnorm/scalar_minimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "dynnorm/errors.hpp"

namespace dynnorm {

namespace {

constexpr double kGrowth = 1.618033988749895;
constexpr double kGoldenSection = 0.3819660112501051;  // 2 - golden ratio

double evaluate(const ScalarObjective& f, double x) {
  const double v = f(x);
  return std::isnan(v) ? HUGE_VAL : v;
}

[[noreturn]] void fail(const char* why, double at) {
  std::ostringstream os;
  os << "no interior minimum: " << why << " (search variable reached " << at << ")";
  throw BracketFailure(os.str());
}

}  // namespace

Bracket bracket_minimum(const ScalarObjective& f, double start, const MinimizeOptions& opts) {
  if (!(start > opts.lower && start < opts.upper)) fail("start outside search range", start);

  const double a0 = start;
  const double f0 = evaluate(f, a0);
  const double up = std::min(a0 + opts.initial_step, opts.upper);
  const double f_up = evaluate(f, up);
  double a = a0, fa = f0, b = up, fb = f_up;
  if (f_up > f0) {
    const double down = std::max(a0 - opts.initial_step, opts.lower);
    const double f_down = evaluate(f, down);
    if (f_down > f0) return Bracket{down, a0, up, f_down, f0, f_up};
    b = down;
    fb = f_down;
  }

  // Invariant: fb <= fa and b is the further point along the walk direction.
  double dir = b > a ? 1.0 : -1.0;
  double width = std::abs(b - a);
  for (std::size_t n = 0; n < opts.max_expansions; ++n) {
    width *= kGrowth;
    const double edge = dir > 0 ? opts.upper : opts.lower;
    double c = b + dir * width;
    bool at_edge = false;
    if ((dir > 0 && c >= edge) || (dir < 0 && c <= edge)) {
      c = edge;
      at_edge = true;
    }
    const double fc = evaluate(f, c);
    if (fc > fb && fa > fb) {
      Bracket br;
      br.lo = std::min(a, c);
      br.hi = std::max(a, c);
      br.mid = b;
      br.f_lo = a < c ? fa : fc;
      br.f_hi = a < c ? fc : fa;
      br.f_mid = fb;
      return br;
    }
    if (fc > fb) {
      // fa == fb: the minimum may sit between them; otherwise this is a plateau.
      const double m = 0.5 * (a + b);
      const double fm = evaluate(f, m);
      if (fm < fb) {
        return Bracket{std::min(a, b), m, std::max(a, b), fa, fm, fb};
      }
      fail("flat objective", c);
    }
    if (at_edge) fail("objective still non-increasing at the search boundary", c);
    a = b;
    fa = fb;
    b = c;
    fb = fc;
  }
  fail("expansion limit hit while descending", b);
}

MinimizeResult brent_minimize(const ScalarObjective& f, const Bracket& bracket,
                              const MinimizeOptions& opts) {
  double a = bracket.lo;
  double b = bracket.hi;
  double x = bracket.mid, w = x, v = x;
  double fx = bracket.f_mid, fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  const double tol = opts.width_tolerance / 4.0;

  MinimizeResult result;
  result.bracket = bracket;
  std::size_t iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol + 1e-300;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, fv), (w, fw), (x, fx).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        e = d;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m ? b : a) - x;
      d = kGoldenSection * e;
    }

    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = evaluate(f, u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  result.x = x;
  result.fx = fx;
  result.iterations = iter;
  return result;
}

MinimizeResult minimize_scalar(const ScalarObjective& f, double start, const MinimizeOptions& opts) {
  return brent_minimize(f, bracket_minimum(f, start, opts), opts);
}

}  // namespace dynnorm
