#pragma once

#include <cstddef>
#include <functional>

namespace dynnorm {

using ScalarObjective = std::function<double(double)>;

/// Three abscissae lo < mid < hi with f(mid) < min(f(lo), f(hi)).
struct Bracket {
  double lo = 0.0, mid = 0.0, hi = 0.0;
  double f_lo = 0.0, f_mid = 0.0, f_hi = 0.0;
};

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  Bracket bracket;  // the initial bracket the search was started from
  std::size_t iterations = 0;
};

struct MinimizeOptions {
  double initial_step = 1.0;
  double lower = -1e300;
  double upper = 1e300;
  std::size_t max_expansions = 200;
  double width_tolerance = 1e-12;  // absolute, on the search variable
  std::size_t max_iterations = 200;
};

/// Walks downhill from `start` with geometrically growing steps until the
/// objective turns up again. Throws BracketFailure if the walk reaches
/// [lower, upper]'s edge or exhausts max_expansions while still descending.
Bracket bracket_minimum(const ScalarObjective& f, double start, const MinimizeOptions& opts);

/// Brent's golden-section / parabolic minimization inside `bracket`.
/// Stops when the enclosing interval is narrower than width_tolerance or after
/// max_iterations.
MinimizeResult brent_minimize(const ScalarObjective& f, const Bracket& bracket,
                              const MinimizeOptions& opts);

/// bracket_minimum followed by brent_minimize.
MinimizeResult minimize_scalar(const ScalarObjective& f, double start, const MinimizeOptions& opts);

}  // namespace dynnorm
