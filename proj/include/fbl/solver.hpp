#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fbl/vec.hpp"

namespace fbl {

using Evaluator = std::function<double(std::span<const double>)>;

struct AscentConfig {
  int starts = 16;
  int max_iters = 200;
  double step0 = 0.5;
  double shrink = 0.5;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct RatioResult {
  double value = 0.0;
  Vector argmax;
  int iterations = 0;  // total ascent iterations over all starts
};

// Multi-start projected gradient ascent for objective(x)/denominator(x) with
// both evaluators positively homogeneous of degree 1.  Gradients are central
// finite differences; at kinks the move degrades to a subgradient step.  The
// returned value is the ratio re-evaluated at the returned argmax, hence a
// valid lower bound of the supremum.  Deterministic in config.seed, and the
// start list for `starts = k` is a prefix of the list for `starts = k+1`.
RatioResult maximize_ratio(const Evaluator& objective, const Evaluator& denominator,
                           int dim, const AscentConfig& config);

enum class Relation { Le, Ge, Eq };

struct LinearProgram {
  struct Row {
    Vector coeffs;
    Relation rel = Relation::Le;
    double rhs = 0.0;
  };
  Vector objective;  // minimize objective . x
  std::vector<Row> rows;
  Vector lower_bounds;  // empty means all zeros
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  Vector x;
  double value = 0.0;
  Vector dual;  // one multiplier per input row (valid when Optimal)
  int iterations = 0;
};

// Two-phase dense tableau simplex with Bland's rule (deterministic,
// anti-cycling).  Numerical breakdown is reported as a status, never thrown.
LpResult solve_lp(const LinearProgram& lp);

// Pivot kernel of the tableau method, exposed for the serial/OpenMP
// comparison tests and the benchmark.  `tab` is row-major with `stride`
// doubles per row.
void simplex_pivot(double* tab, std::size_t nrows, std::size_t stride,
                   std::size_t prow, std::size_t pcol);
void simplex_pivot_serial(double* tab, std::size_t nrows, std::size_t stride,
                          std::size_t prow, std::size_t pcol);

}  // namespace fbl
