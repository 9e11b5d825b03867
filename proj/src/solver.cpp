#include "fbl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbl/parallel.hpp"
#include "fbl/rng.hpp"

namespace fbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked(double v, const char* what) {
  if (std::isnan(v)) throw NumericalError(std::string(what) + ": evaluator returned non-finite value");
  return v;
}

struct StartResult {
  double value = -kInf;
  Vector x;
  int iterations = 0;
};

StartResult ascend_from(const Evaluator& obj, const Evaluator& den, Vector x,
                        const AscentConfig& cfg) {
  const int dim = static_cast<int>(x.size());
  auto ratio = [&](std::span<const double> v) -> double {
    double d = checked(den(v), "maximize_ratio");
    if (!(d > 1e-300)) return -kInf;
    double o = checked(obj(v), "maximize_ratio");
    if (std::isinf(o)) throw NumericalError("maximize_ratio: evaluator returned non-finite value");
    return o / d;
  };
  auto renorm = [&](Vector& v) {
    double n = l2_norm(v);
    if (n > 0) {
      for (double& c : v) c /= n;
    }
  };

  renorm(x);
  double cur = ratio(x);
  double step = cfg.step0;
  const double h = 1e-6;  // points are kept on the Euclidean unit sphere
  Vector grad(dim), cand(dim), probe(dim);
  int iters = 0;
  for (; iters < cfg.max_iters; ++iters) {
    for (int j = 0; j < dim; ++j) {
      probe = x;
      probe[j] += h;
      double up = ratio(probe);
      probe[j] = x[j] - h;
      double dn = ratio(probe);
      grad[j] = (up - dn) / (2 * h);
    }
    double gn = l2_norm(grad);
    if (!(gn > 1e-13) || !std::isfinite(gn)) break;
    bool moved = false;
    while (step >= 1e-14) {
      for (int j = 0; j < dim; ++j) cand[j] = x[j] + step * grad[j] / gn;
      renorm(cand);
      double r = ratio(cand);
      if (r > cur + cfg.tol * std::max(1.0, std::fabs(cur)) * 1e-3) {
        double gain = r - cur;
        x = cand;
        cur = r;
        step = std::min(step * 1.6, 1e3);
        moved = true;
        if (gain < cfg.tol * std::max(1.0, std::fabs(cur))) moved = false;  // converged
        break;
      }
      step *= cfg.shrink;
    }
    if (!moved) break;
  }
  return {cur, std::move(x), iters};
}

}  // namespace

RatioResult maximize_ratio(const Evaluator& objective, const Evaluator& denominator,
                           int dim, const AscentConfig& config) {
  if (dim < 1) throw ValidationError("maximize_ratio: dim must be >= 1");
  if (config.starts < 1) throw ValidationError("maximize_ratio: starts must be >= 1");
  if (!(config.tol > 0)) throw ValidationError("maximize_ratio: tol must be > 0");
  if (!(config.shrink > 0) || !(config.shrink < 1)) {
    throw ValidationError("maximize_ratio: shrink must lie in (0,1)");
  }

  const int starts = config.starts;
  std::vector<StartResult> results(starts);
  // Start list: coordinate axes first, then seeded Gaussian directions.  The
  // per-start seed depends only on (seed, start index), so enlarging `starts`
  // never perturbs earlier starts.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int s = 0; s < starts; ++s) {
    Vector x0(dim, 0.0);
    if (s < dim) {
      x0[s] = 1.0;
    } else {
      Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(s)));
      for (double& c : x0) c = rng.gaussian();
      if (l2_norm(x0) < 1e-12) x0[0] = 1.0;
    }
    results[s] = ascend_from(objective, denominator, std::move(x0), config);
  }

  RatioResult best;
  best.value = -kInf;
  int total_iters = 0;
  for (int s = 0; s < starts; ++s) {
    total_iters += results[s].iterations;
    if (results[s].value > best.value) {
      best.value = results[s].value;
      best.argmax = results[s].x;
    }
  }
  best.iterations = total_iters;
  return best;
}

// ---------------------------------------------------------------------------
// Dense two-phase simplex
// ---------------------------------------------------------------------------

void simplex_pivot_serial(double* tab, std::size_t nrows, std::size_t stride,
                          std::size_t prow, std::size_t pcol) {
  double* prow_ptr = tab + prow * stride;
  const double piv = prow_ptr[pcol];
  const double inv = 1.0 / piv;
  for (std::size_t j = 0; j < stride; ++j) prow_ptr[j] *= inv;
  prow_ptr[pcol] = 1.0;
  for (std::size_t i = 0; i < nrows; ++i) {
    if (i == prow) continue;
    double* row = tab + i * stride;
    double factor = row[pcol];
    if (factor == 0.0) continue;
    for (std::size_t j = 0; j < stride; ++j) row[j] -= factor * prow_ptr[j];
    row[pcol] = 0.0;
  }
}

void simplex_pivot(double* tab, std::size_t nrows, std::size_t stride,
                   std::size_t prow, std::size_t pcol) {
#ifndef _OPENMP
  simplex_pivot_serial(tab, nrows, stride, prow, pcol);
#else
  double* prow_ptr = tab + prow * stride;
  const double piv = prow_ptr[pcol];
  const double inv = 1.0 / piv;
  for (std::size_t j = 0; j < stride; ++j) prow_ptr[j] *= inv;
  prow_ptr[pcol] = 1.0;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(nrows); ++i) {
    if (static_cast<std::size_t>(i) == prow) continue;
    double* row = tab + static_cast<std::size_t>(i) * stride;
    double factor = row[pcol];
    if (factor == 0.0) continue;
    for (std::size_t j = 0; j < stride; ++j) row[j] -= factor * prow_ptr[j];
    row[pcol] = 0.0;
  }
#endif
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;

struct Standardized {
  std::size_t m = 0;        // constraint rows
  std::size_t nvars = 0;    // structural variables
  std::size_t ncols = 0;    // structural + slack/surplus + artificial
  std::size_t first_artificial = 0;
  std::vector<double> tab;  // (m + 2) x (ncols + 1); row m: phase-1, row m+1: phase-2
  std::vector<std::size_t> basis;
  std::vector<std::size_t> aux_col;  // per row: its slack/surplus/artificial column
  std::vector<double> aux_sign;      // +1 slack or artificial, -1 surplus
  std::vector<double> row_sign;      // -1 if the row was negated to make rhs >= 0
};

Standardized standardize(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  if (n == 0) throw ValidationError("solve_lp: empty objective");
  check_finite(lp.objective, "solve_lp objective");
  Vector lb(n, 0.0);
  if (!lp.lower_bounds.empty()) {
    check_dim(lp.lower_bounds.size(), n, "solve_lp lower_bounds");
    check_finite(lp.lower_bounds, "solve_lp lower_bounds");
    lb = lp.lower_bounds;
  }
  const std::size_t m = lp.rows.size();

  std::size_t nslack = 0, nart = 0;
  std::vector<double> d(m);
  std::vector<Relation> rel(m);
  Standardized s;
  s.row_sign.assign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    check_dim(row.coeffs.size(), n, "solve_lp row");
    check_finite(row.coeffs, "solve_lp row");
    if (!std::isfinite(row.rhs)) throw ValidationError("solve_lp: non-finite rhs");
    double di = row.rhs - dot(row.coeffs, lb);
    Relation r = row.rel;
    if (di < 0) {
      di = -di;
      s.row_sign[i] = -1.0;
      if (r == Relation::Le) r = Relation::Ge;
      else if (r == Relation::Ge) r = Relation::Le;
    }
    d[i] = di;
    rel[i] = r;
    if (r == Relation::Le) {
      ++nslack;
    } else if (r == Relation::Ge) {
      ++nslack;
      ++nart;
    } else {
      ++nart;
    }
  }

  s.m = m;
  s.nvars = n;
  s.first_artificial = n + nslack;
  s.ncols = n + nslack + nart;
  const std::size_t stride = s.ncols + 1;
  s.tab.assign((m + 2) * stride, 0.0);
  s.basis.assign(m, 0);
  s.aux_col.assign(m, 0);
  s.aux_sign.assign(m, 1.0);

  std::size_t slack_next = n, art_next = s.first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    double* row = s.tab.data() + i * stride;
    for (std::size_t j = 0; j < n; ++j) row[j] = s.row_sign[i] * lp.rows[i].coeffs[j];
    row[s.ncols] = d[i];
    if (rel[i] == Relation::Le) {
      row[slack_next] = 1.0;
      s.basis[i] = slack_next;
      s.aux_col[i] = slack_next;
      s.aux_sign[i] = 1.0;
      ++slack_next;
    } else if (rel[i] == Relation::Ge) {
      row[slack_next] = -1.0;
      s.aux_col[i] = slack_next;
      s.aux_sign[i] = -1.0;
      ++slack_next;
      row[art_next] = 1.0;
      s.basis[i] = art_next;
      ++art_next;
    } else {
      row[art_next] = 1.0;
      s.basis[i] = art_next;
      s.aux_col[i] = art_next;
      s.aux_sign[i] = 1.0;
      ++art_next;
    }
  }

  // Phase-1 reduced costs: minimize the artificial sum.
  double* p1 = s.tab.data() + m * stride;
  for (std::size_t j = s.first_artificial; j < s.ncols; ++j) p1[j] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (s.basis[i] >= s.first_artificial) {
      const double* row = s.tab.data() + i * stride;
      for (std::size_t j = 0; j <= s.ncols; ++j) p1[j] -= row[j];
    }
  }
  // Phase-2 reduced costs (initial basis has zero cost).
  double* p2 = s.tab.data() + (m + 1) * stride;
  for (std::size_t j = 0; j < n; ++j) p2[j] = lp.objective[j];
  return s;
}

// Bland's rule: entering = lowest-index column with negative reduced cost,
// leaving = min-ratio row with the lowest basis index on ties.
enum class StepOutcome { Pivoted, Done, Unbounded };

StepOutcome simplex_step(Standardized& s, std::size_t cost_row, std::size_t col_limit) {
  const std::size_t stride = s.ncols + 1;
  const double* costs = s.tab.data() + cost_row * stride;
  std::size_t enter = col_limit;
  for (std::size_t j = 0; j < col_limit; ++j) {
    if (costs[j] < -kCostEps) {
      enter = j;
      break;
    }
  }
  if (enter == col_limit) return StepOutcome::Done;

  std::size_t leave = s.m;
  double best_ratio = kInf;
  for (std::size_t i = 0; i < s.m; ++i) {
    const double* row = s.tab.data() + i * stride;
    if (row[enter] > kPivotEps) {
      double ratio = row[s.ncols] / row[enter];
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && (leave == s.m || s.basis[i] < s.basis[leave]))) {
        if (ratio < best_ratio) best_ratio = ratio;
        leave = i;
      }
    }
  }
  if (leave == s.m) return StepOutcome::Unbounded;

  simplex_pivot(s.tab.data(), s.m + 2, stride, leave, enter);
  s.basis[leave] = enter;
  return StepOutcome::Pivoted;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  Standardized s = standardize(lp);
  const std::size_t stride = s.ncols + 1;
  LpResult res;
  const std::size_t max_iters = 20000 + 200 * (s.m + s.ncols);
  std::size_t iters = 0;

  // Phase 1
  while (true) {
    if (++iters > max_iters) {
      res.status = LpStatus::NumericalFailure;
      res.iterations = static_cast<int>(iters);
      return res;
    }
    StepOutcome o = simplex_step(s, s.m, s.ncols);
    if (o == StepOutcome::Done) break;
    if (o == StepOutcome::Unbounded) {
      // Phase-1 objective is bounded below by 0; cannot happen in exact
      // arithmetic, so treat as a numerical breakdown.
      res.status = LpStatus::NumericalFailure;
      res.iterations = static_cast<int>(iters);
      return res;
    }
  }
  double art_sum = -s.tab[s.m * stride + s.ncols];  // cost row holds -objective
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < s.m; ++i) {
    rhs_scale = std::max(rhs_scale, std::fabs(s.tab[i * stride + s.ncols]));
  }
  if (art_sum > 1e-7 * rhs_scale) {
    res.status = LpStatus::Infeasible;
    res.iterations = static_cast<int>(iters);
    return res;
  }
  // Drive remaining artificials out of the basis where possible; rows where
  // no structural pivot exists are redundant and keep a zero-level artificial.
  for (std::size_t i = 0; i < s.m; ++i) {
    if (s.basis[i] < s.first_artificial) continue;
    const double* row = s.tab.data() + i * stride;
    std::size_t piv = s.first_artificial;
    for (std::size_t j = 0; j < s.first_artificial; ++j) {
      if (std::fabs(row[j]) > 1e-8) {
        piv = j;
        break;
      }
    }
    if (piv < s.first_artificial) {
      simplex_pivot(s.tab.data(), s.m + 2, stride, i, piv);
      s.basis[i] = piv;
    }
  }

  // Phase 2: artificial columns are barred from entering.
  while (true) {
    if (++iters > max_iters) {
      res.status = LpStatus::NumericalFailure;
      res.iterations = static_cast<int>(iters);
      return res;
    }
    StepOutcome o = simplex_step(s, s.m + 1, s.first_artificial);
    if (o == StepOutcome::Done) break;
    if (o == StepOutcome::Unbounded) {
      res.status = LpStatus::Unbounded;
      res.iterations = static_cast<int>(iters);
      return res;
    }
  }

  Vector lb(s.nvars, 0.0);
  if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;
  res.x.assign(s.nvars, 0.0);
  for (std::size_t i = 0; i < s.m; ++i) {
    if (s.basis[i] < s.nvars) res.x[s.basis[i]] = s.tab[i * stride + s.ncols];
  }
  for (std::size_t j = 0; j < s.nvars; ++j) res.x[j] += lb[j];
  res.value = dot(lp.objective, res.x);

  const double* p2 = s.tab.data() + (s.m + 1) * stride;
  res.dual.assign(s.m, 0.0);
  for (std::size_t i = 0; i < s.m; ++i) {
    double rc = p2[s.aux_col[i]];
    double y = (s.aux_sign[i] > 0) ? -rc : rc;
    res.dual[i] = s.row_sign[i] * y;
  }
  res.status = LpStatus::Optimal;
  res.iterations = static_cast<int>(iters);
  return res;
}

}  // namespace fbl
