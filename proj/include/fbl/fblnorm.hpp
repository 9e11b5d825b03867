#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbl/expr.hpp"
#include "fbl/solver.hpp"

namespace fbl {

// Positively homogeneous function of a dual vector; LatticeExpr provides one,
// and the partition-of-unity operators provide grid-sampled ones.
using HomogeneousFn = Evaluator;

// An ordered finite tuple of dual vectors with its weak-p norm.
struct FunctionalTuple {
  NormedSpace space;             // the primal E; members live in E*
  std::vector<Vector> members;
  double p = 2.0;
};

struct EstimateMeta {
  std::uint64_t seed = 0;
  std::vector<int> grid;
  int tuple_cap = 0;
  int iterations = 0;
  double runtime_ms = 0.0;  // in-memory only; never serialized
};

struct NormEstimate {
  double lower = 0.0;
  std::optional<double> upper;
  std::string method;
  EstimateMeta meta;
};

// sup over e in B(E) of (sum_i |<e*_i, e>|^p)^{1/p}; ascent-based lower bound,
// sharpened by a dense angular scan with local refinement when dim E = 2.
double weak_p_norm(const FunctionalTuple& tuple, const AscentConfig& config);

// Lower bound of ||f||_infty on B(E*): max of |f| over a sampled dual sphere
// (refined for dim 2).  `upper` is lower*(1+slack) with a declared
// grid-resolution heuristic slack; it is not rigorous.
NormEstimate sup_norm_on_dual_ball(const LatticeExpr& f, int grid, std::uint64_t seed);
NormEstimate sup_norm_on_dual_ball_fn(const HomogeneousFn& f, const NormedSpace& space,
                                      int grid, std::uint64_t seed);

// Lower bound of the FBL^(p) norm: joint multi-start ascent over N-tuples of
// dual vectors (N <= tuple_cap) of the ratio
//   (sum_i |f(e*_i)|^p)^{1/p} / ||(e*_i)||_{p,weak}.
// For p = inf the norm is the uniform norm on B(E*) and N = 1 is used exactly.
NormEstimate fbl_p_lower(const LatticeExpr& f, double p, int tuple_cap,
                         const AscentConfig& config);
NormEstimate fbl_p_lower_fn(const HomogeneousFn& f, const NormedSpace& space, double p,
                            int tuple_cap, const AscentConfig& config);

// Upper estimate of the FBL^(p) norm (p < inf) via the measure-domination
// feasibility LP discretized on sphere grids: minimize total mass subject to
//   sum_m mu_m |<e*_t, e_m>|^p >= |f(e*_t)|^p   for every test direction e*_t,
// returning (total mass)^{1/p}.  Grid-certified only at tested directions;
// the metadata records both grid sizes.  Throws NumericalError when the LP is
// infeasible (mass grid too coarse for f's support directions).
NormEstimate fbl_p_upper_lp(const LatticeExpr& f, double p, int grid_mass,
                            int grid_test, std::uint64_t seed);
NormEstimate fbl_p_upper_lp_fn(const HomogeneousFn& f, const NormedSpace& space, double p,
                               int grid_mass, int grid_test, std::uint64_t seed);

// [sup-ball lower, dim E * sup-ball upper]: brackets every FBL^(p) norm of f.
std::pair<double, double> sandwich_bounds(const LatticeExpr& f, int grid = 2048,
                                          std::uint64_t seed = 0);

}  // namespace fbl
