#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbl/vec.hpp"

namespace fbl {

enum class SpaceKind { Lq, LorentzWeak, LorentzL1 };

// A finite-dimensional normed sequence space.  Three families:
//   Lq(q)          classical ell_q, q in [1,inf]
//   LorentzWeak(p) weak-ell_p with the maximal-averages norm
//                  max_k k^{1/p-1} * (sum of k largest |x_i|), p in (1,inf)
//   LorentzL1(r)   Lorentz ell_{r,1}: sum_i (i^{1/r}-(i-1)^{1/r}) x*_i, r in (1,inf)
// Duality pairings: Lq(q)' = Lq(q'), LorentzWeak(p)' = LorentzL1(p'),
// LorentzL1(r)' = LorentzWeak(r').
struct NormedSpace {
  SpaceKind kind = SpaceKind::Lq;
  double param = 2.0;
  int dim = 1;

  static NormedSpace lq(double q, int dim);
  static NormedSpace lorentz_weak(double p, int dim);
  static NormedSpace lorentz_l1(double r, int dim);

  NormedSpace dual() const;

  bool operator==(const NormedSpace&) const = default;
};

// Conjugate exponent: 1 <-> inf, else q/(q-1).
double conjugate_exponent(double q);

double norm(const NormedSpace& space, std::span<const double> x);
double dual_norm(const NormedSpace& space, std::span<const double> xstar);

// sup_{t>0} t * #{i : |x_i| > t}^{1/p}  =  max_k (k-th largest |x_i|) * k^{1/p}.
double quasi_norm_pinfty(double p, std::span<const double> x);

// `count` points of norm one: equiangular for dim 2, Halton/Box-Muller
// low-discrepancy directions renormalized in the space norm for dim >= 3.
// Deterministic in (space, count, seed).
std::vector<Vector> sample_sphere(const NormedSpace& space, int count, std::uint64_t seed);

}  // namespace fbl
