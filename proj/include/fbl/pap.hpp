#pragma once

#include <cstdint>
#include <vector>

#include "fbl/fblnorm.hpp"

namespace fbl {

enum class FamilyKind { FBLp, UpperP };

// Controlling family of a convenient norm on C(S(E*)): its modulus of
// continuity and the lower norm-equivalence constant c with
// c * ||.|| <= ||.||_inf.
struct ControllingFamilySpec {
  FamilyKind kind = FamilyKind::FBLp;
  double p = 2.0;
  double c = 1.0;

  // c defaults to 1/dim, the constant coming from ||f|| <= dim * ||f||_inf.
  static ControllingFamilySpec fblp(double p, int dim);
  static ControllingFamilySpec upper_p(double p, int dim);
};

// omega(s): p^{1/p} s^{1/p} for FBLp with p < inf, 0 for FBLp(inf), s for UpperP.
double modulus(const ControllingFamilySpec& spec, double s);

// Pointed partition of unity on S(E*).  dim 2: angular sectors with linear
// crossfade hats (overlap 0 degenerates to sector indicators); dim 3:
// Shepard-normalized tent bumps around low-discrepancy centers, with the
// partition property verified on a grid.
class PointedPartition {
 public:
  int size() const { return static_cast<int>(peaks_.size()); }
  const NormedSpace& dual_space() const { return dual_; }
  const Vector& peak(int i) const { return peaks_[i]; }
  double diam() const { return diam_; }

  // Hat i evaluated at a dual vector (only its direction matters).
  double hat(int i, std::span<const double> xstar) const;

  // Sum of f(peak_i) * hat_i at xstar's direction, scaled by ||xstar||_{E*}
  // (the positively homogeneous extension of the finite-rank image).
  double apply(std::span<const double> coefficients, std::span<const double> xstar) const;

 private:
  friend PointedPartition build_partition(const NormedSpace&, int, double);
  NormedSpace space_;
  NormedSpace dual_;
  std::vector<Vector> peaks_;
  double diam_ = 0.0;
  // dim 2 data
  double sector_half_ = 0.0;
  double ramp_half_ = 0.0;
  // dim 3 data
  std::vector<double> rho_;
  double locate_weight_sum(std::span<const double> dir, std::vector<double>& w) const;
};

// `sectors` >= 3; overlap in [0,1) is the crossfade fraction of a sector.
PointedPartition build_partition(const NormedSpace& space, int sectors, double overlap);

// P_alpha f = sum_i f(x*_i) f_i as an evaluable positively homogeneous function.
HomogeneousFn apply_P(const PointedPartition& alpha, const HomogeneousFn& f);

struct PapReport {
  double diam = 0.0;
  double omega = 0.0;
  double bound = 0.0;     // 1 + omega / c
  double measured = 0.0;  // estimated ||P_alpha f|| (caller normalizes ||f|| <= 1)
  double excess = 0.0;    // max(0, measured - 1)
};

PapReport verify_pap_bound(const PointedPartition& alpha, const ControllingFamilySpec& spec,
                           const LatticeExpr& f, double p, const AscentConfig& config);

}  // namespace fbl
