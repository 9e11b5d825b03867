#include "fbl/pap.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fbl/rng.hpp"

namespace fbl {

ControllingFamilySpec ControllingFamilySpec::fblp(double p, int dim) {
  if ((!(p >= 1.0) && !std::isinf(p)) || dim < 1) {
    throw ValidationError("ControllingFamilySpec::fblp: need p in [1,inf], dim >= 1");
  }
  return {FamilyKind::FBLp, p, 1.0 / dim};
}

ControllingFamilySpec ControllingFamilySpec::upper_p(double p, int dim) {
  if (!(p > 1.0) || std::isinf(p) || dim < 1) {
    throw ValidationError("ControllingFamilySpec::upper_p: need p in (1,inf), dim >= 1");
  }
  return {FamilyKind::UpperP, p, 1.0 / dim};
}

double modulus(const ControllingFamilySpec& spec, double s) {
  if (!(s >= 0)) throw ValidationError("modulus: s must be >= 0");
  if (spec.kind == FamilyKind::UpperP) return s;
  if (std::isinf(spec.p)) return 0.0;  // constant family
  return std::pow(spec.p, 1.0 / spec.p) * std::pow(s, 1.0 / spec.p);
}

namespace {

double wrap_angle(double d) {
  d = std::fmod(d, 2.0 * M_PI);
  if (d < -M_PI) d += 2.0 * M_PI;
  if (d >= M_PI) d -= 2.0 * M_PI;
  return d;
}

Vector dual_unit_at(const NormedSpace& dual, double theta) {
  Vector v{std::cos(theta), std::sin(theta)};
  double n = norm(dual, v);
  v[0] /= n;
  v[1] /= n;
  return v;
}

// Diameter of the arc [a,b] of the dual sphere, overestimated via dense
// sampling plus a chained-gap margin so that it dominates every chord.
double arc_diameter(const NormedSpace& dual, double a, double b) {
  const int S = 65;
  std::vector<Vector> pts(S);
  for (int k = 0; k < S; ++k) pts[k] = dual_unit_at(dual, a + (b - a) * k / (S - 1));
  Vector diff(2);
  double pair_max = 0.0, gap_max = 0.0;
  for (int i = 0; i < S; ++i) {
    for (int j = i + 1; j < S; ++j) {
      diff[0] = pts[i][0] - pts[j][0];
      diff[1] = pts[i][1] - pts[j][1];
      double d = norm(dual, diff);
      pair_max = std::max(pair_max, d);
      if (j == i + 1) gap_max = std::max(gap_max, d);
    }
  }
  return pair_max + 4.0 * gap_max;
}

}  // namespace

double PointedPartition::locate_weight_sum(std::span<const double> dir,
                                           std::vector<double>& w) const {
  w.assign(peaks_.size(), 0.0);
  double total = 0.0;
  Vector diff(dual_.dim);
  for (std::size_t i = 0; i < peaks_.size(); ++i) {
    for (int k = 0; k < dual_.dim; ++k) diff[k] = dir[k] - peaks_[i][k];
    double d = norm(dual_, diff);
    if (d < rho_[i]) {
      w[i] = 1.0 - d / rho_[i];
      total += w[i];
    }
  }
  return total;
}

double PointedPartition::hat(int i, std::span<const double> xstar) const {
  if (i < 0 || i >= size()) throw ValidationError("hat: index out of range");
  check_dim(xstar.size(), static_cast<std::size_t>(dual_.dim), "hat");
  double nx = norm(dual_, xstar);
  if (!(nx > 0)) throw ValidationError("hat: zero dual vector has no direction");
  if (dual_.dim == 2) {
    double theta = std::atan2(xstar[1] / nx, xstar[0] / nx);
    double center = 2.0 * M_PI * i / size();
    double d = std::fabs(wrap_angle(theta - center));
    if (ramp_half_ == 0.0) {
      double signed_d = wrap_angle(theta - center);
      return (signed_d >= -sector_half_ && signed_d < sector_half_) ? 1.0 : 0.0;
    }
    if (d <= sector_half_ - ramp_half_) return 1.0;
    if (d >= sector_half_ + ramp_half_) return 0.0;
    return (sector_half_ + ramp_half_ - d) / (2.0 * ramp_half_);
  }
  Vector dir(dual_.dim);
  for (int k = 0; k < dual_.dim; ++k) dir[k] = xstar[k] / nx;
  std::vector<double> w;
  double total = locate_weight_sum(dir, w);
  if (!(total > 0)) return 0.0;
  return w[i] / total;
}

double PointedPartition::apply(std::span<const double> coefficients,
                               std::span<const double> xstar) const {
  check_dim(coefficients.size(), peaks_.size(), "apply coefficients");
  double nx = norm(dual_, xstar);
  if (nx == 0.0) return 0.0;
  if (dual_.dim == 2) {
    double theta = std::atan2(xstar[1] / nx, xstar[0] / nx);
    const int K = size();
    double step = 2.0 * M_PI / K;
    int base = static_cast<int>(std::floor(theta / step + 0.5));
    double s = 0.0;
    for (int di = -1; di <= 1; ++di) {
      int i = ((base + di) % K + K) % K;
      double center = step * i;
      double d = wrap_angle(theta - center);
      double h;
      if (ramp_half_ == 0.0) {
        h = (d >= -sector_half_ && d < sector_half_) ? 1.0 : 0.0;
      } else {
        double ad = std::fabs(d);
        if (ad <= sector_half_ - ramp_half_) h = 1.0;
        else if (ad >= sector_half_ + ramp_half_) h = 0.0;
        else h = (sector_half_ + ramp_half_ - ad) / (2.0 * ramp_half_);
      }
      if (h > 0) s += coefficients[i] * h;
    }
    return nx * s;
  }
  Vector dir(dual_.dim);
  for (int k = 0; k < dual_.dim; ++k) dir[k] = xstar[k] / nx;
  std::vector<double> w;
  double total = locate_weight_sum(dir, w);
  if (!(total > 0)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0) s += coefficients[i] * w[i] / total;
  }
  return nx * s;
}

PointedPartition build_partition(const NormedSpace& space, int sectors, double overlap) {
  if (sectors < 3) throw ValidationError("build_partition: sectors must be >= 3");
  if (!(overlap >= 0.0) || overlap >= 1.0) {
    throw ValidationError("build_partition: overlap must lie in [0,1)");
  }
  if (space.dim != 2 && space.dim != 3) {
    throw ValidationError("build_partition: exact construction needs dim 2 (dim 3 best-effort)");
  }

  PointedPartition a;
  a.space_ = space;
  a.dual_ = space.dual();

  if (space.dim == 2) {
    a.sector_half_ = M_PI / sectors;
    a.ramp_half_ = overlap * a.sector_half_;
    double diam = 0.0;
    for (int i = 0; i < sectors; ++i) {
      double center = 2.0 * M_PI * i / sectors;
      a.peaks_.push_back(dual_unit_at(a.dual_, center));
      double half_support = a.sector_half_ + a.ramp_half_;
      diam = std::max(diam, arc_diameter(a.dual_, center - half_support, center + half_support));
    }
    a.diam_ = diam;
    return a;
  }

  // dim 3: Shepard-normalized tents around low-discrepancy centers; the
  // partition property is grid-verified (coverage can fail for poor center
  // sets, which is reported rather than silently accepted).
  a.peaks_ = sample_sphere(a.dual_, sectors, 0);
  a.rho_.assign(sectors, 0.0);
  Vector diff(3);
  for (int i = 0; i < sectors; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < sectors; ++j) {
      if (i == j) continue;
      for (int k = 0; k < 3; ++k) diff[k] = a.peaks_[i][k] - a.peaks_[j][k];
      nearest = std::min(nearest, norm(a.dual_, diff));
    }
    a.rho_[i] = nearest;
  }
  a.diam_ = 2.0 * *std::max_element(a.rho_.begin(), a.rho_.end());
  auto probes = sample_sphere(a.dual_, std::min(200 * sectors, 20000), 12345);
  std::vector<double> w;
  for (const auto& x : probes) {
    if (!(a.locate_weight_sum(x, w) > 0)) {
      throw NumericalError("build_partition: dim-3 hats do not cover the sphere; use more sectors");
    }
  }
  return a;
}

HomogeneousFn apply_P(const PointedPartition& alpha, const HomogeneousFn& f) {
  auto coeffs = std::make_shared<Vector>();
  coeffs->reserve(alpha.size());
  for (int i = 0; i < alpha.size(); ++i) coeffs->push_back(f(alpha.peak(i)));
  check_finite(*coeffs, "apply_P");
  auto part = std::make_shared<PointedPartition>(alpha);
  return [coeffs, part](std::span<const double> xstar) {
    return part->apply(*coeffs, xstar);
  };
}

PapReport verify_pap_bound(const PointedPartition& alpha, const ControllingFamilySpec& spec,
                           const LatticeExpr& f, double p, const AscentConfig& config) {
  HomogeneousFn fn = [&f](std::span<const double> x) { return f(x); };
  HomogeneousFn pf = apply_P(alpha, fn);
  NormEstimate est = fbl_p_lower_fn(pf, f.space(), p, 8, config);

  PapReport rep;
  rep.diam = alpha.diam();
  rep.omega = modulus(spec, rep.diam);
  rep.bound = 1.0 + rep.omega / spec.c;
  rep.measured = est.lower;
  rep.excess = std::max(0.0, rep.measured - 1.0);
  return rep;
}

}  // namespace fbl
